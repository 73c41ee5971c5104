#!/usr/bin/env python3
"""
Tests for top-word extraction, topic reports and the polysemy audit.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from models.corpus import EmbeddingTable
from phases.evaluate import assignment_groups, polysemy_report, top_words, topic_reports
from phases.evaluate.polysemy import group_label
from phases.train import train
from tests.toy_data import toy_state


def test_top_word_ties_follow_density():
    print("Testing top-word ranking and tie breaks...")
    # w0 at 0, w1 at 5, w2 at 0.1; counts w2:4, w0:3, w1:3
    embeddings = EmbeddingTable(np.array([[0.0], [5.0], [0.1]]))
    state = toy_state("glda", [[0, 0, 0, 1, 1, 1, 2, 2, 2, 2]], vocab_size=3, num_topics=1,
                      embeddings=embeddings)
    ranked = top_words(state, 0, n=10)
    assert [w for w, _ in ranked] == ["w2", "w0", "w1"], ranked
    assert [s for _, s in ranked] == [4.0, 3.0, 3.0]
    assert top_words(state, 0, n=2) == ranked[:2]
    print("✅ Count first, predictive density breaks ties")


def test_empty_topic_and_reports():
    print("Testing empty topics and report fields...")
    state = toy_state("lda", [[0]], vocab_size=2, num_topics=3)
    reports = topic_reports(state, n=5)
    assert len(reports) == 3
    assert sum(r.assignment_count for r in reports) == 1
    assert sum(1 for r in reports if r.top_words == []) == 2
    assert all("level" not in r.to_dict() for r in reports)

    rng = np.random.default_rng(0)
    docs = [[int(w) for w in rng.integers(8, size=10)] for _ in range(6)]
    tree_state = toy_state("hlda", docs, vocab_size=8, branch_spec=[1, 2, 2])
    reports = topic_reports(tree_state, n=3)
    assert [r.topic_id for r in reports] == tree_state.topic_ids()
    root = reports[0]
    assert root.level == 0 and root.path == (tree_state.tree.root,) and root.doc_count == 6
    assert sum(r.assignment_count for r in reports) == 60
    assert all(len(r.top_words) <= 3 for r in reports)
    print("✅ Empty topics give no words, tree reports carry level and path")


def test_polysemy_groups():
    print("Testing polysemy grouping...")
    state = toy_state("lda", [[0] * 12 + [1] * 3, [0] * 12], vocab_size=2, num_topics=2, seed=1)
    # word 0 split 20 / 4 between topics, word 1 wholly in topic 1
    state.assignments.topics[0] = np.array([0] * 10 + [1] * 2 + [1] * 3)
    state.assignments.topics[1] = np.array([0] * 10 + [1] * 2)
    entries = polysemy_report(state, min_count=3)
    assert [e.word for e in entries] == ["w0", "w1"]
    w0, w1 = entries
    assert w0.total == 24 and w0.groups == [(0, 20), (1, 4)] and w0.polysemous
    assert w1.groups == [(1, 3)] and not w1.polysemous
    for entry in entries:
        assert sum(count for _, count in entry.groups) == entry.total
        assert abs(sum(entry.shares()) - 1.0) < 1e-12

    # 1/24 is below a 5% share
    state.assignments.topics[0] = np.array([0] * 11 + [1] + [1] * 3)
    state.assignments.topics[1] = np.array([0] * 12)
    assert not polysemy_report(state, min_count=3)[0].polysemous
    assert polysemy_report(state, min_count=100) == []
    print("✅ Group counts sum to totals, 5% share threshold")


def test_hierarchical_groups_are_path_levels():
    print("Testing (path, level) groups...")
    rng = np.random.default_rng(2)
    docs = [[int(w) for w in rng.integers(6, size=12)] for _ in range(8)]
    state = toy_state("ghlda", docs, vocab_size=6, branch_spec=[1, 2, 2], dim=2)
    train(state, 1)
    groups = assignment_groups(state)
    for counter in groups.values():
        for (path, level) in counter:
            assert len(path) == 3 and 0 <= level < 3
    assert sum(sum(c.values()) for c in groups.values()) == 96
    assert group_label(((0, 1, 5), 2)) == "0-1-5@2"
    assert group_label(4) == "topic 4"
    print("✅ Hierarchical tokens grouped by path and level")


if __name__ == "__main__":
    print("\n" + "=" * 50)
    print("Testing topic reports and polysemy")
    print("=" * 50 + "\n")

    test_top_word_ties_follow_density()
    test_empty_topic_and_reports()
    test_polysemy_groups()
    test_hierarchical_groups_are_path_levels()

    print("\n" + "=" * 50)
    print("✅ All topic report tests passed!")
    print("=" * 50)

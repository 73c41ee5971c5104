#!/usr/bin/env python3
"""
Tests for co-occurrence counting and PMI coherence.
"""

import math
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from phases.evaluate import (
    CooccurrenceStats,
    TopicReport,
    build_cooccurrence,
    load_or_build_cooccurrence,
    pmi,
    pmi_coherence,
)
from utils.errors import ConfigurationError


def report(topic_id: int, *words: str) -> TopicReport:
    return TopicReport(topic_id=topic_id, top_words=[(w, 1.0) for w in words], assignment_count=len(words))


def test_window_counting():
    print("Testing document and sliding windows...")
    docs = [["a", "b", "a"], ["b", "c"]]
    whole = build_cooccurrence(docs)
    assert whole.total_windows == 2
    assert whole.count("a") == 1 and whole.count("b") == 2
    assert whole.pair_count("b", "a") == 1 and whole.pair_count("a", "c") == 0

    sliding = build_cooccurrence([["a", "b", "c", "d"], ["e"]], window=2)
    # {a,b} {b,c} {c,d} plus one window for the short document
    assert sliding.total_windows == 4
    assert sliding.count("b") == 2 and sliding.pair_count("a", "b") == 1 and sliding.pair_count("a", "c") == 0

    restricted = build_cooccurrence(docs, vocabulary=["a"])
    assert restricted.total_windows == 2 and "b" not in restricted
    try:
        build_cooccurrence(docs, window=0)
        assert False
    except ConfigurationError:
        pass
    print("✅ Window and pair counts by hand")


def test_pmi_log_two():
    """Two words always together, each in half the windows."""
    print("Testing PMI = log 2...")
    cooc = build_cooccurrence([["a", "b"], ["a", "b"], ["c"], ["c"]])
    assert abs(pmi(cooc, "a", "b", 0.0) - math.log(2)) < 1e-9
    result = pmi_coherence([report(0, "a", "b")], cooc, top_n=10, epsilon=0.0)
    assert abs(result.per_topic[0] - math.log(2)) < 1e-9
    assert abs(result.mean - math.log(2)) < 1e-9
    print("✅ log 2")


def test_pmi_independence_and_saturation():
    print("Testing independent and saturated pairs...")
    independent = build_cooccurrence([["a", "b"], ["a", "x"], ["b", "x"], ["x"]])
    assert abs(pmi(independent, "a", "b", 0.0)) < 1e-9

    saturated = build_cooccurrence([["a", "b"], ["b", "a"]])
    assert abs(pmi(saturated, "a", "b", 0.0)) < 1e-9

    disjoint = build_cooccurrence([["a"], ["b"]])
    assert pmi(disjoint, "a", "b", 0.0) == -math.inf
    smoothed = pmi_coherence([report(0, "a", "b")], disjoint)
    assert smoothed.epsilon == 0.5
    assert abs(smoothed.per_topic[0] - math.log(0.5 / 0.25)) < 1e-9
    print("✅ PMI 0 for independence and saturation, smoothing keeps disjoint pairs finite")


def test_coherence_edge_cases():
    print("Testing coherence edge cases...")
    cooc = build_cooccurrence([["a", "b", "c"], ["a", "b"], ["c", "d"], ["d"]])
    topics = [report(0, "a", "b", "c"), report(1, "c", "a", "b"), report(2, "a", "zzz"), report(3, "d", "c")]
    result = pmi_coherence(topics, cooc, top_n=10, epsilon=0.0)

    assert abs(result.per_topic[0] - result.per_topic[1]) < 1e-12, "Order of top words must not matter"
    assert result.per_topic[2] is None
    assert result.skipped_pairs == 1
    scored = [result.per_topic[k] for k in (0, 1, 3)]
    assert abs(result.mean - sum(scored) / 3) < 1e-12

    truncated = pmi_coherence([report(0, "a", "b", "c")], cooc, top_n=2, epsilon=0.0)
    assert abs(truncated.per_topic[0] - pmi(cooc, "a", "b", 0.0)) < 1e-12

    try:
        pmi_coherence(topics, cooc, top_n=1)
        assert False
    except ConfigurationError:
        pass
    try:
        pmi_coherence(topics, CooccurrenceStats())
        assert False
    except ConfigurationError:
        pass
    print("✅ Permutation invariant, unresolvable topics skipped")


def test_cooccurrence_cache():
    print("Testing co-occurrence cache...")
    docs = [["a", "b"], ["b", "c"], ["c"]]
    with tempfile.TemporaryDirectory() as tmp:
        first = load_or_build_cooccurrence(docs, "document", Path(tmp), vocabulary=["a", "b", "c"])
        files = list(Path(tmp).glob("cooccurrence_*.json"))
        assert len(files) == 1
        second = load_or_build_cooccurrence(docs, "document", Path(tmp), vocabulary=["a", "b", "c"])
        assert second.to_dict() == first.to_dict()

        load_or_build_cooccurrence(docs, 2, Path(tmp), vocabulary=["a", "b", "c"])
        assert len(list(Path(tmp).glob("cooccurrence_*.json"))) == 2
    assert CooccurrenceStats.from_dict(first.to_dict()).pair_count("a", "b") == 1
    print("✅ Cache keyed by corpus, window and vocabulary")


if __name__ == "__main__":
    print("\n" + "=" * 50)
    print("Testing PMI coherence")
    print("=" * 50 + "\n")

    test_window_counting()
    test_pmi_log_two()
    test_pmi_independence_and_saturation()
    test_coherence_edge_cases()
    test_cooccurrence_cache()

    print("\n" + "=" * 50)
    print("✅ All coherence tests passed!")
    print("=" * 50)

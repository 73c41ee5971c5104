#!/usr/bin/env python3
"""
Tests for the nCRP topic tree: construction, path enumeration, the path
prior, attach/detach bookkeeping and garbage collection.
"""

import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from core.dirichlet import WordCountStats
from core.tree import CandidatePath, TopicTree, build_complete_tree
from utils.errors import ConfigurationError, TreeStateError


def no_payload(level):
    return None


def test_complete_tree_shapes():
    print("Testing complete tree construction...")
    for spec, nodes, paths in (([1, 1, 4, 4], 22, 16), ([1, 1], 2, 1), ([1, 2, 2], 7, 4)):
        tree = build_complete_tree(spec, gamma=0.1, payload_factory=no_payload)
        assert tree.node_count == nodes, f"{spec}: {tree.node_count} nodes"
        assert tree.path_count == paths, f"{spec}: {tree.path_count} paths"
        assert tree.depth == len(spec)
    assert build_complete_tree([1, 2, 2], 0.1, no_payload).nodes_per_level() == [1, 2, 4]

    for bad in ([2, 1], [1, 0], []):
        try:
            build_complete_tree(bad, 0.1, no_payload)
            assert False, f"{bad} should be rejected"
        except ConfigurationError:
            pass
    print("✅ [1,1,4,4]=22 nodes, [1,1]=2, [1,2,2]=7")


def test_enumerate_paths():
    print("Testing path enumeration...")
    tree = build_complete_tree([1, 2, 2], 0.1, no_payload)
    existing = tree.enumerate_paths(allow_new=False)
    assert len(existing) == 4 and all(p.is_existing for p in existing)
    everything = tree.enumerate_paths(allow_new=True)
    # one new branch under the root and under each level-1 node
    assert len(everything) == 4 + 3
    new = [p for p in everything if not p.is_existing]
    assert sorted(p.branch_level for p in new) == [1, 2, 2]
    assert new[-1].label() == "0-new-new"
    assert new[-1].is_new == (False, True, True)
    assert all(p.is_new == (False,) * p.branch_level + (True,) * (3 - p.branch_level) for p in new)
    assert all(not any(p.is_new) for p in existing)
    print("✅ Existing paths plus one candidate per internal node")


def random_tree(rng: np.random.Generator, max_nodes: int = 50) -> TopicTree:
    depth = int(rng.integers(2, 5))
    tree = TopicTree(depth=depth, gamma=float(rng.uniform(0.05, 3.0)), payload_factory=no_payload)
    doc = 0
    while tree.node_count < max_nodes - depth:
        candidates = tree.enumerate_paths(allow_new=True)
        tree.attach(doc, candidates[int(rng.integers(len(candidates)))])
        doc += 1
        if doc > 60:
            break
    return tree


def test_path_prior_normalises():
    """exp(path_log_prior) sums to 1 over all candidates on 50 random trees."""
    print("Testing nCRP path prior normalisation on 50 random trees...")
    rng = np.random.default_rng(42)
    for i in range(50):
        tree = random_tree(rng)
        held_out = tree.attached_documents
        total = sum(math.exp(tree.path_log_prior(c, excluding_doc=held_out)) for c in tree.enumerate_paths())
        assert abs(total - 1.0) < 1e-10, f"tree {i}: prior mass {total}"
    print("✅ Prior mass is 1 within 1e-10")


def test_path_prior_values():
    print("Testing path prior values...")
    tree = build_complete_tree([1, 2], gamma=0.5, payload_factory=no_payload)
    left, right = tree.enumerate_paths(allow_new=False)
    tree.attach(0, left)
    tree.attach(1, left)
    tree.attach(2, right)
    priors = {c.label(): math.exp(tree.path_log_prior(c)) for c in tree.enumerate_paths()}
    assert abs(priors[left.label()] - 2 / 3.5) < 1e-12
    assert abs(priors[right.label()] - 1 / 3.5) < 1e-12
    assert abs(priors["0-new"] - 0.5 / 3.5) < 1e-12
    try:
        tree.path_log_prior(left, excluding_doc=0)
        assert False, "Scoring with the document still attached should fail"
    except TreeStateError:
        pass
    print("✅ n_c / (gamma + n) and gamma / (gamma + n)")


def test_attach_detach_and_collection():
    print("Testing attach, detach and garbage collection...")
    tree = TopicTree(depth=3, gamma=1.0, payload_factory=lambda level: WordCountStats(5, 1.0))
    new_branch = tree.enumerate_paths()[-1]
    path = tree.attach(0, new_branch)
    assert len(path) == 3 and tree.node_count == 3
    assert tree.path_of(0) == path

    tree.nodes[path[2]].payload.add_word(1)
    try:
        tree.detach(0)
        assert False, "Collecting a node that still holds tokens should fail"
    except TreeStateError:
        pass

    tree = TopicTree(depth=3, gamma=1.0, payload_factory=lambda level: WordCountStats(5, 1.0))
    path = tree.attach(0, tree.enumerate_paths()[-1])
    other = tree.attach(1, CandidatePath((path[0], path[1], None)))
    assert other[:2] == path[:2] and other[2] != path[2]
    tree.detach(0)
    assert tree.node_count == 3 and path[2] not in tree.nodes
    tree.detach(1)
    assert tree.node_count == 1 and tree.attached_documents == 0

    try:
        tree.detach(1)
        assert False, "Detaching an unattached document should fail"
    except TreeStateError:
        pass
    print("✅ Emptied nodes collected, invalid detaches rejected")


def test_structure_round_trip():
    print("Testing structure snapshot...")
    tree = build_complete_tree([1, 2, 2], 0.3, no_payload)
    for doc, candidate in enumerate(tree.enumerate_paths(allow_new=False)):
        tree.attach(doc, candidate)
    restored = TopicTree.from_structure(tree.structure_dict(), no_payload)
    assert restored.structure_dict() == tree.structure_dict()
    assert abs(restored.log_partition_prior() - tree.log_partition_prior()) < 1e-12
    print("✅ Snapshot restores the same tree")


if __name__ == "__main__":
    print("\n" + "=" * 50)
    print("Testing nCRP topic tree")
    print("=" * 50 + "\n")

    test_complete_tree_shapes()
    test_enumerate_paths()
    test_path_prior_normalises()
    test_path_prior_values()
    test_attach_detach_and_collection()
    test_structure_round_trip()

    print("\n" + "=" * 50)
    print("✅ All tree tests passed!")
    print("=" * 50)

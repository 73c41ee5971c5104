"""
Joint log-likelihood of the collapsed model, log p(w, z) for flat models
and log p(w, c, z) for hierarchical ones.

Terms:
    flat          Dirichlet-multinomial document-topic term per document
    hierarchical  truncated-GEM level term per document + nCRP partition
    both          evidence of every topic's words (NIW or Dirichlet marginal)
"""

import logging
import math
from collections import Counter
from typing import Dict, List

import numpy as np
from scipy.special import gammaln

from core.gem import gem_log_joint
from models.state import ModelState

logger = logging.getLogger(__name__)


def document_topic_log_likelihood(doc_topic_counts: np.ndarray, alpha: float) -> float:
    counts = np.asarray(doc_topic_counts, dtype=float)
    num_topics = counts.shape[1]
    lengths = counts.sum(axis=1)
    return float(
        np.sum(gammaln(num_topics * alpha) - gammaln(num_topics * alpha + lengths))
        + np.sum(gammaln(alpha + counts) - gammaln(alpha))
    )


def level_log_likelihood(doc_level_counts: np.ndarray, m: float, b: float) -> float:
    return float(np.sum(gem_log_joint(doc_level_counts, m, b)))


def partition_log_prior(doc_counts: Dict[int, int], children: Dict[int, List[int]],
                        gamma: float) -> float:
    """
    nCRP probability of a document-to-path configuration: a Chinese
    restaurant partition of each internal node's documents among its children.
    """
    total = 0.0
    log_gamma = math.log(gamma)
    for node_id, kids in children.items():
        n = doc_counts.get(node_id, 0)
        occupied = [doc_counts[c] for c in kids if doc_counts.get(c, 0) > 0]
        if n == 0 or not occupied:
            continue
        total += len(occupied) * log_gamma
        total += float(np.sum(gammaln(np.asarray(occupied, dtype=float))))
        total += float(gammaln(gamma) - gammaln(gamma + n))
    return total


def joint_log_likelihood(state: ModelState) -> float:
    """Joint log-likelihood from the cached counts and payloads."""
    params = state.hyperparams
    emission = state.emission
    if state.is_hierarchical:
        structural = (
            level_log_likelihood(state.doc_level_counts, params.m, params.b)
            + state.tree.log_partition_prior()
        )
        payloads = [node.payload for node in state.tree.nodes.values()]
    else:
        structural = document_topic_log_likelihood(state.doc_topic_counts, params.alpha)
        payloads = state.topics
    return structural + float(sum(emission.log_evidence(p) for p in payloads))


def recompute_joint_log_likelihood(state: ModelState) -> float:
    """
    Joint log-likelihood rebuilt from the assignments alone, ignoring every
    cached count and incremental Cholesky factor.
    """
    params = state.hyperparams
    emission = state.emission
    docs = state.documents

    if not state.is_hierarchical:
        num_topics = len(state.topics)
        counts = np.vstack([np.bincount(t, minlength=num_topics) for t in state.assignments.topics])
        words: Dict[int, List[int]] = {k: [] for k in range(num_topics)}
        for doc, topics in zip(docs, state.assignments.topics):
            for word, k in zip(doc.tokens, topics):
                words[int(k)].append(word)
        evidence = sum(emission.log_evidence(emission.batch_payload(0, w)) for w in words.values())
        return document_topic_log_likelihood(counts, params.alpha) + float(evidence)

    tree = state.tree
    depth = tree.depth
    level_counts = np.vstack([np.bincount(lv, minlength=depth) for lv in state.assignments.levels])

    doc_counts: Counter = Counter()
    node_words: Dict[int, List[int]] = {}
    for doc, path, levels in zip(docs, state.assignments.paths, state.assignments.levels):
        doc_counts.update(path)
        for word, level in zip(doc.tokens, levels):
            node_words.setdefault(path[int(level)], []).append(word)

    children = {node_id: list(node.children) for node_id, node in tree.nodes.items()
                if node.level < depth - 1}
    evidence = sum(
        emission.log_evidence(emission.batch_payload(tree.nodes[node_id].level, w))
        for node_id, w in node_words.items()
    )
    return (
        level_log_likelihood(level_counts, params.m, params.b)
        + partition_log_prior(dict(doc_counts), children, params.gamma)
        + float(evidence)
    )

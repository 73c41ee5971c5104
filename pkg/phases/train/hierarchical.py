"""
Collapsed Gibbs sampler for the hierarchical models (hLDA and GhLDA).

A sweep over document d:
1. detach d: remove its tokens from the node payloads along its path and
   its document count from the tree (emptied nodes are collected)
2. path step: score every candidate path as
       nCRP prior + sum over levels of the set marginal of d's level-l words
       at the path's level-l node
   and draw one with Gumbel-max; hypothetical nodes score against
   prior-only payloads
3. level step: for each token, the truncated GEM weight of each level times
   the predictive of the word at the path's node for that level

Node marginals are cached per node id (and per level for hypothetical
nodes), so a document costs at most one set marginal per node whatever
the number of paths through it.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Hashable, List, Sequence, Tuple

import numpy as np

from core.gem import gem_stick_log_weights
from core.sampling import log_normalize, sample_log_categorical
from core.tree import CandidatePath
from models.state import ModelState
from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

NodeKey = Hashable


def node_key(path: CandidatePath, level: int) -> NodeKey:
    node_id = path.nodes[level]
    return ("new", level) if node_id is None else node_id


class HierarchicalGibbsSampler:
    """Path and level sampler over the state's nCRP tree."""

    def __init__(self, state: ModelState, max_workers: int = 1):
        if not state.is_hierarchical:
            raise ConfigurationError(f"HierarchicalGibbsSampler cannot drive a {state.model} state")
        self.state = state
        self.max_workers = max(1, int(max_workers))
        self.m = state.hyperparams.m
        self.b = state.hyperparams.b

    @property
    def depth(self) -> int:
        return self.state.tree.depth

    def words_by_level(self, d: int) -> List[List[int]]:
        state = self.state
        grouped: List[List[int]] = [[] for _ in range(self.depth)]
        for word, level in zip(state.documents[d].tokens, state.assignments.levels[d]):
            grouped[int(level)].append(word)
        return grouped

    # ------------------------------------------------------------------
    # Document attach / detach
    # ------------------------------------------------------------------

    def detach_document(self, d: int) -> Tuple[int, ...]:
        state = self.state
        path = state.assignments.paths[d]
        for level, words in enumerate(self.words_by_level(d)):
            state.emission.remove_many(state.tree.nodes[path[level]].payload, words)
        return state.tree.detach(d, path)

    def attach_document(self, d: int, candidate: CandidatePath) -> Tuple[int, ...]:
        state = self.state
        path = state.tree.attach(d, candidate)
        state.assignments.paths[d] = path
        for level, words in enumerate(self.words_by_level(d)):
            state.emission.add_many(state.tree.nodes[path[level]].payload, words)
        return path

    # ------------------------------------------------------------------
    # Path step
    # ------------------------------------------------------------------

    def _node_marginals(self, keys: Sequence[NodeKey], words: List[List[int]]) -> Dict[NodeKey, float]:
        state = self.state
        emission = state.emission
        hypothetical = {level: emission.new_payload(level) for level in range(self.depth)}

        def score(key: NodeKey) -> float:
            if isinstance(key, tuple):
                level = key[1]
                payload = hypothetical[level]
            else:
                node = state.tree.nodes[key]
                level = node.level
                payload = node.payload
            return emission.log_marginal_set(payload, words[level])

        if self.max_workers > 1 and len(keys) > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                values = list(executor.map(score, keys))
        else:
            values = [score(key) for key in keys]
        return dict(zip(keys, values))

    def path_log_scores(self, d: int, allow_new: bool = True) -> Tuple[List[CandidatePath], np.ndarray]:
        """
        Unnormalised log posterior of every candidate path for a detached document.
        """
        tree = self.state.tree
        words = self.words_by_level(d)
        candidates = tree.enumerate_paths(allow_new=allow_new)

        keys: List[NodeKey] = []
        seen = set()
        for candidate in candidates:
            for level in range(self.depth):
                if not words[level]:
                    continue
                key = node_key(candidate, level)
                if key not in seen:
                    seen.add(key)
                    keys.append(key)
        marginals = self._node_marginals(keys, words)

        scores = np.empty(len(candidates))
        for i, candidate in enumerate(candidates):
            total = tree.path_log_prior(candidate, excluding_doc=d)
            for level in range(self.depth):
                if words[level]:
                    total += marginals[node_key(candidate, level)]
            scores[i] = total
        return candidates, scores

    def path_log_conditional(self, d: int, allow_new: bool = True) -> Tuple[List[CandidatePath], np.ndarray]:
        candidates, scores = self.path_log_scores(d, allow_new)
        return candidates, log_normalize(scores)

    def path_step(self, d: int, allow_new: bool = True) -> Tuple[int, ...]:
        """Detach d (if attached), draw a new path and reattach its tokens."""
        state = self.state
        if state.tree.is_attached(d):
            self.detach_document(d)
        candidates, scores = self.path_log_scores(d, allow_new)
        choice = candidates[sample_log_categorical(state.rng, scores)]
        path = self.attach_document(d, choice)
        if not choice.is_existing:
            logger.debug(f"Document {d} opened a new branch at level {choice.branch_level}: {path}")
        return path

    # ------------------------------------------------------------------
    # Level step
    # ------------------------------------------------------------------

    def remove_token(self, d: int, n: int) -> int:
        state = self.state
        level = int(state.assignments.levels[d][n])
        state.emission.remove(state.node_payload(d, level), state.documents[d].tokens[n])
        state.doc_level_counts[d, level] -= 1
        return level

    def add_token(self, d: int, n: int, level: int) -> None:
        state = self.state
        state.assignments.levels[d][n] = level
        state.emission.add(state.node_payload(d, level), state.documents[d].tokens[n])
        state.doc_level_counts[d, level] += 1

    def level_log_scores(self, d: int, n: int) -> np.ndarray:
        """Unnormalised log conditional over levels 0..L-1 for the removed token (d, n)."""
        state = self.state
        path = state.assignments.paths[d]
        payloads = [state.tree.nodes[node_id].payload for node_id in path]
        log_gem = gem_stick_log_weights(state.doc_level_counts[d], self.m, self.b)
        return log_gem + state.emission.log_predictive_payloads(payloads, state.documents[d].tokens[n])

    def level_log_conditional(self, d: int, n: int) -> np.ndarray:
        """
        Normalised log conditional over levels 0..L-1 for token (d, n),
        which must already be removed.
        """
        return log_normalize(self.level_log_scores(d, n))

    def level_step(self, d: int, n: int) -> int:
        self.remove_token(d, n)
        level = sample_log_categorical(self.state.rng, self.level_log_scores(d, n))
        self.add_token(d, n, level)
        return level

    def document_step(self, d: int, allow_new: bool = True) -> None:
        self.path_step(d, allow_new=allow_new)
        for n in range(len(self.state.documents[d])):
            self.level_step(d, n)


def _require(state: ModelState, model: str, operation: str) -> None:
    if state.model != model:
        raise ConfigurationError(f"{operation} called on a {state.model} state")


def ghlda_path_step(state: ModelState, d: int, allow_new: bool = True,
                    max_workers: int = 1) -> Tuple[int, ...]:
    _require(state, "ghlda", "ghlda_path_step")
    return HierarchicalGibbsSampler(state, max_workers).path_step(d, allow_new)


def ghlda_level_step(state: ModelState, d: int, n: int) -> int:
    _require(state, "ghlda", "ghlda_level_step")
    return HierarchicalGibbsSampler(state).level_step(d, n)


def hlda_path_step(state: ModelState, d: int, allow_new: bool = True,
                   max_workers: int = 1) -> Tuple[int, ...]:
    _require(state, "hlda", "hlda_path_step")
    return HierarchicalGibbsSampler(state, max_workers).path_step(d, allow_new)


def hlda_level_step(state: ModelState, d: int, n: int) -> int:
    _require(state, "hlda", "hlda_level_step")
    return HierarchicalGibbsSampler(state).level_step(d, n)

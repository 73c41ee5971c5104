"""
Collapsed Gibbs sampler for the flat models (LDA and Gaussian LDA).

p(z_dn = k | rest) is proportional to

    (alpha + N_d^k) / (K alpha + N_d - 1) * p(w_dn | topic k without this token)

where the word factor is (beta + N^{kv}) / (V beta + N^k) for LDA and the
NIW Student-t predictive of the word's embedding for GLDA. Both come
from the state's emission, so the two models share this class.
"""

import logging
import math

import numpy as np

from core.sampling import log_normalize, sample_log_categorical
from models.state import ModelState
from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


class FlatGibbsSampler:
    """Token-level sampler over a fixed array of K topics."""

    def __init__(self, state: ModelState):
        if state.is_hierarchical:
            raise ConfigurationError(f"FlatGibbsSampler cannot drive a {state.model} state")
        self.state = state
        self.alpha = state.hyperparams.alpha

    @property
    def num_topics(self) -> int:
        return len(self.state.topics)

    def remove_token(self, d: int, n: int) -> int:
        state = self.state
        k = int(state.assignments.topics[d][n])
        state.emission.remove(state.topics[k], state.documents[d].tokens[n])
        state.doc_topic_counts[d, k] -= 1
        return k

    def add_token(self, d: int, n: int, k: int) -> None:
        state = self.state
        state.assignments.topics[d][n] = k
        state.emission.add(state.topics[k], state.documents[d].tokens[n])
        state.doc_topic_counts[d, k] += 1

    def token_log_scores(self, d: int, n: int) -> np.ndarray:
        """Unnormalised log conditional over topics for the removed token (d, n)."""
        state = self.state
        doc_counts = state.doc_topic_counts[d]
        others = int(doc_counts.sum())
        log_doc = np.log(self.alpha + doc_counts) - math.log(self.num_topics * self.alpha + others)
        return log_doc + state.emission.log_predictive_payloads(state.topics, state.documents[d].tokens[n])

    def token_log_conditional(self, d: int, n: int) -> np.ndarray:
        """
        Normalised log conditional over topics for token (d, n).

        The token must already be removed from all counts.
        """
        return log_normalize(self.token_log_scores(d, n))

    def token_step(self, d: int, n: int) -> int:
        self.remove_token(d, n)
        k = sample_log_categorical(self.state.rng, self.token_log_scores(d, n))
        self.add_token(d, n, k)
        return k

    def document_step(self, d: int) -> None:
        for n in range(len(self.state.documents[d])):
            self.token_step(d, n)


def lda_token_step(state: ModelState, d: int, n: int) -> int:
    """Resample the topic of token (d, n) under LDA."""
    if state.model != "lda":
        raise ConfigurationError(f"lda_token_step called on a {state.model} state")
    return FlatGibbsSampler(state).token_step(d, n)


def glda_token_step(state: ModelState, d: int, n: int) -> int:
    """Resample the topic of token (d, n) under Gaussian LDA; costs K density evaluations."""
    if state.model != "glda":
        raise ConfigurationError(f"glda_token_step called on a {state.model} state")
    return FlatGibbsSampler(state).token_step(d, n)

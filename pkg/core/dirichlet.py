"""
Dirichlet-multinomial word-count statistics for the multinomial topic models.
"""

import math
from collections import Counter
from typing import Any, Dict, Iterable

import numpy as np
from scipy.special import gammaln

from utils.errors import ConfigurationError, NumericalError


class WordCountStats:
    """Word counts of one topic under a symmetric Dirichlet(eta) prior."""

    def __init__(self, vocab_size: int, eta: float):
        if vocab_size < 1:
            raise ConfigurationError(f"vocab_size must be positive, got {vocab_size}")
        if not eta > 0:
            raise ConfigurationError(f"Dirichlet weight must be positive, got {eta}")
        self.vocab_size = vocab_size
        self.eta = float(eta)
        self.counts = np.zeros(vocab_size, dtype=np.int64)
        self.n = 0

    def add_word(self, word_id: int) -> None:
        self.counts[word_id] += 1
        self.n += 1

    def remove_word(self, word_id: int) -> None:
        if self.counts[word_id] < 1:
            raise NumericalError(f"remove_word({word_id}) on a zero count")
        self.counts[word_id] -= 1
        self.n -= 1

    def log_predictive(self, word_id: int) -> float:
        """log (eta + n_v) / (V eta + n)"""
        return math.log(self.eta + self.counts[word_id]) - math.log(self.vocab_size * self.eta + self.n)

    def predictive_distribution(self) -> np.ndarray:
        return (self.eta + self.counts) / (self.vocab_size * self.eta + self.n)

    def log_marginal_set(self, word_ids: Iterable[int]) -> float:
        """Log probability of adding the multiset word_ids (ratio of Gamma functions)."""
        added = Counter(int(w) for w in word_ids)
        if not added:
            return 0.0
        t = sum(added.values())
        ids = np.fromiter(added.keys(), dtype=np.int64)
        extra = np.fromiter(added.values(), dtype=np.float64)
        current = self.counts[ids].astype(np.float64)
        total_prior = self.vocab_size * self.eta
        return float(
            np.sum(gammaln(self.eta + current + extra) - gammaln(self.eta + current))
            + gammaln(total_prior + self.n)
            - gammaln(total_prior + self.n + t)
        )

    def log_evidence(self) -> float:
        """Log marginal likelihood of all held words under the prior."""
        if self.n == 0:
            return 0.0
        nonzero = self.counts[self.counts > 0].astype(np.float64)
        total_prior = self.vocab_size * self.eta
        return float(
            gammaln(total_prior) - gammaln(total_prior + self.n)
            + np.sum(gammaln(self.eta + nonzero) - gammaln(self.eta))
        )

    def copy(self) -> "WordCountStats":
        other = WordCountStats(self.vocab_size, self.eta)
        other.counts = self.counts.copy()
        other.n = self.n
        return other

    def to_dict(self) -> Dict[str, Any]:
        nonzero = np.flatnonzero(self.counts)
        return {
            "n": self.n,
            "eta": self.eta,
            "counts": {str(int(v)): int(self.counts[v]) for v in nonzero},
        }

    @classmethod
    def from_dict(cls, vocab_size: int, data: Dict[str, Any]) -> "WordCountStats":
        stats = cls(vocab_size, data["eta"])
        for word_id, count in data["counts"].items():
            stats.counts[int(word_id)] = int(count)
        stats.n = int(data["n"])
        return stats

"""
Emission strategies shared by the flat and hierarchical samplers.

An emission turns vocabulary ids into per-topic statistics and scores:
GaussianEmission works on embedding rows through NIW statistics,
MultinomialEmission on word counts through Dirichlet statistics. The
samplers only ever talk to this interface, so LDA/GLDA and hLDA/GhLDA
share their control flow.
"""

import logging
import threading
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
from scipy.special import logsumexp

from core.dirichlet import WordCountStats
from core.gaussian import GaussianTopicStats, NIWPrior, new_stats
from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

Payload = Union[GaussianTopicStats, WordCountStats]


class _CountingEmission:
    """Thread-safe density-evaluation counter."""

    def __init__(self):
        self.density_evaluations = 0
        self._lock = threading.Lock()

    def _count(self, amount: int = 1) -> None:
        with self._lock:
            self.density_evaluations += amount


class GaussianEmission(_CountingEmission):
    """Topics as NIW-Gaussians over word embeddings, with per-level Psi scaling."""

    kind = "gaussian"

    def __init__(self, embeddings: np.ndarray, prior: NIWPrior,
                 level_psi_ratios: Optional[Sequence[float]] = None):
        super().__init__()
        self.embeddings = np.asarray(embeddings, dtype=float)
        if self.embeddings.ndim != 2 or self.embeddings.shape[1] != prior.dim:
            raise ConfigurationError(
                f"Embedding matrix shape {self.embeddings.shape} does not match prior dimension {prior.dim}"
            )
        self.prior = prior
        ratios = list(level_psi_ratios) if level_psi_ratios else [1.0]
        self.level_priors = [prior if r == 1.0 else prior.scaled(r) for r in ratios]

    @property
    def vocab_size(self) -> int:
        return self.embeddings.shape[0]

    def prior_for_level(self, level: int) -> NIWPrior:
        return self.level_priors[min(level, len(self.level_priors) - 1)]

    def new_payload(self, level: int = 0) -> GaussianTopicStats:
        return new_stats(self.prior_for_level(level))

    def add(self, payload: GaussianTopicStats, word_id: int) -> None:
        payload.add_point(self.embeddings[word_id])

    def remove(self, payload: GaussianTopicStats, word_id: int) -> None:
        payload.remove_point(self.embeddings[word_id])

    def add_many(self, payload: GaussianTopicStats, word_ids: Sequence[int]) -> None:
        payload.add_points(self.embeddings[np.asarray(word_ids, dtype=np.int64)])

    def remove_many(self, payload: GaussianTopicStats, word_ids: Sequence[int]) -> None:
        payload.remove_points(self.embeddings[np.asarray(word_ids, dtype=np.int64)])

    def log_predictive(self, payload: GaussianTopicStats, word_id: int) -> float:
        self._count()
        return payload.log_predictive(self.embeddings[word_id])

    def log_predictive_payloads(self, payloads: Sequence[GaussianTopicStats], word_id: int) -> np.ndarray:
        """Predictive of one word under each payload; counts one evaluation per payload."""
        self._count(len(payloads))
        x = self.embeddings[word_id]
        return np.array([payload.log_predictive(x) for payload in payloads])

    def log_marginal_set(self, payload: GaussianTopicStats, word_ids: Sequence[int]) -> float:
        if len(word_ids) == 0:
            return 0.0
        self._count()
        return payload.log_marginal_set(self.embeddings[np.asarray(word_ids, dtype=np.int64)])

    def log_evidence(self, payload: GaussianTopicStats) -> float:
        return payload.log_evidence()

    def word_log_scores(self, payload: GaussianTopicStats) -> np.ndarray:
        """Unnormalised per-word log predictive (not counted)."""
        return payload.log_predictive_many(self.embeddings)

    def topic_word_distribution(self, payload: GaussianTopicStats) -> np.ndarray:
        """Student-t predictive of every vocabulary embedding, normalised over the vocabulary."""
        scores = self.word_log_scores(payload)
        return np.exp(scores - logsumexp(scores))

    def batch_payload(self, level: int, word_ids: Sequence[int]) -> GaussianTopicStats:
        prior = self.prior_for_level(level)
        return GaussianTopicStats.from_points(prior, self.embeddings[np.asarray(word_ids, dtype=np.int64)])

    def payload_to_dict(self, payload: GaussianTopicStats) -> Dict[str, Any]:
        return payload.to_dict()

    def payload_from_dict(self, level: int, data: Dict[str, Any]) -> GaussianTopicStats:
        return GaussianTopicStats.from_dict(self.prior_for_level(level), data)


class MultinomialEmission(_CountingEmission):
    """Topics as Dirichlet-multinomials over vocabulary ids, with per-level eta."""

    kind = "multinomial"

    def __init__(self, vocab_size: int, eta_levels: Sequence[float]):
        super().__init__()
        if not eta_levels:
            raise ConfigurationError("At least one Dirichlet weight is required")
        self._vocab_size = vocab_size
        self.eta_levels = [float(e) for e in eta_levels]

    @property
    def vocab_size(self) -> int:
        return self._vocab_size

    def eta_for_level(self, level: int) -> float:
        return self.eta_levels[min(level, len(self.eta_levels) - 1)]

    def new_payload(self, level: int = 0) -> WordCountStats:
        return WordCountStats(self._vocab_size, self.eta_for_level(level))

    def add(self, payload: WordCountStats, word_id: int) -> None:
        payload.add_word(word_id)

    def remove(self, payload: WordCountStats, word_id: int) -> None:
        payload.remove_word(word_id)

    def add_many(self, payload: WordCountStats, word_ids: Sequence[int]) -> None:
        for word_id in word_ids:
            payload.add_word(word_id)

    def remove_many(self, payload: WordCountStats, word_ids: Sequence[int]) -> None:
        for word_id in word_ids:
            payload.remove_word(word_id)

    def log_predictive(self, payload: WordCountStats, word_id: int) -> float:
        self._count()
        return payload.log_predictive(word_id)

    def log_predictive_payloads(self, payloads: Sequence[WordCountStats], word_id: int) -> np.ndarray:
        self._count(len(payloads))
        return np.array([payload.log_predictive(word_id) for payload in payloads])

    def log_marginal_set(self, payload: WordCountStats, word_ids: Sequence[int]) -> float:
        if len(word_ids) == 0:
            return 0.0
        self._count()
        return payload.log_marginal_set(word_ids)

    def log_evidence(self, payload: WordCountStats) -> float:
        return payload.log_evidence()

    def word_log_scores(self, payload: WordCountStats) -> np.ndarray:
        return np.log(payload.predictive_distribution())

    def topic_word_distribution(self, payload: WordCountStats) -> np.ndarray:
        return payload.predictive_distribution()

    def batch_payload(self, level: int, word_ids: Sequence[int]) -> WordCountStats:
        payload = self.new_payload(level)
        payload.counts = np.bincount(np.asarray(word_ids, dtype=np.int64), minlength=self._vocab_size)
        payload.n = int(len(word_ids))
        return payload

    def payload_to_dict(self, payload: WordCountStats) -> Dict[str, Any]:
        return payload.to_dict()

    def payload_from_dict(self, level: int, data: Dict[str, Any]) -> WordCountStats:
        return WordCountStats.from_dict(self._vocab_size, data)


Emission = Union[GaussianEmission, MultinomialEmission]

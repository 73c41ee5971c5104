"""
Left-to-right held-out likelihood.

Each particle carries its own assignments for the positions already
read. At position n every particle reports the predictive probability
of w_n given its history; the mean over particles estimates
p(w_n | w_<n). Particles are then resampled in proportion to those
weights and each draws an assignment for w_n from its exact
conditional, so the product of the per-position means is an unbiased
estimate of p(w_1..N).

Flat models: particles hold topic assignments and topic-word
probabilities theta[k, v] are fixed from the trained model.

Hierarchical models: particles hold level assignments; the document's
path is marginalised exactly per particle over the enumerated candidate
paths (existing and new-branch), weighted by the nCRP prior.

Weights stay in log space throughout.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from core.gem import gem_level_log_weights
from core.sampling import sample_rows
from models.corpus import Document
from models.state import ModelState
from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass
class HeldoutResult:
    per_document: List[float]
    doc_ids: List[int]
    mean: float
    particles: int
    seed: int
    relative_standard_errors: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mean": self.mean,
            "particles": self.particles,
            "seed": self.seed,
            "per_document": [{"doc_id": d, "log_likelihood": v, "relative_standard_error": se}
                             for d, v, se in zip(self.doc_ids, self.per_document, self.relative_standard_errors)],
        }


def log_particle_mean(log_weights: np.ndarray) -> float:
    """log of the mean particle weight, computed without leaving log space."""
    return float(logsumexp(log_weights)) - math.log(log_weights.shape[0])


def relative_standard_error(position_log_weights: Sequence[np.ndarray]) -> float:
    """
    Particle standard error of the likelihood estimate divided by the
    estimate: std / (mean * sqrt(R)) of each position's weights, combined
    in quadrature over positions.
    """
    total = 0.0
    for log_weights in position_log_weights:
        top = log_weights.max()
        if not np.isfinite(top):
            return float("nan")
        scaled = np.exp(log_weights - top)
        total += scaled.var() / (scaled.shape[0] * scaled.mean() ** 2)
    return math.sqrt(total)


def _resample(rng: np.random.Generator, log_joint: np.ndarray,
              log_weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Particle indices drawn by weight, and one assignment per survivor from its row of log_joint."""
    particles = log_joint.shape[0]
    keep = rng.choice(particles, size=particles, p=np.exp(log_weights - logsumexp(log_weights)))
    kept = log_joint[keep]
    return keep, sample_rows(rng, np.exp(kept - kept.max(axis=1, keepdims=True)))


def _log_of(theta: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(theta)


def _log_distribution(emission: Any, payload: Any) -> np.ndarray:
    scores = emission.word_log_scores(payload)
    return scores - logsumexp(scores)


class FlatPredictor:
    """Fixed theta (K x V) with a symmetric Dirichlet(alpha) over document topics."""

    def __init__(self, theta: np.ndarray, alpha: float, log_theta: Optional[np.ndarray] = None):
        self.theta = np.asarray(theta, dtype=float)
        self.log_theta = _log_of(self.theta) if log_theta is None else np.asarray(log_theta, dtype=float)
        self.alpha = float(alpha)

    @classmethod
    def from_state(cls, state: ModelState) -> "FlatPredictor":
        log_theta = np.vstack([_log_distribution(state.emission, p) for p in state.topics])
        return cls(np.exp(log_theta), state.hyperparams.alpha, log_theta)

    def position_log_weights(self, tokens: Sequence[int], particles: int,
                             rng: np.random.Generator) -> List[np.ndarray]:
        """Per-particle log p(w_n | particle history) at each position, in reading order."""
        num_topics = self.theta.shape[0]
        counts = np.zeros((particles, num_topics))
        rows = np.arange(particles)
        trace = []
        for n, word in enumerate(tokens):
            log_joint = (np.log(self.alpha + counts) - math.log(num_topics * self.alpha + n)
                         + self.log_theta[:, word])
            log_weights = logsumexp(log_joint, axis=1)
            trace.append(log_weights)
            if not np.isfinite(log_weights).any():
                break
            keep, topics = _resample(rng, log_joint, log_weights)
            counts = counts[keep]
            counts[rows, topics] += 1
        return trace

    def log_likelihood(self, tokens: Sequence[int], particles: int, rng: np.random.Generator) -> float:
        return sum(log_particle_mean(w) for w in self.position_log_weights(tokens, particles, rng))


class PathPredictor:
    """Fixed theta (P x L x V) per candidate path and level, nCRP path prior, GEM levels."""

    def __init__(self, theta: np.ndarray, log_path_prior: np.ndarray, m: float, b: float,
                 log_theta: Optional[np.ndarray] = None):
        self.theta = np.asarray(theta, dtype=float)
        self.log_theta = _log_of(self.theta) if log_theta is None else np.asarray(log_theta, dtype=float)
        self.log_path_prior = np.asarray(log_path_prior, dtype=float)
        self.m = float(m)
        self.b = float(b)

    @classmethod
    def from_state(cls, state: ModelState, allow_new: bool = True) -> "PathPredictor":
        tree = state.tree
        emission = state.emission
        cache: Dict[Any, np.ndarray] = {}

        def distribution(node_id, level):
            key = ("new", level) if node_id is None else node_id
            if key not in cache:
                payload = emission.new_payload(level) if node_id is None else tree.nodes[node_id].payload
                cache[key] = _log_distribution(emission, payload)
            return cache[key]

        candidates = tree.enumerate_paths(allow_new=allow_new)
        log_theta = np.stack([
            np.vstack([distribution(node_id, level) for level, node_id in enumerate(c.nodes)])
            for c in candidates
        ])
        log_prior = np.array([tree.path_log_prior(c) for c in candidates])
        keep = np.isfinite(log_prior)
        logger.debug(f"Path predictor over {int(keep.sum())} candidate paths")
        return cls(np.exp(log_theta[keep]), log_prior[keep], state.hyperparams.m, state.hyperparams.b,
                   log_theta[keep])

    def position_log_weights(self, tokens: Sequence[int], particles: int,
                             rng: np.random.Generator) -> List[np.ndarray]:
        """Per-particle log p(w_n | particle history) at each position, in reading order."""
        depth = self.theta.shape[1]
        log_post = np.tile(self.log_path_prior, (particles, 1))
        counts = np.zeros((particles, depth))
        rows = np.arange(particles)
        trace = []
        for word in tokens:
            log_post_normalised = log_post - logsumexp(log_post, axis=1, keepdims=True)
            log_mix = logsumexp(log_post_normalised[:, :, None] + self.log_theta[None, :, :, word], axis=1)
            log_joint = gem_level_log_weights(counts, self.m, self.b) + log_mix
            log_weights = logsumexp(log_joint, axis=1)
            trace.append(log_weights)
            if not np.isfinite(log_weights).any():
                break
            keep, levels = _resample(rng, log_joint, log_weights)
            counts, log_post = counts[keep], log_post[keep]
            counts[rows, levels] += 1
            log_post = log_post + self.log_theta[:, levels, word].T
        return trace

    def log_likelihood(self, tokens: Sequence[int], particles: int, rng: np.random.Generator) -> float:
        return sum(log_particle_mean(w) for w in self.position_log_weights(tokens, particles, rng))


Predictor = Union[FlatPredictor, PathPredictor]


def snapshot_predictor(state: ModelState) -> Predictor:
    """Freeze the trained topics into a predictor."""
    if state.is_hierarchical:
        return PathPredictor.from_state(state)
    return FlatPredictor.from_state(state)


def left_to_right(predictor: Predictor, docs: Sequence[Document], particles: int = 20,
                  seed: int = 0, max_workers: int = 1) -> HeldoutResult:
    """
    Held-out log-likelihood of each document, with its relative particle
    standard error.

    Every document gets its own generator seeded from (seed, doc_id), so
    results do not depend on evaluation order or threading.

    Raises:
        ConfigurationError: if particles < 1
    """
    if particles < 1:
        raise ConfigurationError(f"particles must be >= 1, got {particles}")

    def evaluate(doc: Document) -> Tuple[float, float]:
        rng = np.random.default_rng([seed, doc.doc_id])
        trace = predictor.position_log_weights(doc.tokens, particles, rng)
        return sum(log_particle_mean(w) for w in trace), relative_standard_error(trace)

    if max_workers > 1 and len(docs) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            results = list(executor.map(evaluate, docs))
    else:
        results = [evaluate(doc) for doc in docs]

    values = [float(value) for value, _ in results]
    mean = float(np.mean(values)) if values else float("nan")
    logger.info(f"Left-to-right over {len(docs)} documents, R={particles}: mean log-likelihood {mean:.4f}")
    return HeldoutResult(
        per_document=values,
        doc_ids=[doc.doc_id for doc in docs],
        mean=mean,
        particles=particles,
        seed=seed,
        relative_standard_errors=[float(se) for _, se in results],
    )

"""
Categorical sampling in log space.
"""

import numpy as np
from scipy.special import logsumexp


def log_normalize(log_weights: np.ndarray) -> np.ndarray:
    """Shift log weights so that they exponentiate to a distribution."""
    log_weights = np.asarray(log_weights, dtype=float)
    return log_weights - logsumexp(log_weights)


def sample_log_categorical(rng: np.random.Generator, log_weights: np.ndarray) -> int:
    """Gumbel-max draw from unnormalised log weights."""
    log_weights = np.asarray(log_weights, dtype=float)
    return int(np.argmax(log_weights + rng.gumbel(size=log_weights.shape[0])))


def sample_rows(rng: np.random.Generator, weights: np.ndarray) -> np.ndarray:
    """One categorical draw per row of a non-negative weight matrix."""
    cumulative = np.cumsum(weights, axis=1)
    thresholds = rng.random(weights.shape[0]) * cumulative[:, -1]
    choices = (cumulative < thresholds[:, None]).sum(axis=1)
    return np.minimum(choices, weights.shape[1] - 1)

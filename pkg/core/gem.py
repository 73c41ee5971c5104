"""
Truncated GEM(m, b) level distribution with collapsed stick proportions.

Given a document's per-level token counts N^l, the probability that the
next token stops at level l is

    (m b + N^l) / (b + N^{>=l}) * prod_{i<l} ((1-m) b + N^{>i}) / (b + N^{>=i})

All functions work on the last axis, so a (R, L) batch of count vectors
is handled in one call.
"""

import numpy as np
from scipy.special import betaln, logsumexp


def gem_stick_log_weights(counts: np.ndarray, m: float, b: float) -> np.ndarray:
    """Unnormalised log stopping weights for levels 0..L-1 (mass beyond L is dropped)."""
    counts = np.asarray(counts, dtype=float)
    at_or_below = np.cumsum(counts[..., ::-1], axis=-1)[..., ::-1]
    below = at_or_below - counts

    log_denominator = np.log(b + at_or_below)
    log_stop = np.log(m * b + counts) - log_denominator
    log_pass = np.log((1.0 - m) * b + below) - log_denominator

    passed = np.cumsum(log_pass, axis=-1) - log_pass
    return log_stop + passed


def gem_level_log_weights(counts: np.ndarray, m: float, b: float) -> np.ndarray:
    """Level distribution renormalised over the L truncated levels."""
    weights = gem_stick_log_weights(counts, m, b)
    return weights - logsumexp(weights, axis=-1, keepdims=True)


def gem_log_joint(counts: np.ndarray, m: float, b: float) -> np.ndarray:
    """
    Log probability of a document's level assignments under the truncated
    collapsed GEM; consistent with gem_level_log_weights as its conditional.
    """
    counts = np.asarray(counts, dtype=float)
    at_or_below = np.cumsum(counts[..., ::-1], axis=-1)[..., ::-1]
    below = at_or_below - counts
    terms = betaln(m * b + counts, (1.0 - m) * b + below) - betaln(m * b, (1.0 - m) * b)
    return np.sum(terms, axis=-1)

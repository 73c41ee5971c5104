#!/usr/bin/env python3
"""
Tests for the left-to-right held-out likelihood estimator.
"""

import itertools
import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from models.corpus import Document
from phases.evaluate import FlatPredictor, PathPredictor, left_to_right, relative_standard_error, snapshot_predictor
from phases.evaluate.heldout import log_particle_mean
from phases.train import train
from tests.toy_data import random_embeddings, toy_state
from utils.errors import ConfigurationError


def exact_flat_marginal(theta: np.ndarray, alpha: float, tokens) -> float:
    """p(w_1..N) by enumerating every topic sequence."""
    num_topics = theta.shape[0]
    total = 0.0
    for topics in itertools.product(range(num_topics), repeat=len(tokens)):
        counts = np.zeros(num_topics)
        p = 1.0
        for n, (k, word) in enumerate(zip(topics, tokens)):
            p *= (alpha + counts[k]) / (num_topics * alpha + n) * theta[k, word]
            counts[k] += 1
        total += p
    return total


def test_single_topic_is_exact():
    print("Testing K=1 closed form...")
    theta = np.array([[0.5, 0.3, 0.2]])
    tokens = [0, 2, 2, 1, 0]
    expected = float(np.sum(np.log(theta[0, tokens])))
    for particles in (1, 7, 50):
        value = FlatPredictor(theta, alpha=0.1).log_likelihood(tokens, particles, np.random.default_rng(0))
        assert abs(value - expected) < 1e-12, f"R={particles}: {value} vs {expected}"
    print("✅ Sum of log theta for any R")


def test_depth_one_tree_is_exact():
    print("Testing single-level hierarchy closed form...")
    theta = np.array([[[0.1, 0.6, 0.3]]])
    tokens = [1, 1, 2, 0]
    predictor = PathPredictor(theta, log_path_prior=np.array([0.0]), m=0.5, b=100.0)
    value = predictor.log_likelihood(tokens, 5, np.random.default_rng(1))
    assert abs(value - float(np.sum(np.log(theta[0, 0, tokens])))) < 1e-12
    print("✅ Degenerate tree reduces to a single distribution")


def test_estimator_matches_enumeration():
    """The mean of 100 runs at R=10^4 on a 2-topic, 3-token document matches enumeration."""
    print("Testing estimator against exhaustive enumeration (100 seeds, R=10^4)...")
    theta = np.array([[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]])
    alpha = 0.5
    tokens = [0, 2, 1]
    exact = exact_flat_marginal(theta, alpha, tokens)

    predictor = FlatPredictor(theta, alpha)
    estimates = np.array([
        math.exp(predictor.log_likelihood(tokens, 10_000, np.random.default_rng(seed)))
        for seed in range(100)
    ])
    spread = estimates.std(ddof=1)
    assert abs(estimates.mean() - exact) <= 3 * spread / math.sqrt(len(estimates))
    print(f"✅ Mean estimate {estimates.mean():.6f} vs exact {exact:.6f}")


def test_particle_standard_error_covers_exact_value():
    """
    Each run is scored against its own particle standard error. On a
    2-token document the particles are independent after the first
    position, so that error is the exact sampling error of the run.
    """
    print("Testing per-run particle standard errors (100 seeds, R=10^4)...")
    theta = np.array([[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]])
    alpha = 0.5
    tokens = [0, 2]
    exact = exact_flat_marginal(theta, alpha, tokens)

    predictor = FlatPredictor(theta, alpha)
    within = 0
    for seed in range(100):
        trace = predictor.position_log_weights(tokens, 10_000, np.random.default_rng(seed))
        estimate = math.exp(sum(log_particle_mean(w) for w in trace))
        standard_error = estimate * relative_standard_error(trace)
        assert standard_error > 0
        if abs(estimate - exact) <= 3 * standard_error:
            within += 1
    assert within >= 95, f"only {within}/100 seeds within 3 SE of {exact}"

    doc = Document(tokens=tokens, doc_id=0)
    result = left_to_right(predictor, [doc], particles=10_000, seed=0)
    trace = predictor.position_log_weights(tokens, 10_000, np.random.default_rng([0, 0]))
    assert result.relative_standard_errors == [relative_standard_error(trace)]
    assert result.to_dict()["per_document"][0]["relative_standard_error"] == result.relative_standard_errors[0]
    print(f"✅ {within}/100 seeds within 3 particle standard errors of {exact:.6f}")


def test_underflowing_weights_stay_finite():
    print("Testing words far below double precision...")
    tokens = [0] * 40

    log_theta = np.array([[-800.0, 0.0], [-800.0, 0.0]])
    flat = FlatPredictor(np.exp(log_theta), alpha=0.5, log_theta=log_theta)
    assert not flat.theta[:, 0].any()
    result = left_to_right(flat, [Document(tokens=tokens, doc_id=0)], particles=20, seed=1)
    expected = -800.0 * len(tokens)
    assert abs(result.per_document[0] - expected) < 1e-9 * abs(expected), result.per_document
    assert result.relative_standard_errors[0] < 1e-9

    log_theta = np.full((2, 2, 2), 0.0)
    log_theta[:, :, 0] = -900.0
    path = PathPredictor(np.exp(log_theta), np.log([0.5, 0.5]), m=0.5, b=10.0, log_theta=log_theta)
    value = path.log_likelihood(tokens, 20, np.random.default_rng(2))
    expected = -900.0 * len(tokens)
    assert abs(value - expected) < 1e-9 * abs(expected), value
    print("✅ Log-space weights give the exact value where linear weights are all zero")


def test_trained_models_and_threading():
    print("Testing left_to_right on trained states...")
    rng = np.random.default_rng(3)
    docs = [[int(w) for w in rng.integers(12, size=12)] for _ in range(10)]
    held = [Document(tokens=[int(w) for w in rng.integers(12, size=8)], doc_id=100 + i) for i in range(4)]
    for model in ("lda", "glda", "hlda", "ghlda"):
        state = toy_state(model, docs, vocab_size=12, num_topics=3, branch_spec=[1, 2, 2],
                          embeddings=random_embeddings(12, 3, seed=2))
        train(state, 2)
        predictor = snapshot_predictor(state)
        serial = left_to_right(predictor, held, particles=10, seed=4)
        threaded = left_to_right(predictor, held, particles=10, seed=4, max_workers=3)
        assert serial.per_document == threaded.per_document
        assert serial.doc_ids == [100, 101, 102, 103]
        assert all(math.isfinite(v) and v < 0 for v in serial.per_document), model
        assert abs(serial.mean - float(np.mean(serial.per_document))) < 1e-12
        reversed_order = left_to_right(predictor, held[::-1], particles=10, seed=4)
        assert reversed_order.per_document[::-1] == serial.per_document

    try:
        left_to_right(predictor, held, particles=0)
        assert False
    except ConfigurationError:
        pass
    print("✅ Finite estimates, independent of threads and document order")


def test_path_predictor_covers_new_branches():
    print("Testing path predictor candidates...")
    rng = np.random.default_rng(5)
    docs = [[int(w) for w in rng.integers(10, size=10)] for _ in range(6)]
    state = toy_state("hlda", docs, vocab_size=10, branch_spec=[1, 2, 2])
    with_new = PathPredictor.from_state(state, allow_new=True)
    existing = PathPredictor.from_state(state, allow_new=False)
    assert with_new.theta.shape[0] == existing.theta.shape[0] + state.tree.node_count - state.tree.path_count
    assert abs(np.exp(with_new.log_path_prior).sum() - 1.0) < 1e-10
    assert np.allclose(with_new.theta.sum(axis=2), 1.0)
    print("✅ Prior over existing and new-branch paths sums to 1")


if __name__ == "__main__":
    print("\n" + "=" * 50)
    print("Testing left-to-right held-out likelihood")
    print("=" * 50 + "\n")

    test_single_topic_is_exact()
    test_depth_one_tree_is_exact()
    test_estimator_matches_enumeration()
    test_particle_standard_error_covers_exact_value()
    test_underflowing_weights_stay_finite()
    test_trained_models_and_threading()
    test_path_predictor_covers_new_branches()

    print("\n" + "=" * 50)
    print("✅ All held-out tests passed!")
    print("=" * 50)

#!/usr/bin/env python3
"""
Tests for Dirichlet-multinomial word-count statistics and the emission
interface built on top of them.
"""

import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from core.dirichlet import WordCountStats
from core.emission import GaussianEmission, MultinomialEmission
from core.gaussian import NIWPrior
from utils.errors import ConfigurationError, NumericalError


def test_set_marginal_equals_predictive_product():
    print("Testing Dirichlet set marginal chain rule...")
    rng = np.random.default_rng(0)
    for eta in (0.25, 1.0, 2.0):
        stats = WordCountStats(vocab_size=6, eta=eta)
        for w in rng.integers(6, size=10):
            stats.add_word(int(w))
        words = [int(w) for w in rng.integers(6, size=7)]

        sequential = 0.0
        running = stats.copy()
        for w in words:
            sequential += running.log_predictive(w)
            running.add_word(w)
        assert abs(stats.log_marginal_set(words) - sequential) < 1e-10
    print("✅ Set marginal equals sequential product")


def test_predictive_formula():
    print("Testing smoothed predictive...")
    stats = WordCountStats(vocab_size=4, eta=0.5)
    for w in (0, 0, 1):
        stats.add_word(w)
    assert abs(math.exp(stats.log_predictive(0)) - 2.5 / 5.0) < 1e-12
    assert abs(stats.predictive_distribution().sum() - 1.0) < 1e-12
    assert stats.log_marginal_set([]) == 0.0
    print("✅ Predictive (eta + n_v) / (V eta + n)")


def test_evidence():
    print("Testing evidence from empty...")
    stats = WordCountStats(vocab_size=5, eta=0.3)
    words = [0, 1, 1, 4, 4, 4]
    expected = stats.log_marginal_set(words)
    for w in words:
        stats.add_word(w)
    assert abs(stats.log_evidence() - expected) < 1e-12
    print("✅ Evidence consistent")


def test_errors_and_round_trip():
    print("Testing validation and serialisation...")
    try:
        WordCountStats(vocab_size=3, eta=0.0)
        assert False
    except ConfigurationError:
        pass
    stats = WordCountStats(vocab_size=3, eta=1.0)
    try:
        stats.remove_word(2)
        assert False
    except NumericalError:
        pass
    stats.add_word(2)
    stats.add_word(2)
    restored = WordCountStats.from_dict(3, stats.to_dict())
    assert restored.n == 2 and restored.counts.tolist() == [0, 0, 2]
    print("✅ Errors raised, sparse round trip")


def test_emission_counters():
    print("Testing density-evaluation counters...")
    multinomial = MultinomialEmission(vocab_size=4, eta_levels=[1.0, 0.5])
    payload = multinomial.new_payload(1)
    assert payload.eta == 0.5
    multinomial.log_predictive(payload, 1)
    multinomial.log_marginal_set(payload, [0, 1])
    multinomial.log_marginal_set(payload, [])
    assert multinomial.density_evaluations == 2

    embeddings = np.random.default_rng(0).standard_normal((4, 2))
    prior = NIWPrior(np.zeros(2), np.eye(2), kappa=0.1, nu=3.0)
    gaussian = GaussianEmission(embeddings, prior, level_psi_ratios=[1.0, 0.5])
    assert np.allclose(gaussian.new_payload(1).prior.psi, 0.5 * np.eye(2))
    stats = gaussian.new_payload(0)
    gaussian.add(stats, 2)
    gaussian.log_predictive(stats, 0)
    gaussian.word_log_scores(stats)
    assert gaussian.density_evaluations == 1
    assert abs(gaussian.topic_word_distribution(stats).sum() - 1.0) < 1e-12
    print("✅ Counters count scored densities only")


def test_batched_predictive_and_set_updates():
    print("Testing predictive over several payloads and set add/remove...")
    multinomial = MultinomialEmission(vocab_size=5, eta_levels=[0.5])
    payloads = [multinomial.batch_payload(0, ids) for ids in ([0, 1, 1], [2], [])]
    scores = multinomial.log_predictive_payloads(payloads, 1)
    assert multinomial.density_evaluations == 3
    assert scores.tolist() == [p.log_predictive(1) for p in payloads]
    multinomial.add_many(payloads[2], [3, 3, 4])
    multinomial.remove_many(payloads[0], [1, 0])
    assert payloads[2].counts.tolist() == [0, 0, 0, 2, 1] and payloads[0].n == 1

    rng = np.random.default_rng(1)
    embeddings = rng.standard_normal((6, 3))
    gaussian = GaussianEmission(embeddings, NIWPrior(np.zeros(3), np.eye(3), kappa=0.1, nu=4.0))
    payloads = [gaussian.batch_payload(0, ids) for ids in ([0, 1], [2, 3, 4], [])]
    scores = gaussian.log_predictive_payloads(payloads, 5)
    assert gaussian.density_evaluations == 3
    assert np.allclose(scores, [p.log_predictive(embeddings[5]) for p in payloads], atol=1e-12)

    gaussian.add_many(payloads[2], [0, 1, 5])
    gaussian.remove_many(payloads[2], [5])
    assert np.allclose(payloads[2].psi_matrix(), payloads[0].psi_matrix(), atol=1e-10)
    print("✅ One evaluation per payload; set updates match batch construction")


if __name__ == "__main__":
    print("\n" + "=" * 50)
    print("Testing Dirichlet statistics and emissions")
    print("=" * 50 + "\n")

    test_set_marginal_equals_predictive_product()
    test_predictive_formula()
    test_evidence()
    test_errors_and_round_trip()
    test_emission_counters()
    test_batched_predictive_and_set_updates()

    print("\n" + "=" * 50)
    print("✅ All Dirichlet tests passed!")
    print("=" * 50)

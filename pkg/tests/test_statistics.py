"""Closed-form photon statistics against the truncated-Fock oracle.

Frozen values marked "exact rational" were derived with fractions.Fraction:
at phi = pi/2 the interference term vanishes and every moment is rational
in x = eta**2, and for phi in {0, pi} the parity overlap is rho**M with
rho = (1 - x)/(1 + x), still rational.
"""
import math

import numpy as np
import pytest

from nbstates.errors import ConvergenceError, DomainError
from nbstates.fock_core import (FockVector, TruncationPolicy, apply_annihilate,
                                inner, oracle_stats)
from nbstates.nbs_states import NBSParams, photon_distribution, superposition
from nbstates.statistics import (ETA_SERIES_SWITCH, a_pow_expectation,
                                 closed_stats, generating_function,
                                 mean_closed, pn_closed, q_closed, q_limit,
                                 q_recursion_residual, quadrature_variances,
                                 second_moment_closed)

ORACLE_POLICY = TruncationPolicy(tail_tolerance=1e-14)


def test_frozen_rationals_at_half_pi():
    # phi = pi/2, M = 2, x = 0.09: mean = 18/91, second = 2124/8281, Q = 9/91
    p = NBSParams(M=2, eta=0.3)
    assert mean_closed(math.pi / 2.0, p) == pytest.approx(18.0 / 91.0, rel=1e-15)
    assert second_moment_closed(math.pi / 2.0, p) == pytest.approx(2124.0 / 8281.0, rel=1e-15)
    assert q_closed(math.pi / 2.0, p) == pytest.approx(9.0 / 91.0, rel=1e-14)


def test_frozen_small_eta_odd_mean():
    # exact rational 5x(1 + rho^6)/((1-x)(1 - rho^5)) at x = 1e-4 rounds to this
    p = NBSParams(M=5, eta=0.01)
    assert mean_closed(math.pi, p) == pytest.approx(1.0000001400000003, rel=1e-15)
    assert mean_closed(0.0, p) == pytest.approx(2.999999830000017e-07, rel=1e-14)


def test_closed_stats_match_oracle():
    rng = np.random.default_rng(411)
    for _ in range(40):
        p = NBSParams(M=int(rng.integers(1, 40)),
                      eta=float(rng.uniform(0.05, 0.9)),
                      theta=float(rng.uniform(0.0, 2.0 * math.pi)))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        ref = oracle_stats(superposition(phi, p, ORACLE_POLICY))
        got = closed_stats(phi, p)
        assert got.mean == pytest.approx(ref.mean, rel=1e-11, abs=1e-13)
        assert got.second_moment == pytest.approx(ref.second_moment, rel=1e-11, abs=1e-13)
        assert got.mandel_q == pytest.approx(ref.mandel_q, rel=1e-10, abs=1e-12)


def test_pn_matches_amplitudes():
    p = NBSParams(M=7, eta=0.55, theta=1.3)
    for phi in (0.0, math.pi / 2.0, 2.2, math.pi):
        v = superposition(phi, p, ORACLE_POLICY)
        probs = photon_distribution(v)
        closed = np.array([pn_closed(n, phi, p) for n in range(len(v))])
        np.testing.assert_allclose(closed, probs, rtol=1e-12, atol=1e-15)


def test_pn_parity_zeros_exact():
    p = NBSParams(M=3, eta=0.4)
    assert pn_closed(1, 0.0, p) == 0.0
    assert pn_closed(7, 0.0, p) == 0.0
    assert pn_closed(0, math.pi, p) == 0.0
    assert pn_closed(4, math.pi, p) == 0.0
    assert pn_closed(2, 0.0, p) > 0.0


def test_pn_rejects_bad_index():
    p = NBSParams(M=2, eta=0.3)
    with pytest.raises(DomainError):
        pn_closed(-1, 0.0, p)
    with pytest.raises(DomainError):
        pn_closed(1.5, 0.0, p)


def test_generating_function_normalization_and_series():
    p = NBSParams(M=4, eta=0.6)
    for phi in (0.0, math.pi / 2.0, math.pi, 4.0):
        assert generating_function(1.0, phi, p) == pytest.approx(1.0, rel=1e-14)
        # partial series against the closed form at a couple of lambdas
        for lam in (-1.0, 0.37, 2.5):
            series = sum(lam ** n * pn_closed(n, phi, p) for n in range(400))
            assert generating_function(lam, phi, p) == pytest.approx(series, rel=1e-12, abs=1e-15)


def test_generating_function_pole_rejected():
    p = NBSParams(M=2, eta=0.5)  # x = 0.25, radius 4
    with pytest.raises(DomainError):
        generating_function(4.0, 0.0, p)
    with pytest.raises(DomainError):
        generating_function(-5.0, 0.0, p)
    assert math.isfinite(generating_function(3.9, 0.0, p))


def test_q_limits_by_parity():
    assert q_limit(0.0) == 1.0
    assert q_limit(math.pi) == -1.0
    assert q_limit(math.pi / 2.0) == 0.0
    assert q_limit(3.0 * math.pi / 4.0) == 0.0


def test_q_series_switch_is_seamless():
    # the closed ratio and the small-x series must agree across the handover
    below = ETA_SERIES_SWITCH * 0.99
    above = ETA_SERIES_SWITCH * 1.01
    for M in (1, 5, 30):
        for phi, limit in ((0.0, 1.0), (math.pi, -1.0)):
            q_lo = q_closed(phi, NBSParams(M=M, eta=below))
            q_hi = q_closed(phi, NBSParams(M=M, eta=above))
            assert q_lo == pytest.approx(limit, abs=1e-6)
            assert q_lo == pytest.approx(q_hi, abs=1e-10)


def test_q_approaches_limit_from_series_branch():
    p = NBSParams(M=8, eta=1e-6)
    assert q_closed(0.0, p) == pytest.approx(1.0, abs=1e-10)
    assert q_closed(math.pi, p) == pytest.approx(-1.0, abs=1e-10)


def test_recursion_residual_small_on_grid():
    for M in (1, 4, 25):
        for eta in (0.1, 0.45, 0.85):
            for phi in (0.0, 1.0, math.pi / 2.0, math.pi, 5.0):
                r = q_recursion_residual(phi, NBSParams(M=M, eta=eta))
                assert r < 1e-11


def _a_pow_oracle(v: FockVector, k: int) -> complex:
    lowered = v
    for _ in range(k):
        lowered = apply_annihilate(lowered)
    return inner(v, lowered)


def test_a_pow_matches_ladder_oracle():
    rng = np.random.default_rng(7113)
    for _ in range(25):
        p = NBSParams(M=int(rng.integers(1, 20)),
                      eta=float(rng.uniform(0.05, 0.85)),
                      theta=float(rng.uniform(0.0, 2.0 * math.pi)))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        k = int(rng.integers(1, 4))
        v = superposition(phi, p, ORACLE_POLICY)
        want = _a_pow_oracle(v, k)
        got = a_pow_expectation(k, phi, p)
        assert got == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_a_pow_frozen_value():
    got = a_pow_expectation(2, math.pi / 4.0, NBSParams(M=3, eta=0.5, theta=0.7))
    assert got == pytest.approx(0.18088623018518232 + 1.048757328345757j, rel=1e-13)


def test_odd_moment_vanishes_on_parity_eigenstates():
    # phi = 0 and pi give definite parity, so <a> is identically zero
    p = NBSParams(M=6, eta=0.7, theta=0.9)
    assert a_pow_expectation(1, 0.0, p) == 0.0
    assert a_pow_expectation(1, math.pi, p) == 0.0
    assert abs(a_pow_expectation(1, math.pi / 2.0, p)) > 0.0


def test_a_pow_rejects_bad_power():
    p = NBSParams(M=2, eta=0.3)
    for k in (0, -1, 1.5):
        with pytest.raises(DomainError):
            a_pow_expectation(k, 0.0, p)


def test_a_pow_term_budget_enforced():
    tight = TruncationPolicy(hard_cap=50)
    with pytest.raises(ConvergenceError):
        a_pow_expectation(1, 0.0, NBSParams(M=10, eta=0.999), tight)


def test_quadrature_frozen_and_squeezed():
    v1, v2 = quadrature_variances(0.0, NBSParams(M=50, eta=0.1))
    assert v1 == pytest.approx(0.621712493522705, rel=1e-13)
    assert v2 == pytest.approx(0.11437624805533503, rel=1e-13)
    assert v2 < 0.25 < v1


def test_quadratures_match_oracle():
    rng = np.random.default_rng(952)
    for _ in range(15):
        p = NBSParams(M=int(rng.integers(1, 30)),
                      eta=float(rng.uniform(0.05, 0.8)),
                      theta=float(rng.uniform(0.0, 2.0 * math.pi)))
        phi = float(rng.uniform(0.0, 2.0 * math.pi))
        v = superposition(phi, p, ORACLE_POLICY)
        mean = oracle_stats(v).mean
        ea = _a_pow_oracle(v, 1)
        ea2 = _a_pow_oracle(v, 2)
        want1 = 0.25 + 0.5 * (mean + ea2.real - 2.0 * ea.real ** 2)
        want2 = 0.25 + 0.5 * (mean - ea2.real - 2.0 * ea.imag ** 2)
        got1, got2 = quadrature_variances(phi, p)
        assert got1 == pytest.approx(want1, rel=1e-10, abs=1e-12)
        assert got2 == pytest.approx(want2, rel=1e-10, abs=1e-12)

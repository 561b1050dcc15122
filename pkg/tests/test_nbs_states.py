"""State constructors: normalization, parity structure, overlaps, sizing."""
import math

import numpy as np
import pytest

from nbstates.errors import DomainError, TruncationError
from nbstates.fock_core import TruncationPolicy, inner, oracle_stats, tail_mass
from nbstates.nbs_states import (
    NBSParams,
    cat_state,
    coherent,
    even_nbs,
    nbs,
    nbs_inner_closed,
    nbs_parity_overlap,
    normalization_constant,
    odd_nbs,
    phase_factor,
    photon_distribution,
    required_dimension,
    required_dimension_cat,
    superposition,
)


def test_params_validation():
    NBSParams(M=1, eta=0.5, theta=0.0)
    with pytest.raises(DomainError):
        NBSParams(M=0, eta=0.5)
    with pytest.raises(DomainError):
        NBSParams(M=3, eta=1.0)
    with pytest.raises(DomainError):
        NBSParams(M=3, eta=0.0)
    with pytest.raises(DomainError):
        NBSParams(M=3, eta=0.5, theta=2.0 * math.pi)
    with pytest.raises(DomainError):
        NBSParams(M=3, eta=0.5, theta=-0.1)


def test_phase_factor_axis_exactness():
    assert phase_factor(0.0) == 1.0 + 0.0j
    assert phase_factor(math.pi) == -1.0 + 0.0j
    assert phase_factor(math.pi / 2.0) == 1.0j
    z = phase_factor(0.7)
    assert z.real == pytest.approx(math.cos(0.7))
    assert z.imag == pytest.approx(math.sin(0.7))


def test_m1_amplitudes_are_geometric():
    # M=1 reduces to sqrt(1-x) * eta^n with no binomial factor
    eta = 0.4
    v = nbs(NBSParams(M=1, eta=eta), n_max=10)
    expected = math.sqrt(1.0 - eta * eta) * eta ** np.arange(11)
    np.testing.assert_allclose(v.amplitudes.real, expected, rtol=1e-14)
    assert np.all(v.amplitudes.imag == 0.0)


def test_nbs_norm_and_theta_independence_of_distribution():
    params0 = NBSParams(M=12, eta=0.55, theta=0.0)
    params1 = NBSParams(M=12, eta=0.55, theta=2.2)
    v0, v1 = nbs(params0), nbs(params1)
    assert abs(v0.norm() - 1.0) < 1e-12
    np.testing.assert_allclose(photon_distribution(v0), photon_distribution(v1),
                               rtol=0, atol=1e-13)


def test_superposition_parity_zeros_are_exact():
    params = NBSParams(M=4, eta=0.6, theta=0.9)
    even = superposition(0.0, params)
    odd = superposition(math.pi, params)
    assert np.all(even.amplitudes[1::2] == 0.0)
    assert np.all(odd.amplitudes[0::2] == 0.0)
    assert abs(even.norm() - 1.0) < 1e-12
    assert abs(odd.norm() - 1.0) < 1e-12


def test_even_odd_wrappers_match_superposition():
    params = NBSParams(M=7, eta=0.5, theta=0.3)
    np.testing.assert_allclose(even_nbs(params).amplitudes,
                               superposition(0.0, params).amplitudes, rtol=0, atol=0)
    np.testing.assert_allclose(odd_nbs(params).amplitudes,
                               superposition(math.pi, params).amplitudes, rtol=0, atol=0)


def test_normalization_constant_values():
    # overlap (1-x)/(1+x) = 1/3 at x = 1/2, so N(0) = 1/sqrt(2(1+1/3)) = sqrt(3/8)
    params = NBSParams(M=1, eta=math.sqrt(0.5))
    assert normalization_constant(0.0, params) == pytest.approx(math.sqrt(3.0 / 8.0), rel=1e-15)
    # at phi = pi/2 the cross term drops and N is exactly 2^{-1/2}
    assert normalization_constant(math.pi / 2.0, params) == 0.5 ** 0.5
    with pytest.raises(DomainError):
        normalization_constant(-0.1, params)
    with pytest.raises(DomainError):
        normalization_constant(7.0, params)


def test_parity_overlap_closed_form():
    params = NBSParams(M=3, eta=0.5)
    assert nbs_parity_overlap(params) == pytest.approx(0.6 ** 3, rel=1e-14)
    assert nbs_inner_closed(0.5, -0.5, 3) == pytest.approx(0.216, rel=1e-12)


def test_pi_half_distribution_matches_bare_nbs():
    params = NBSParams(M=5, eta=0.6, theta=1.0)
    dim = required_dimension(params, math.pi / 2.0)
    sup = superposition(math.pi / 2.0, params, n_max=dim)
    bare = nbs(params, n_max=dim)
    np.testing.assert_allclose(photon_distribution(sup), photon_distribution(bare),
                               rtol=0, atol=1e-13)


def test_overlap_closed_vs_summed_random():
    rng = np.random.default_rng(20260814)
    for _ in range(50):
        M = int(rng.integers(1, 35))
        ea, eb = rng.uniform(0.05, 0.9, size=2)
        ta, tb = rng.uniform(0.0, 6.28, size=2)
        pa = NBSParams(M=M, eta=float(ea), theta=float(ta))
        pb = NBSParams(M=M, eta=float(eb), theta=float(tb))
        dim = max(required_dimension(pa), required_dimension(pb)) + 20
        got = inner(nbs(pa, n_max=dim), nbs(pb, n_max=dim))
        want = nbs_inner_closed(pa.eta_c, pb.eta_c, M)
        assert abs(got - want) < 1e-11


def test_inner_closed_domain():
    assert nbs_inner_closed(0.3, 0.3, 4) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(DomainError):
        nbs_inner_closed(1.0, 0.3, 4)
    with pytest.raises(DomainError):
        nbs_inner_closed(0.3, 0.3, 0)


def test_required_dimension_controls_tail():
    for M, eta, phi in ((1, 0.3, None), (5, 0.6, 0.0), (30, 0.9, math.pi),
                        (200, 0.5, math.pi / 4.0)):
        params = NBSParams(M=M, eta=eta)
        pol = TruncationPolicy()
        n_max = required_dimension(params, phi, pol)
        v = nbs(params, n_max=n_max) if phi is None else superposition(phi, params, n_max=n_max)
        # the discarded tail plus the retained two padding rows stay below tolerance
        assert tail_mass(v, n_max - 1) < pol.tail_tolerance
        assert abs(v.norm() - 1.0) < 1e-11


def test_required_dimension_hard_cap():
    with pytest.raises(TruncationError):
        required_dimension(NBSParams(M=30, eta=0.9), None, TruncationPolicy(hard_cap=40))


def test_large_m_stays_compact_and_normalized():
    # log-space construction keeps M = 10^4 usable; gammaln rounding costs
    # ~1e-11 in the norm, which is documented slack, not a truncation loss
    params = NBSParams(M=10000, eta=0.01)
    dim = required_dimension(params, math.pi)
    assert dim < 60
    v = superposition(math.pi, params, n_max=dim)
    assert abs(v.norm() - 1.0) < 1e-10


def test_coherent_state_statistics():
    v = coherent(1.2)
    st = oracle_stats(v)
    assert st.mean == pytest.approx(1.44, abs=1e-10)
    assert st.mandel_q == pytest.approx(0.0, abs=1e-10)
    vac = coherent(0.0)
    assert vac.amplitudes[0] == 1.0


def test_cat_state_parity_and_norm():
    even = cat_state(1.1, 0.0)
    odd = cat_state(1.1, math.pi)
    assert np.all(even.amplitudes[1::2] == 0.0)
    assert np.all(odd.amplitudes[0::2] == 0.0)
    assert abs(even.norm() - 1.0) < 1e-12
    assert abs(odd.norm() - 1.0) < 1e-12
    with pytest.raises(DomainError):
        cat_state(0.0, math.pi)


def test_cat_required_dimension_grows_with_alpha():
    small = required_dimension_cat(0.5, 0.0)
    large = required_dimension_cat(3.0, 0.0)
    assert small < large


def test_odd_superposition_tiny_eta_mean_is_one():
    # the odd state keeps a single photon as eta -> 0
    params = NBSParams(M=5, eta=0.01)
    st = oracle_stats(superposition(math.pi, params))
    assert st.mean == pytest.approx(1.0, abs=1e-4)


def test_phi_outside_range_rejected():
    # phi outside [0, 2 pi] is a domain error, not a silent wrap
    params = NBSParams(M=2, eta=0.4)
    with pytest.raises(DomainError):
        superposition(2.0 * math.pi + 0.2, params)

"""Constructors for negative binomial states and their parity superpositions.

A negative binomial state (NBS) with complex label eta_c = eta*exp(i*theta),
0 < eta < 1, and index M >= 1 has amplitudes

    c_n = (1 - eta^2)^(M/2) * C(M+n-1, n)^(1/2) * eta_c^n

which interpolate between a coherent state (eta -> 0 with eta*sqrt(M) fixed)
and thermal-like statistics.  The two-component superposition

    |phi; eta_c, M>  proportional to  |eta_c, M> + exp(i*phi) |-eta_c, M>

keeps only even photon numbers at phi = 0 and only odd ones at phi = pi.

All amplitudes are assembled in log space (gammaln) so the constructors stay
accurate up to M ~ 1e4, and truncation dimensions are chosen from a geometric
tail bound rather than a floating cumulative sum, which stalls at large M.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, TruncationError, ZeroNormError
from .fock_core import FockVector, TruncationPolicy

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class NBSParams:
    """Magnitude eta in (0,1), phase theta in [0, 2*pi), integer index M >= 1."""

    M: int
    eta: float
    theta: float = 0.0

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise DomainError(f"M must be an integer >= 1, got {self.M}")
        if not (0.0 < self.eta < 1.0):
            raise DomainError(f"eta must lie strictly inside (0, 1), got {self.eta}")
        if not (0.0 <= self.theta < TWO_PI):
            raise DomainError(f"theta must lie in [0, 2*pi), got {self.theta}")

    @property
    def eta_c(self) -> complex:
        return self.eta * phase_factor(self.theta)


def phase_factor(angle: float) -> complex:
    """exp(i*angle) with the axis cases snapped exactly onto the axes.

    cos(angle) == +-1 forces sin to 0 (and vice versa) so that parity
    cancellations at phi in {0, pi} and the pi/2 normalization come out exact
    instead of carrying ~1e-16 dust from sin(pi).
    """
    c = math.cos(angle)
    s = math.sin(angle)
    if abs(c) == 1.0:
        s = 0.0
    elif abs(s) == 1.0:
        c = 0.0
    return complex(c, s)


def _check_phi(phi: float) -> None:
    if not (0.0 <= phi <= TWO_PI):
        raise DomainError(f"phi must lie in [0, 2*pi], got {phi}")


def _one_plus_c_exp(c: float, minus_exponent: float) -> float:
    # 1 + c*exp(-minus_exponent), written to survive c near -1 with a small exponent:
    # 1 + c e^{-s} = (1 + c) + c (e^{-s} - 1), both addends free of cancellation.
    if c < 0.0:
        return (1.0 + c) + c * math.expm1(-minus_exponent)
    return 1.0 + c * math.exp(-minus_exponent)


def nbs_parity_overlap(params: NBSParams) -> float:
    """Overlap <-eta_c, M | eta_c, M> = ((1-eta^2)/(1+eta^2))^M, always real in (0, 1)."""
    x = params.eta * params.eta
    return math.exp(-2.0 * params.M * math.atanh(x))


def _log_parity_overlap_exponent(params: NBSParams) -> float:
    # s such that the overlap above equals exp(-s); kept positive for expm1 use.
    return 2.0 * params.M * math.atanh(params.eta * params.eta)


def normalization_constant(phi: float, params: NBSParams) -> float:
    """N with |phi;eta_c,M> = N (|eta_c,M> + e^{i phi} |-eta_c,M>); N = (2(1+cos(phi) r))^{-1/2}."""
    _check_phi(phi)
    c = phase_factor(phi).real
    denom = 2.0 * _one_plus_c_exp(c, _log_parity_overlap_exponent(params))
    if denom <= 0.0:
        raise ZeroNormError(f"superposition norm vanished at phi={phi}, eta={params.eta}, M={params.M}")
    # sqrt of the reciprocal is correctly rounded where 1/sqrt is an ulp off
    # (phi = pi/2 must give exactly 2**-0.5)
    return math.sqrt(1.0 / denom)


# ---------------------------------------------------------------------------
# truncation sizing
# ---------------------------------------------------------------------------

def _nb_log_weight(M: int, n: int, x: float) -> float:
    # log of the negative binomial pmf C(M+n-1, n) x^n (1-x)^M
    return (
        math.lgamma(M + n)
        - math.lgamma(n + 1)
        - math.lgamma(M)
        + n * math.log(x)
        + M * math.log1p(-x)
    )


def _grown_n_max(weight_log, ratio, boost: float, policy: TruncationPolicy) -> int:
    """Smallest index with a provable tail bound below tolerance, plus 2 padding.

    ``ratio(n)`` must give w(n+1)/w(n) and be non-increasing, so once it drops
    below 1 the tail is dominated by a geometric series:
    sum_{k>n} w(k) <= w(n) * rho / (1 - rho).
    """
    tol = policy.tail_tolerance / boost
    for n in range(policy.hard_cap + 1):
        rho = ratio(n)
        if rho < 1.0:
            bound = math.exp(weight_log(n)) * rho / (1.0 - rho)
            if bound < tol:
                return min(n + 2, policy.hard_cap)
    raise TruncationError(
        f"needed more than hard_cap={policy.hard_cap} components to reach tail {policy.tail_tolerance}"
    )


def required_dimension(params: NBSParams, phi: Optional[float] = None,
                       policy: Optional[TruncationPolicy] = None) -> int:
    """n_max for an NBS (phi=None) or a parity superposition with the given phi."""
    policy = policy or TruncationPolicy()
    x = params.eta * params.eta
    M = params.M
    boost = 1.0
    if phi is not None:
        _check_phi(phi)
        c = phase_factor(phi).real
        # |parity factor|^2 <= 4 and the norm divides by 2(1+c r)
        boost = 2.0 / _one_plus_c_exp(c, _log_parity_overlap_exponent(params))
    return _grown_n_max(
        lambda n: _nb_log_weight(M, n, x),
        lambda n: (M + n) * x / (n + 1),
        boost,
        policy,
    )


def required_dimension_cat(alpha: complex, phi: Optional[float] = None,
                           policy: Optional[TruncationPolicy] = None) -> int:
    """n_max for a coherent state (phi=None) or a two-component cat."""
    policy = policy or TruncationPolicy()
    aa = abs(alpha) ** 2
    if aa == 0.0:
        return 2
    boost = 1.0
    if phi is not None:
        _check_phi(phi)
        c = phase_factor(phi).real
        boost = 2.0 / _one_plus_c_exp(c, 2.0 * aa)
    log_poisson = lambda n: n * math.log(aa) - aa - math.lgamma(n + 1)
    return _grown_n_max(log_poisson, lambda n: aa / (n + 1), boost, policy)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _nbs_base(params: NBSParams, n_max: int) -> np.ndarray:
    """Amplitudes (1-x)^{M/2} C(M+n-1,n)^{1/2} eta_c^n for n = 0..n_max."""
    M, eta = params.M, params.eta
    x = eta * eta
    n = np.arange(n_max + 1)
    logmag = 0.5 * (gammaln(M + n) - gammaln(n + 1) - math.lgamma(M)) \
        + n * math.log(eta) + 0.5 * M * math.log1p(-x)
    amps = np.exp(logmag).astype(np.complex128)
    if params.theta != 0.0:
        amps *= phase_factor(params.theta) ** n
    return amps


def nbs(params: NBSParams, policy: Optional[TruncationPolicy] = None,
        n_max: Optional[int] = None) -> FockVector:
    """Negative binomial state, sized by the truncation policy unless n_max is forced."""
    if n_max is None:
        n_max = required_dimension(params, None, policy)
    return FockVector(_nbs_base(params, n_max))


def superposition(phi: float, params: NBSParams,
                  policy: Optional[TruncationPolicy] = None,
                  n_max: Optional[int] = None) -> FockVector:
    """Normalized N(|eta_c,M> + e^{i phi}|-eta_c,M>).

    phi = 0 keeps only even n (amplitudes at odd n are exactly zero); phi = pi
    keeps only odd n; phi = pi/2 reproduces the bare NBS photon distribution.
    """
    _check_phi(phi)
    if n_max is None:
        n_max = required_dimension(params, phi, policy)
    base = _nbs_base(params, n_max)
    sign = np.where(np.arange(n_max + 1) % 2 == 0, 1.0, -1.0)
    factor = 1.0 + phase_factor(phi) * sign
    return FockVector(normalization_constant(phi, params) * base * factor)


def even_nbs(params: NBSParams, policy: Optional[TruncationPolicy] = None,
             n_max: Optional[int] = None) -> FockVector:
    """Even-photon-number NBS; identical to superposition(0, ...)."""
    return superposition(0.0, params, policy, n_max)


def odd_nbs(params: NBSParams, policy: Optional[TruncationPolicy] = None,
            n_max: Optional[int] = None) -> FockVector:
    """Odd-photon-number NBS; identical to superposition(pi, ...)."""
    return superposition(math.pi, params, policy, n_max)


def _coherent_base(alpha: complex, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    if alpha == 0:
        amps = np.zeros(n_max + 1, dtype=np.complex128)
        amps[0] = 1.0
        return amps
    aa = abs(alpha) ** 2
    logmag = n * math.log(abs(alpha)) - 0.5 * aa - 0.5 * gammaln(n + 1)
    unit = alpha / abs(alpha)
    return np.exp(logmag) * unit ** n


def coherent(alpha: complex, policy: Optional[TruncationPolicy] = None,
             n_max: Optional[int] = None) -> FockVector:
    if n_max is None:
        n_max = required_dimension_cat(alpha, None, policy)
    return FockVector(_coherent_base(alpha, n_max))


def cat_state(alpha: complex, phi: float,
              policy: Optional[TruncationPolicy] = None,
              n_max: Optional[int] = None) -> FockVector:
    """Normalized N0 (|alpha> + e^{i phi} |-alpha>)."""
    _check_phi(phi)
    if alpha == 0:
        raise DomainError("cat state requires alpha != 0")
    if n_max is None:
        n_max = required_dimension_cat(alpha, phi, policy)
    aa = abs(alpha) ** 2
    c = phase_factor(phi).real
    denom = 2.0 * _one_plus_c_exp(c, 2.0 * aa)
    if denom <= 0.0:
        raise ZeroNormError(f"cat state norm vanished at phi={phi}, |alpha|^2={aa}")
    base = _coherent_base(alpha, n_max)
    sign = np.where(np.arange(n_max + 1) % 2 == 0, 1.0, -1.0)
    factor = 1.0 + phase_factor(phi) * sign
    return FockVector(base * factor / math.sqrt(denom))


def even_coherent(alpha: complex, policy: Optional[TruncationPolicy] = None,
                  n_max: Optional[int] = None) -> FockVector:
    return cat_state(alpha, 0.0, policy, n_max)


def odd_coherent(alpha: complex, policy: Optional[TruncationPolicy] = None,
                 n_max: Optional[int] = None) -> FockVector:
    return cat_state(alpha, math.pi, policy, n_max)


def photon_distribution(v: FockVector) -> np.ndarray:
    """P(n) = |c_n|^2 as a float array; no renormalization is applied."""
    return np.abs(v.amplitudes) ** 2


def nbs_inner_closed(alpha: complex, beta: complex, M: int) -> complex:
    """<alpha_c, M | beta_c, M> = (1-|a|^2)^{M/2} (1-|b|^2)^{M/2} (1 - conj(a) b)^{-M}.

    Evaluated in log space; both labels must satisfy |.| < 1.
    """
    if int(M) != M or M < 1:
        raise DomainError(f"M must be an integer >= 1, got {M}")
    if abs(alpha) >= 1.0 or abs(beta) >= 1.0:
        raise DomainError("NBS labels must have modulus < 1")
    import cmath
    log_val = 0.5 * M * (math.log1p(-abs(alpha) ** 2) + math.log1p(-abs(beta) ** 2)) \
        - M * cmath.log(1.0 - alpha.conjugate() * beta)
    return cmath.exp(log_val)

"""Deformed-oscillator structure carried by fixed-parity superpositions.

A state supported on one parity class, |psi> = sum_m C(m) |p0 + 2m> with
p0 in {0, 1}, satisfies an exact componentwise identity

    even:  N |psi> = f(N) a^dag^2 |psi>,    f(N) = sqrt(N/(N-1)) C(N/2)/C(N/2-1)
    odd:   (N-1)|psi> = f(N) a^dag^2 |psi>, f(N) = sqrt((N-1)/N) C((N-1)/2)/C((N-3)/2)

so the pair operators A+ = f(N) a^dag^2 and A- = (A+)^dag close a deformed
algebra with structure function S(N) = f(N)^2 N (N-1).  The checks in this
module realize A+/-, the ladder-site number operator and S explicitly as
matrices on the parity subspace and measure how well the product and
commutator relations hold.

Conventions that matter:

* The ladder-site operator counts pairs (j = 0, 1, 2, ...), not photons; the
  relations [N, A+-] = +-A+- only hold in that labeling.
* For a complex state label the derived f and S are complex.  An operator
  product A+ A- is positive semidefinite, so its diagonal is compared
  against |S|, while the literal (possibly complex)S stays available on the
  StructureFunction for formula-level checks.
* a^2 corrupts the top two components of a truncated vector, so every
  residual that involves lowering excludes them; the raising identity above
  is truncation-clean and is checked on all components.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, PoleError
from .fock_core import FockVector, TruncationPolicy
from .nbs_states import NBSParams, phase_factor, required_dimension

_PARITIES = ("even", "odd")


@dataclass(frozen=True)
class ParitySequence:
    """Coefficients C(m) of a state supported on photon numbers p0 + 2m."""

    parity: str
    coeff: Callable[[int], complex]

    def __post_init__(self):
        if self.parity not in _PARITIES:
            raise DomainError(f"parity must be 'even' or 'odd', got {self.parity!r}")

    @property
    def offset(self) -> int:
        return 0 if self.parity == "even" else 1

    def photon_index(self, m: int) -> int:
        if m < 0:
            raise DomainError(f"pair index must be >= 0, got {m}")
        return self.offset + 2 * m

    def realize(self, n_max: int) -> FockVector:
        amps = np.zeros(n_max + 1, dtype=np.complex128)
        m = 0
        while self.photon_index(m) <= n_max:
            amps[self.photon_index(m)] = self.coeff(m)
            m += 1
        return FockVector(amps)


@dataclass(frozen=True)
class StructureFunction:
    """Deformation profile: f on parity-matching photon numbers, S(N) = f(N)^2 N (N-1)."""

    parity: str
    f: Callable[[int], complex]

    def __post_init__(self):
        if self.parity not in _PARITIES:
            raise DomainError(f"parity must be 'even' or 'odd', got {self.parity!r}")

    def s(self, n: int) -> complex:
        fv = self.f(n)
        return fv * fv * n * (n - 1)


def _check_parity_index(parity: str, n: int) -> None:
    if int(n) != n:
        raise DomainError(f"photon number must be an integer, got {n}")
    if parity == "even" and (n % 2 != 0 or n < 2):
        raise DomainError(f"even-parity structure function needs even n >= 2, got {n}")
    if parity == "odd" and (n % 2 != 1 or n < 3):
        raise DomainError(f"odd-parity structure function needs odd n >= 3, got {n}")


def derive_structure_function(seq: ParitySequence) -> StructureFunction:
    """Read f off the coefficient ratios of a parity sequence.

    Raises PoleError (naming the offending pair index) if the coefficient in
    the denominator vanishes.
    """

    def f(n: int) -> complex:
        _check_parity_index(seq.parity, n)
        if seq.parity == "even":
            m = n // 2
            scale = math.sqrt(n / (n - 1))
        else:
            m = (n - 1) // 2
            scale = math.sqrt((n - 1) / n)
        below = seq.coeff(m - 1)
        if below == 0:
            raise PoleError(f"coefficient at pair index {m - 1} vanishes; f({n}) undefined")
        return scale * seq.coeff(m) / below

    return StructureFunction(parity=seq.parity, f=f)


# ---------------------------------------------------------------------------
# concrete coefficient sequences
# ---------------------------------------------------------------------------

def even_nbs_sequence(params: NBSParams) -> ParitySequence:
    M, eta = params.M, params.eta
    x = eta * eta
    s_exp = 2.0 * M * math.atanh(x)
    log_pref = 0.5 * (math.log(2.0) - math.log1p(math.exp(-s_exp))) + 0.5 * M * math.log1p(-x)
    unit = phase_factor(params.theta)

    def coeff(m: int) -> complex:
        if m < 0:
            raise DomainError(f"pair index must be >= 0, got {m}")
        n = 2 * m
        logmag = log_pref + 0.5 * (math.lgamma(M + n) - math.lgamma(n + 1) - math.lgamma(M)) \
            + n * math.log(eta)
        return math.exp(logmag) * unit ** n

    return ParitySequence(parity="even", coeff=coeff)


def odd_nbs_sequence(params: NBSParams) -> ParitySequence:
    M, eta = params.M, params.eta
    x = eta * eta
    # 1 - r computed as -expm1(-s) so small eta keeps full precision
    one_minus_r = -math.expm1(-2.0 * M * math.atanh(x))
    log_pref = 0.5 * (math.log(2.0) - math.log(one_minus_r)) + 0.5 * M * math.log1p(-x)
    unit = phase_factor(params.theta)

    def coeff(m: int) -> complex:
        if m < 0:
            raise DomainError(f"pair index must be >= 0, got {m}")
        n = 2 * m + 1
        logmag = log_pref + 0.5 * (math.lgamma(M + n) - math.lgamma(n + 1) - math.lgamma(M)) \
            + n * math.log(eta)
        return math.exp(logmag) * unit ** n

    return ParitySequence(parity="odd", coeff=coeff)


def _log_cosh(a: float) -> float:
    return a + math.log1p(math.exp(-2.0 * a)) - math.log(2.0)


def _log_sinh(a: float) -> float:
    return a + math.log1p(-math.exp(-2.0 * a)) - math.log(2.0)


def even_coherent_sequence(alpha: complex) -> ParitySequence:
    aa = abs(alpha) ** 2
    if aa == 0.0:
        raise DomainError("even coherent sequence requires alpha != 0")
    unit = alpha / abs(alpha)

    def coeff(m: int) -> complex:
        if m < 0:
            raise DomainError(f"pair index must be >= 0, got {m}")
        n = 2 * m
        logmag = n * math.log(abs(alpha)) - 0.5 * _log_cosh(aa) - 0.5 * math.lgamma(n + 1)
        return math.exp(logmag) * unit ** n

    return ParitySequence(parity="even", coeff=coeff)


def odd_coherent_sequence(alpha: complex) -> ParitySequence:
    aa = abs(alpha) ** 2
    if aa == 0.0:
        raise DomainError("odd coherent sequence requires alpha != 0")
    unit = alpha / abs(alpha)

    def coeff(m: int) -> complex:
        if m < 0:
            raise DomainError(f"pair index must be >= 0, got {m}")
        n = 2 * m + 1
        logmag = n * math.log(abs(alpha)) - 0.5 * _log_sinh(aa) - 0.5 * math.lgamma(n + 1)
        return math.exp(logmag) * unit ** n

    return ParitySequence(parity="odd", coeff=coeff)


# ---------------------------------------------------------------------------
# residual checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GdoResiduals:
    """Max-abs deviations of the realized pair operators from the algebra relations."""

    commutator_raise: float
    commutator_lower: float
    product_raise: float
    product_lower: float

    @property
    def max_residual(self) -> float:
        return max(self.commutator_raise, self.commutator_lower,
                   self.product_raise, self.product_lower)


def gdo_relations_check(sf: StructureFunction, seq: ParitySequence, n_max: int) -> GdoResiduals:
    """Realize A+ = f(N) a^dag^2, A- = (A+)^dag on the parity subspace and test the algebra.

    With N counting ladder sites, the relations are [N, A+] = A+,
    [N, A-] = -A-, (A- A+) diag = |S| one site up, (A+ A-) diag = |S| at the
    site.  Residuals are max-abs over the matrix block that excludes the top
    two ladder sites, where truncation bends the products.
    """
    if sf.parity != seq.parity:
        raise DomainError(f"parity mismatch: {sf.parity!r} vs {seq.parity!r}")
    p0 = seq.offset
    sites = (n_max - p0) // 2 + 1
    if sites < 4:
        raise DomainError(f"n_max={n_max} leaves too few ladder sites ({sites}) to check")

    a_plus = np.zeros((sites, sites), dtype=np.complex128)
    for j in range(sites - 1):
        n_to = p0 + 2 * (j + 1)
        a_plus[j + 1, j] = sf.f(n_to) * math.sqrt((n_to - 1) * n_to)
    a_minus = a_plus.conj().T
    n_op = np.diag(np.arange(sites, dtype=np.float64))

    s_site = np.zeros(sites)
    for j in range(1, sites):
        s_site[j] = abs(sf.s(p0 + 2 * j))

    trim = slice(0, sites - 2)
    comm_raise = n_op @ a_plus - a_plus @ n_op - a_plus
    comm_lower = n_op @ a_minus - a_minus @ n_op + a_minus
    prod_raise = a_minus @ a_plus - np.diag(np.roll(s_site, -1))
    prod_lower = a_plus @ a_minus - np.diag(s_site)
    return GdoResiduals(
        commutator_raise=float(np.max(np.abs(comm_raise[trim, trim]))),
        commutator_lower=float(np.max(np.abs(comm_lower[trim, trim]))),
        product_raise=float(np.max(np.abs(prod_raise[trim, trim]))),
        product_lower=float(np.max(np.abs(prod_lower[trim, trim]))),
    )


def creation_identity_residual(sf: StructureFunction, seq: ParitySequence, n_max: int) -> float:
    """Max-abs residual of N|psi> = f(N) a^dag^2 |psi> (even) or (N-1)|psi> = ... (odd).

    a^dag^2 only pushes amplitude upward, so this identity is clean on every
    retained component; no rows are excluded.
    """
    if sf.parity != seq.parity:
        raise DomainError(f"parity mismatch: {sf.parity!r} vs {seq.parity!r}")
    v = seq.realize(n_max).amplitudes
    n = np.arange(n_max + 1, dtype=np.float64)
    lhs = (n if seq.parity == "even" else n - 1.0) * v
    rhs = np.zeros_like(v)
    for idx in range(2, n_max + 1):
        if v[idx - 2] != 0:
            rhs[idx] = sf.f(idx) * math.sqrt((idx - 1) * idx) * v[idx - 2]
    return float(np.max(np.abs(lhs - rhs)))


def _a2(amps: np.ndarray) -> np.ndarray:
    out = np.zeros_like(amps)
    n = np.arange(2, amps.size, dtype=np.float64)
    out[:-2] = np.sqrt(n * (n - 1.0)) * amps[2:]
    return out


def lowering_ratio_residual(seq: ParitySequence, n_max: int) -> float:
    """Componentwise residual of a^2|psi> = sqrt((N+1)(N+2)) (C_up/C) |psi>.

    The top two components of a^2 are truncation-corrupted and excluded.
    """
    v = seq.realize(n_max).amplitudes
    lowered = _a2(v)
    expected = np.zeros_like(v)
    m = 0
    while seq.photon_index(m) <= n_max - 2:
        n = seq.photon_index(m)
        below = seq.coeff(m)
        if below == 0:
            raise PoleError(f"coefficient at pair index {m} vanishes")
        expected[n] = math.sqrt((n + 1) * (n + 2)) * (seq.coeff(m + 1) / below) * v[n]
        m += 1
    keep = slice(0, n_max - 1)
    return float(np.max(np.abs(lowered[keep] - expected[keep])))


def _pair_eigen_residual(v: np.ndarray, scale: np.ndarray) -> float:
    lowered = _a2(v)
    keep = slice(0, v.size - 2)
    return float(np.max(np.abs(lowered[keep] - scale[keep] * v[keep])))


def eigen_residual_even(params: NBSParams, policy: Optional[TruncationPolicy] = None,
                        n_max: Optional[int] = None) -> float:
    """Residual of a^2 |even NBS> = sqrt((M+N)(M+N+1)) eta_c^2 |even NBS>, top two rows excluded."""
    if n_max is None:
        n_max = required_dimension(params, 0.0, policy)
    seq = even_nbs_sequence(params)
    v = seq.realize(n_max).amplitudes
    n = np.arange(n_max + 1, dtype=np.float64)
    scale = np.sqrt((params.M + n) * (params.M + n + 1.0)) * params.eta_c ** 2
    return _pair_eigen_residual(v, scale)


def eigen_residual_odd(params: NBSParams, policy: Optional[TruncationPolicy] = None,
                       n_max: Optional[int] = None) -> float:
    """Same two-photon eigenvalue residual for the odd NBS."""
    if n_max is None:
        n_max = required_dimension(params, math.pi, policy)
    seq = odd_nbs_sequence(params)
    v = seq.realize(n_max).amplitudes
    n = np.arange(n_max + 1, dtype=np.float64)
    scale = np.sqrt((params.M + n) * (params.M + n + 1.0)) * params.eta_c ** 2
    return _pair_eigen_residual(v, scale)


def nonlinear_coherent_residual(params: NBSParams, policy: Optional[TruncationPolicy] = None,
                                n_max: Optional[int] = None) -> float:
    """Residual of F(N) a^2 |psi> = eta_c^2 |psi> with F(N) = ((M+N)(M+N+1))^{-1/2}.

    Checked for both parity states; returns the worse of the two.  This is
    the sense in which the parity NBS pair behaves as nonlinear coherent
    states of the pair-lowering operator.
    """
    worst = 0.0
    for phi, seq_fn in ((0.0, even_nbs_sequence), (math.pi, odd_nbs_sequence)):
        dim = n_max if n_max is not None else required_dimension(params, phi, policy)
        v = seq_fn(params).realize(dim).amplitudes
        n = np.arange(dim + 1, dtype=np.float64)
        f_of_n = 1.0 / np.sqrt((params.M + n) * (params.M + n + 1.0))
        lowered = _a2(v) * f_of_n
        keep = slice(0, dim - 1)
        resid = float(np.max(np.abs(lowered[keep] - params.eta_c ** 2 * v[keep])))
        worst = max(worst, resid)
    return worst

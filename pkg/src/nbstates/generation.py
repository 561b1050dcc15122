"""Two ways to generate NBS parity superpositions dynamically.

Kerr route: a bare NBS evolved under H = g1 (a^dag a)^2 for a quarter period
t = pi/(2 g1) picks up phases (-i)^(n^2), which split by parity and turn the
state into the phi = pi/2 superposition up to the global phase exp(-i pi/4).

Dispersive route: an atom prepared in (|g> + e^{i phi} |e>)/sqrt(2) shifts
the field label only in the excited branch (c_n -> c_n e^{-i g2 t n}); after
a resonant pi-pulse (|g> -> (|g>-|e>)/sqrt2, |e> -> (|g>+|e>)/sqrt2) and a
projective measurement of the atom, the field collapses onto a superposition
of the original and rotated NBS.  At g2 t = pi the measured-g branch is
exactly the phi superposition and the measured-e branch its phi + pi
partner.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, DomainError, ZeroNormError
from .fock_core import FockVector, TruncationPolicy, inner
from .nbs_states import NBSParams, nbs, phase_factor, required_dimension

# how far ||g||^2 + ||e||^2 may drift from 1 before the joint state is rejected
NORM_SLACK = 1e-9


@dataclass(frozen=True)
class KerrParams:
    """Kerr strength g1 > 0 and evolution time t >= 0."""

    g1: float
    t: float

    def __post_init__(self):
        if not (self.g1 > 0.0):
            raise DomainError(f"g1 must be > 0, got {self.g1}")
        if self.t < 0.0:
            raise DomainError(f"t must be >= 0, got {self.t}")


@dataclass(frozen=True)
class DispersiveParams:
    """Atom phase phi, coupling g2 > 0, and interaction time t >= 0."""

    phi: float
    g2: float
    t: float

    def __post_init__(self):
        if not (0.0 <= self.phi <= 2.0 * math.pi):
            raise DomainError(f"phi must lie in [0, 2*pi], got {self.phi}")
        if not (self.g2 > 0.0):
            raise DomainError(f"g2 must be > 0, got {self.g2}")
        if self.t < 0.0:
            raise DomainError(f"t must be >= 0, got {self.t}")


@dataclass(frozen=True)
class AtomFieldState:
    """Joint atom-field state written as |g> (x) g_branch + |e> (x) e_branch."""

    g_branch: FockVector
    e_branch: FockVector

    def __post_init__(self):
        if len(self.g_branch) != len(self.e_branch):
            raise DimensionMismatchError(
                f"branch lengths differ: {len(self.g_branch)} vs {len(self.e_branch)}")
        total = self.g_branch.norm() ** 2 + self.e_branch.norm() ** 2
        if abs(total - 1.0) > NORM_SLACK:
            raise DomainError(f"joint state norm^2 = {total} is not 1 within {NORM_SLACK}")


@dataclass(frozen=True)
class DispersiveOutcome:
    """Post-pulse joint state plus both conditional field states and their probabilities."""

    joint: AtomFieldState
    projected_g: FockVector
    projected_e: FockVector
    prob_g: float
    prob_e: float


def fidelity(u: FockVector, v: FockVector) -> float:
    """|<u|v>| for normalized vectors; global phase is deliberately ignored."""
    return min(abs(inner(u, v)), 1.0)


def kerr_evolve(v: FockVector, kerr: KerrParams) -> FockVector:
    """Apply exp(-i g1 t N^2) componentwise."""
    n = np.arange(len(v), dtype=np.float64)
    return FockVector(v.amplitudes * np.exp(-1j * kerr.g1 * kerr.t * n * n))


def kerr_generate(params: NBSParams, g1: float = 1.0,
                  policy: Optional[TruncationPolicy] = None,
                  n_max: Optional[int] = None) -> FockVector:
    """Evolve a bare NBS for the quarter period t = pi/(2 g1).

    The result equals exp(-i pi/4) * superposition(pi/2, params) exactly.
    """
    if n_max is None:
        # size for the superposition the protocol lands on, not the bare NBS
        n_max = required_dimension(params, math.pi / 2.0, policy)
    start = nbs(params, n_max=n_max)
    return kerr_evolve(start, KerrParams(g1=g1, t=math.pi / (2.0 * g1)))


def dispersive_protocol(params: NBSParams, disp: DispersiveParams,
                        policy: Optional[TruncationPolicy] = None,
                        n_max: Optional[int] = None) -> DispersiveOutcome:
    """Run the dispersive interaction, pi-pulse, and atom measurement.

    Raises ZeroNormError if either measurement branch has numerically zero
    probability (e.g. phi = 0 at t = 0, where the e-branch interferes away).
    """
    if n_max is None:
        # the conditional states are parity superpositions; size for the
        # widest of the two so either projection is representable
        d_g = required_dimension(params, disp.phi, policy)
        phi_opp = disp.phi + math.pi if disp.phi <= math.pi else disp.phi - math.pi
        n_max = max(d_g, required_dimension(params, phi_opp, policy))
    base = nbs(params, n_max=n_max).amplitudes
    n = np.arange(n_max + 1)
    rotated = base * phase_factor(-disp.g2 * disp.t) ** n

    f_g = base / math.sqrt(2.0)
    f_e = phase_factor(disp.phi) * rotated / math.sqrt(2.0)
    # pi-pulse: |g> -> (|g> - |e>)/sqrt2, |e> -> (|g> + |e>)/sqrt2
    g_row = (f_g + f_e) / math.sqrt(2.0)
    e_row = (f_e - f_g) / math.sqrt(2.0)

    prob_g = float(np.sum(np.abs(g_row) ** 2))
    prob_e = float(np.sum(np.abs(e_row) ** 2))
    floor = 1e-14
    if prob_g < floor or prob_e < floor:
        raise ZeroNormError(
            f"measurement branch has vanishing probability (p_g={prob_g}, p_e={prob_e})")
    joint = AtomFieldState(g_branch=FockVector(g_row), e_branch=FockVector(e_row))
    return DispersiveOutcome(
        joint=joint,
        projected_g=FockVector(g_row / math.sqrt(prob_g)),
        projected_e=FockVector(e_row / math.sqrt(prob_e)),
        prob_g=prob_g,
        prob_e=prob_e,
    )

"""Parameter sweeps and their serialized forms.

The sweep outputs are plain CSV with header ``eta,phi,M,quantity,value`` and
every float printed with 17 significant digits, so a value survives a
round-trip through text exactly and two runs with the same config produce
byte-identical files.  Grid points are generated as start + i*step (never a
running sum), which keeps the grid deterministic and free of accumulated
drift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import DomainError
from .fock_core import TruncationPolicy
from .nbs_states import NBSParams, required_dimension
from .statistics import pn_closed, q_closed, quadrature_variances

FIG1_PHIS = (0.0, math.pi / 2.0, 3.0 * math.pi / 4.0, math.pi)
FIG2_PHIS = FIG1_PHIS
DEFAULT_ETA_START = 0.02
DEFAULT_ETA_STOP = 0.95
DEFAULT_GRID_STEP = 0.01


def format_value(x: Optional[float]) -> str:
    """17-significant-digit rendering; None becomes the literal 'undefined'."""
    if x is None:
        return "undefined"
    return f"{x:.17g}"


@dataclass(frozen=True)
class SweepRecord:
    eta: float
    phi: float
    M: int
    quantity: str
    value: Optional[float]

    def row(self) -> str:
        return ",".join((
            format_value(self.eta),
            format_value(self.phi),
            str(self.M),
            self.quantity,
            format_value(self.value),
        ))


@dataclass(frozen=True)
class SweepConfig:
    """Grid description for the figure sweeps."""

    M: int
    theta: float = 0.0
    phis: Tuple[float, ...] = FIG1_PHIS
    eta_start: float = DEFAULT_ETA_START
    eta_stop: float = DEFAULT_ETA_STOP
    grid_step: float = DEFAULT_GRID_STEP

    def __post_init__(self):
        if self.grid_step <= 0.0:
            raise DomainError(f"grid_step must be > 0, got {self.grid_step}")
        if not (0.0 < self.eta_start <= self.eta_stop < 1.0):
            raise DomainError(
                f"need 0 < eta_start <= eta_stop < 1, got [{self.eta_start}, {self.eta_stop}]")
        if len(self.phis) == 0:
            raise DomainError("at least one phi value is required")


def grid_etas(cfg: SweepConfig) -> List[float]:
    out = []
    i = 0
    # half-step slack so 0.02 + 93*0.01 still counts as 0.95
    while True:
        eta = cfg.eta_start + i * cfg.grid_step
        if eta > cfg.eta_stop + 0.5 * cfg.grid_step * 1e-6:
            break
        out.append(eta)
        i += 1
    return out


def fig1_config(**overrides) -> SweepConfig:
    base = dict(M=30, theta=0.0, phis=FIG1_PHIS)
    base.update(overrides)
    return SweepConfig(**base)


def fig2_config(**overrides) -> SweepConfig:
    base = dict(M=50, theta=0.0, phis=FIG2_PHIS)
    base.update(overrides)
    return SweepConfig(**base)


def fig1_records(cfg: SweepConfig) -> List[SweepRecord]:
    """Mandel Q against eta, one block of rows per phi."""
    records = []
    for phi in cfg.phis:
        for eta in grid_etas(cfg):
            params = NBSParams(M=cfg.M, eta=eta, theta=cfg.theta)
            records.append(SweepRecord(eta=eta, phi=phi, M=cfg.M,
                                       quantity="mandel_q",
                                       value=q_closed(phi, params)))
    return records


def fig2_records(cfg: SweepConfig, policy: Optional[TruncationPolicy] = None) -> List[SweepRecord]:
    """Variance of X2 against eta, one block of rows per phi."""
    records = []
    for phi in cfg.phis:
        for eta in grid_etas(cfg):
            params = NBSParams(M=cfg.M, eta=eta, theta=cfg.theta)
            records.append(SweepRecord(eta=eta, phi=phi, M=cfg.M,
                                       quantity="var_x2",
                                       value=quadrature_variances(phi, params, policy)[1]))
    return records


def render_sweep_csv(records: Sequence[SweepRecord]) -> str:
    lines = ["eta,phi,M,quantity,value"]
    lines.extend(r.row() for r in records)
    return "\n".join(lines) + "\n"


def pn_table(phi: float, params: NBSParams,
             policy: Optional[TruncationPolicy] = None) -> List[Tuple[int, float]]:
    """(n, P(n)) rows out to the policy-selected truncation for this state."""
    n_max = required_dimension(params, phi, policy)
    return [(n, pn_closed(n, phi, params)) for n in range(n_max + 1)]


def render_pn_csv(rows: Sequence[Tuple[int, float]]) -> str:
    lines = ["n,pn"]
    lines.extend(f"{n},{format_value(p)}" for n, p in rows)
    return "\n".join(lines) + "\n"

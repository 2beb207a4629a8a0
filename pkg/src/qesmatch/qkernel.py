"""q-numbers for real (q = e^tau) and phase (q = e^{i tau}) deformations."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Sequence


class Regime(enum.Enum):
    REAL_Q = "real"
    PHASE_Q = "phase"


@dataclass(frozen=True)
class DeformationParam:
    """Deformation regime plus tau > 0.

    q itself is never stored; every downstream formula is written in tau.
    """

    regime: Regime
    tau: float

    def __post_init__(self):
        if not isinstance(self.regime, Regime):
            raise TypeError(f"regime must be a Regime, got {self.regime!r}")
        if not math.isfinite(self.tau):
            raise ValueError(f"tau must be finite, got {self.tau}")
        if self.tau == 0.0:
            raise ValueError("tau = 0 is the undeformed case; use the plain number")
        if self.tau < 0.0:
            raise ValueError(f"tau must be positive (q <-> 1/q symmetry), got {self.tau}")
        if self.regime is Regime.PHASE_Q and self.tau >= math.pi:
            raise ValueError(f"phase regime requires tau < pi, got {self.tau}")


def qnumber(x: float, d: DeformationParam) -> float:
    """Return the q-number [x].

    sinh(tau x)/sinh(tau) for real q, sin(tau x)/sin(tau) for a phase.
    """
    if d.regime is Regime.REAL_Q:
        return math.sinh(d.tau * x) / math.sinh(d.tau)
    return math.sin(d.tau * x) / math.sin(d.tau)


def classical_number(x: float) -> float:
    return float(x)


@dataclass(frozen=True)
class LimitStep:
    tau: float
    value: float
    deviation: float


@dataclass(frozen=True)
class ConvergenceReport:
    x: float
    regime: Regime
    steps: List[LimitStep]
    tolerance: float

    @property
    def final_deviation(self) -> float:
        return self.steps[-1].deviation

    @property
    def converged(self) -> bool:
        return self.final_deviation <= self.tolerance

    @property
    def monotone(self) -> bool:
        devs = [s.deviation for s in self.steps]
        return all(b <= a for a, b in zip(devs, devs[1:]))


def classical_limit_check(x: float, d: DeformationParam, steps: int = 4,
                          taus: Sequence[float] | None = None,
                          tolerance: float = 1e-6) -> ConvergenceReport:
    """Track |[x] - x| along a decreasing tau sequence.

    By default the sequence starts at ``d.tau`` and shrinks by a factor of
    ten per step.  An explicit ``taus`` sequence overrides both.
    """
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    if taus is None:
        if steps < 1:
            raise ValueError("steps must be a positive integer")
        taus = [d.tau * 10.0 ** (-i) for i in range(steps)]
    out = []
    for t in taus:
        v = qnumber(x, DeformationParam(d.regime, t))
        out.append(LimitStep(tau=t, value=v, deviation=abs(v - x)))
    return ConvergenceReport(x=x, regime=d.regime, steps=out, tolerance=tolerance)

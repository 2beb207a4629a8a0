"""Finite-difference bound states of H = -1/2 d^2/dx^2 + V(x) on [-L, L].

Second-order central differences with Dirichlet walls give a symmetric
tridiagonal matrix; only the lowest ``count`` eigenpairs are computed.
The grid is symmetric about x = 0, so parity is read off the eigenvectors.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .wkbep import PotentialPolynomial, eval_potential

log = logging.getLogger(__name__)

DEFAULT_STEP = 1e-3
DEFAULT_MARGIN = 5.0
DEFAULT_TOL = 1e-3
DEGENERACY_GAP = 1e-6
CONVERGENCE_ORDER = 2
CLUSTER_PAD = 4
DEFAULT_DECAY = 20.0


class GridError(ValueError):
    """Grid violates its invariants (spacing, symmetry, wall height)."""


class OracleConvergenceError(RuntimeError):
    pass


class GridTooCoarseError(OracleConvergenceError):
    """Levels move by more than the tolerance when the step is halved."""


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class GridSpec:
    half_width: float
    step: float
    count: int

    def __post_init__(self):
        if not (self.half_width > 0 and self.step > 0):
            raise GridError("half_width and step must be positive")
        if self.count < 1:
            raise GridError("count must be a positive integer")
        m = self.half_width / self.step
        if abs(m - round(m)) > 1e-9 * max(1.0, m) or round(m) < 2:
            raise GridError(f"half_width/step = {m} must be an integer >= 2 (odd point count)")

    @property
    def intervals(self) -> int:
        """Grid points on each side of x = 0."""
        return int(round(self.half_width / self.step))

    @property
    def points(self) -> int:
        return 2 * self.intervals + 1

    def x(self) -> np.ndarray:
        m = self.intervals
        return self.step * np.arange(-m, m + 1, dtype=float)

    def halved(self) -> "GridSpec":
        return replace(self, step=self.step / 2)


@dataclass
class LevelReport:
    energies: List[float]
    parities: List[Parity]
    grid: GridSpec
    convergence_estimate: List[float]
    near_degenerate: bool = False
    extrapolated: bool = False
    warnings: List[str] = field(default_factory=list)

    def of_parity(self, parity: Parity) -> List[float]:
        return [e for e, p in zip(self.energies, self.parities) if p is parity]

    @property
    def even(self) -> List[float]:
        return self.of_parity(Parity.EVEN)

    @property
    def odd(self) -> List[float]:
        return self.of_parity(Parity.ODD)


def _hamiltonian(poly: PotentialPolynomial, grid: GridSpec) -> Tuple[np.ndarray, np.ndarray]:
    # Interior points only; psi(+-L) = 0.
    x = grid.x()[1:-1]
    h2 = grid.step ** 2
    diag = 1.0 / h2 + eval_potential(poly, x)
    off = np.full(x.size - 1, -0.5 / h2)
    return diag, off


def _lowest_eigenpairs(poly: PotentialPolynomial, grid: GridSpec, extra: int = 0
                       ) -> Tuple[np.ndarray, np.ndarray]:
    diag, off = _hamiltonian(poly, grid)
    count = min(grid.count + extra, diag.size)
    try:
        w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    except LinAlgError as exc:
        raise OracleConvergenceError(f"tridiagonal eigensolve failed on {grid}") from exc
    return w, v


def _rayleigh(diag: np.ndarray, off: np.ndarray, col: np.ndarray) -> float:
    hv = diag * col
    hv[:-1] += off * col[1:]
    hv[1:] += off * col[:-1]
    return float(col @ hv) / float(col @ col)


def _resolve_parity(w: np.ndarray, v: np.ndarray, gap: float, diag: np.ndarray,
                    off: np.ndarray) -> Tuple[np.ndarray, List[Optional[Parity]], bool]:
    """Classify eigenvectors by reflection symmetry.

    Inside a cluster of near-degenerate levels the solver may return any
    rotation of the eigenspace, so the reflection operator is diagonalized
    on the cluster and each resulting vector gets its own Rayleigh quotient.
    Vectors without a definite parity (a cluster cut off at the top of the
    computed range) are labelled None.
    """
    w = w.copy()
    clusters = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] >= gap * max(1.0, abs(w[i])):
            clusters.append((start, i))
            start = i
    degenerate = any(j - i > 1 for i, j in clusters)
    for i, j in clusters:
        if j - i == 1:
            continue
        block = v[:, i:j]
        overlap = block.T @ block[::-1]
        _, rot = np.linalg.eigh(0.5 * (overlap + overlap.T))
        block = block @ rot
        e = np.array([_rayleigh(diag, off, block[:, c]) for c in range(j - i)])
        order = np.argsort(e, kind="stable")
        w[i:j] = e[order]
        v[:, i:j] = block[:, order]
    parities: List[Optional[Parity]] = []
    for col in v.T:
        even_fraction = 0.5 * (1.0 + float(col @ col[::-1]) / float(col @ col))
        if even_fraction >= 0.99:
            parities.append(Parity.EVEN)
        elif even_fraction <= 0.01:
            parities.append(Parity.ODD)
        else:
            parities.append(None)
    return w, parities, degenerate


def _check_margin(poly: PotentialPolynomial, grid: GridSpec, top: float, margin: float):
    x = grid.x()
    V = eval_potential(poly, x)
    floor = float(V.min())
    wall = float(min(V[0], V[-1]))
    if wall - floor < margin * (top - floor):
        raise GridError(
            f"V(L) = {wall:.6g} is not {margin}x above the top level {top:.6g} "
            f"(relative to the potential floor {floor:.6g}); widen the domain")


def _solve_padded(poly: PotentialPolynomial, grid: GridSpec, margin: float):
    # Extra levels keep a degenerate pair from being split at the top.
    w, v = _lowest_eigenpairs(poly, grid, extra=CLUSTER_PAD)
    if len(w) < grid.count:
        raise GridError(f"grid has only {len(w)} interior points for {grid.count} levels")
    diag, off = _hamiltonian(poly, grid)
    w, parities, degenerate = _resolve_parity(w, v, DEGENERACY_GAP, diag, off)
    _check_margin(poly, grid, float(w[grid.count - 1]), margin)
    if any(p is None for p in parities[:grid.count]):
        i = parities.index(None)
        raise OracleConvergenceError(f"level {i} has no definite parity")
    return w, parities, degenerate


def _align(parities: List[Parity], w_other: np.ndarray,
           parities_other: List[Optional[Parity]]) -> np.ndarray:
    """Energies from another solve, paired level-by-level within each parity."""
    pools = {p: [e for e, q in zip(w_other, parities_other) if q is p] for p in Parity}
    seen = {p: 0 for p in Parity}
    out = []
    for p in parities:
        if seen[p] >= len(pools[p]):
            raise OracleConvergenceError(f"no {p.value} partner for level {len(out)} on the finer grid")
        out.append(pools[p][seen[p]])
        seen[p] += 1
    return np.asarray(out)


def _paired_solve(poly: PotentialPolynomial, g: GridSpec, tol: float, margin: float):
    w, parities, degenerate = _solve_padded(poly, g, margin)
    w_half, parities_half, _ = _solve_padded(poly, g.halved(), margin)
    n = g.count
    w, parities = w[:n], parities[:n]
    fine = _align(parities, w_half, parities_half)
    est = np.abs(w - fine)
    bad = est > tol * np.maximum(1.0, np.abs(w))
    if np.any(bad):
        i = int(np.argmax(bad))
        raise GridTooCoarseError(f"grid too coarse: level {i} moves by {est[i]:.3e} when h is halved")
    report = LevelReport(energies=[float(e) for e in w], parities=list(parities), grid=g,
                         convergence_estimate=[float(e) for e in est],
                         near_degenerate=degenerate)
    if degenerate:
        msg = f"near-degenerate levels (gap < {DEGENERACY_GAP:g}) reported as-is"
        report.warnings.append(msg)
        log.warning(msg)
    return report, fine


def solve_bound_states(poly: PotentialPolynomial, g: GridSpec, tol: float = DEFAULT_TOL,
                       margin: float = DEFAULT_MARGIN) -> LevelReport:
    """Lowest ``g.count`` levels at step h, checked against step h/2.

    Raises GridTooCoarseError if any level moves by more than
    ``tol * max(1, |E|)`` when the step is halved, and GridError if the walls
    at +-L sit less than ``margin`` times the top level above the floor.
    """
    report, _ = _paired_solve(poly, g, tol, margin)
    return report


def refine(poly: PotentialPolynomial, g: GridSpec, levels: Optional[int] = None,
           tol: float = DEFAULT_TOL, margin: float = DEFAULT_MARGIN) -> LevelReport:
    """Richardson extrapolation of the h and h/2 energies (error ~ h^2)."""
    if levels is not None:
        g = replace(g, count=levels)
    coarse, fine = _paired_solve(poly, g, tol, margin)
    p = 2.0 ** CONVERGENCE_ORDER
    extrap = (p * fine - np.asarray(coarse.energies)) / (p - 1.0)
    return replace(coarse, energies=[float(e) for e in extrap], extrapolated=True)


def _tail_exponent(poly: PotentialPolynomial, L: float, energy: float, n: int = 2000) -> float:
    """WKB decay exponent int sqrt(2 (V - E)) dx from the outer turning point to L."""
    x = np.linspace(0.0, L, n + 1)
    excess = eval_potential(poly, x) - energy
    inside = np.nonzero(excess <= 0.0)[0]
    start = inside[-1] if inside.size else 0
    kappa = np.sqrt(2.0 * np.clip(excess[start:], 0.0, None))
    return float(trapezoid(kappa, x[start:]))


def auto_grid(poly: PotentialPolynomial, count: int, step: float = DEFAULT_STEP,
              margin: float = DEFAULT_MARGIN, decay: float = DEFAULT_DECAY,
              max_half_width: float = 50.0) -> GridSpec:
    """Smallest domain (in steps of 0.5) that confines the lowest ``count`` levels.

    The walls must clear the top level by ``margin`` and the top level's
    evanescent tail must decay by exp(-decay) before reaching them; for
    shallow wells (e.g. harmonic) the second condition is the binding one.
    """
    if poly.c6 <= 0 and poly.c4 <= 0 and poly.c2 <= 0:
        raise GridError("potential is not confining")
    L = 1.0
    while L <= max_half_width:
        g = GridSpec(half_width=L, step=step, count=count)
        # Coarse probe is enough to place the walls.
        probe = GridSpec(half_width=L, step=max(step, L / 400), count=count)
        try:
            w, _ = _lowest_eigenpairs(poly, probe)
            if len(w) == count:
                top = float(w[-1])
                _check_margin(poly, g, top, margin)
                if _tail_exponent(poly, L, top) >= decay:
                    return g
        except GridError:
            pass
        L += 0.5
    raise GridError(f"no half-width up to {max_half_width} confines {count} levels")


def levels_for(poly: PotentialPolynomial, count: int, step: float = DEFAULT_STEP,
               margin: float = DEFAULT_MARGIN, tol: float = DEFAULT_TOL,
               extrapolate: bool = True) -> LevelReport:
    g = auto_grid(poly, count, step=step, margin=margin)
    if extrapolate:
        return refine(poly, g, tol=tol, margin=margin)
    return solve_bound_states(poly, g, tol=tol, margin=margin)


@dataclass
class FailureReport:
    """Side-well vs central-well comparison for the b < 0 correspondence."""

    oracle: LevelReport
    qes: List[float]
    suq: List[float]
    oracle_even: List[float]
    central_well_even: List[float]
    qes_agreement: float
    suq_gaps: List[float]

    @property
    def oracle_matches_qes(self) -> bool:
        return self.qes_agreement < 1e-2

    @property
    def discrepancy_detected(self) -> bool:
        return min(self.suq_gaps) > 20.0


def failure_demo(count: int = 8, step: float = DEFAULT_STEP,
                 margin: float = DEFAULT_MARGIN) -> FailureReport:
    """Solve the b < 0 double well and set it against both level formulas.

    The quasi-exact levels are the two lowest even states (both in the side
    wells); the SU_q(1,1) levels describe the central well instead.
    """
    from .qes import qes_levels, qes_to_polynomial
    from .reference import DOUBLE_WELL
    from .spectra import suq11_level

    spec = DOUBLE_WELL.qes_spec
    report = levels_for(qes_to_polynomial(spec), count, step=step, margin=margin)
    exact = qes_levels(spec)
    suq = [suq11_level(2 * j + spec.r, DOUBLE_WELL.suq_params) for j in range(spec.size)]
    even = report.even
    if len(even) < spec.size:
        raise OracleConvergenceError(f"only {len(even)} even levels found; raise count")
    low = even[:spec.size]
    return FailureReport(
        oracle=report,
        qes=exact,
        suq=suq,
        oracle_even=low,
        central_well_even=[e for e in even if e > 0.0],
        qes_agreement=max(abs(o - q) for o, q in zip(low, exact)),
        suq_gaps=[abs(o - s) for o, s in zip(low, suq)],
    )

"""Fit an SU_q(1,1) WKB equivalent potential to a quasi-exactly soluble sextic.

Equating the x^2, x^4 and x^6 coefficients of the two potentials (a = 1,
hbar = m = 1) gives closed forms for A and b in terms of (tau, theta = N tau)
and one transcendental condition on tau for the integer k = 2n + r:

    2k + 3 = -(3 sqrt5 / 2) sin(theta) (18 cos^2 theta - 6)
             / (tau (23 cos^2 theta - 6)^(3/2))

Real solutions need sin(theta) > 0 and 6/23 < cos^2(theta) < 1/3.  Only the
first branch of each window is searched.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

from .qes import QesPotentialSpec, qes_to_polynomial
from .spectra import SuqSpectrumParams, e0prime_for_vmin, n_max
from .wkbep import MPT_BRACKET, PotentialPolynomial, wkbep_series

SQRT5 = math.sqrt(5.0)
ENDPOINT_GUARD = 1e-9
ROOT_TOL = 1e-10


class MatchError(RuntimeError):
    """No admissible correspondence for the requested parameters."""


class NoRootInWindow(MatchError):
    pass


class ConvergenceError(RuntimeError):
    pass


class SignB(enum.Enum):
    POSITIVE = "pos"
    NEGATIVE = "neg"


def feasible_window(sign_b: SignB) -> Tuple[float, float]:
    """Open interval of theta = N tau admitting a match with the given sign of b."""
    lo_cos2 = math.sqrt(6.0 / 23.0)
    hi_cos2 = 1.0 / math.sqrt(3.0)
    if sign_b is SignB.POSITIVE:
        return (math.pi - math.acos(lo_cos2), math.pi - math.acos(hi_cos2))
    return (math.acos(hi_cos2), math.acos(lo_cos2))


def _guard(theta: float) -> float:
    c2 = math.cos(theta) ** 2
    g = 23.0 * c2 - 6.0
    if g <= 0.0 or math.sin(theta) <= 0.0:
        raise MatchError(f"theta = {theta} outside the region sin > 0, cos^2 > 6/23")
    return g


def k_of_theta_tau(theta: float, tau: float) -> float:
    """Value of 2k + 3 implied by (theta, tau)."""
    g = _guard(theta)
    c2 = math.cos(theta) ** 2
    return -1.5 * SQRT5 * math.sin(theta) * (18.0 * c2 - 6.0) / (tau * g ** 1.5)


def amplitude_A(tau: float, N: int) -> float:
    theta = N * tau
    g = _guard(theta)
    return (math.sqrt(6.0 * SQRT5) * math.sin(tau) ** 2
            / (tau ** 1.5 * math.sqrt(math.sin(theta)) * g ** 0.25))


def shape_b(tau: float, N: int) -> float:
    theta = N * tau
    g = _guard(theta)
    return (-math.sqrt(7.5 * SQRT5) * math.sqrt(math.sin(theta)) * math.cos(theta)
            / (math.sqrt(tau) * g ** 0.75))


def _bisect(f, lo: float, hi: float, tol: float, maxiter: int = 400) -> float:
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoRootInWindow(f"no sign change on [{lo}, {hi}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) < tol:
            return mid
        if mid in (lo, hi):
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    raise ConvergenceError(f"bisection stalled at |f| = {abs(fm):.3e} > {tol:.1e}")


def solve_tau(N: int, k: int, sign_b: SignB, tol: float = ROOT_TOL) -> float:
    """Root tau of k_of_theta_tau(N tau, tau) = 2k + 3 with N tau in the window."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    lo, hi = feasible_window(sign_b)
    target = 2 * k + 3

    def f(theta):
        return k_of_theta_tau(theta, theta / N) - target

    theta = _bisect(f, lo + ENDPOINT_GUARD, hi - ENDPOINT_GUARD, tol)
    return theta / N


@dataclass(frozen=True)
class MatchSolution:
    spec: QesPotentialSpec
    N: int
    tau: float
    A: float
    E0prime: float
    theta: float
    potential: PotentialPolynomial
    residuals: Tuple[float, float, float]

    @property
    def b(self) -> float:
        return self.spec.b

    @property
    def suq_params(self) -> SuqSpectrumParams:
        return SuqSpectrumParams(E0prime=self.E0prime, A=self.A, tau=self.tau, N=self.N)


def coefficient_residuals(a: float, b: float, k: int, A: float, tau: float,
                          N: int) -> Tuple[float, float, float]:
    """Relative mismatch of the x^2, x^4, x^6 coefficient equations."""
    s = math.sin(tau)
    sn = math.sin(N * tau)
    cn = math.cos(N * tau)
    pairs = (
        (2.0 * (b * b - (2 * k + 3) * a), 0.5 * A ** 2 * tau ** 2 * sn ** 2 / s ** 4),
        (8.0 * a * b, -2.0 / 3.0 * A ** 3 * tau ** 4 * sn ** 2 * cn / s ** 6),
        (8.0 * a * a, 2.0 / 45.0 * A ** 4 * tau ** 6 * sn ** 2 * (23 * cn * cn - 6) / s ** 8),
    )
    return tuple(abs(lhs - rhs) / max(abs(lhs), abs(rhs)) for lhs, rhs in pairs)


def match(n: int, r: int, N: int, sign_b: SignB = SignB.POSITIVE,
          tol: float = ROOT_TOL) -> MatchSolution:
    """Solve the coefficient matching for QESP sector (n, r) at band parameter N.

    Raises MatchError when the SU_q(1,1) band has fewer levels than the
    quasi-exact sector it is meant to describe.
    """
    if n < 0 or r not in (0, 1):
        raise ValueError(f"need n >= 0 and r in {{0, 1}}, got n={n}, r={r}")
    k = 2 * n + r
    if k > n_max(N):
        raise MatchError(f"N = {N} supports levels 0..{n_max(N)}, but the sector reaches level {k}")
    tau = solve_tau(N, k, sign_b, tol)
    A = amplitude_A(tau, N)
    b = shape_b(tau, N)
    E0 = e0prime_for_vmin(A, tau, N, 0.0)
    spec = QesPotentialSpec(a=1.0, b=b, n=n, r=r)
    params = SuqSpectrumParams(E0prime=E0, A=A, tau=tau, N=N)
    potential = dataclasses.replace(wkbep_series(params), vmin=0.0)
    res = coefficient_residuals(1.0, b, k, A, tau, N)
    return MatchSolution(spec=spec, N=N, tau=tau, A=A, E0prime=E0, theta=N * tau,
                         potential=potential, residuals=res)


def scan_N(n: int, r: int, sign_b: SignB, N_range: Iterable[int]) -> List[MatchSolution]:
    Ns = sorted(set(N_range))
    if not Ns:
        raise ValueError("empty N range")
    out = []
    for N in Ns:
        try:
            out.append(match(n, r, N, sign_b))
        except MatchError:
            continue
    return out


def roundtrip_residuals(sol: MatchSolution) -> Tuple[float, float, float]:
    """|c_i(WKB) - c_i(QESP)| / |c_i| for i = 2, 4, 6."""
    qp = qes_to_polynomial(sol.spec)
    return tuple(abs(w - q) / abs(q) for w, q in zip(sol.potential.coefficients, qp.coefficients))


@dataclass(frozen=True)
class MptAttempt:
    """Outcome of forcing the one-parameter tanh^2 well onto the sextic family."""

    k: int
    A: float
    b: float
    violations: Tuple[float, float]
    b_sign_conflict: bool

    @property
    def feasible(self) -> bool:
        return max(self.violations) < 1e-8 and not self.b_sign_conflict

    @property
    def max_violation(self) -> float:
        return max(self.violations)


def attempt_mpt_match(k: int) -> MptAttempt:
    """Try to match the modified Poschl-Teller Taylor series (a = 1).

    The x^6 equation fixes A.  ``violations[0]`` is the relative miss of the
    x^2 equation using the b that the x^4 equation forces; ``violations[1]``
    is the relative miss of the x^4 equation for the best b >= 0 (a single
    well at the origin needs b > 0).
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    _, t4, t6, _ = MPT_BRACKET
    # c_{2m} = (A/4) t_{2m} (2A)^m; the x^6 equation reads 8 = 2 t6 A^4
    A = (4.0 / t6) ** 0.25
    c2 = 0.5 * A * A
    c4 = t4 * A ** 3
    b = c4 / 8.0
    v2 = abs(2.0 * (b * b - (2 * k + 3)) - c2) / abs(c2)
    b_pos = max(b, 0.0)
    v4 = abs(8.0 * b_pos - c4) / abs(c4)
    return MptAttempt(k=k, A=A, b=b, violations=(v2, v4), b_sign_conflict=b < 0)

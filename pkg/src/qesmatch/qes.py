"""Quasi-exactly soluble sextic oscillator V = 8a^2 x^6 + 8ab x^4 + 2[b^2 - (2k+3)a] x^2.

With H = -1/2 d^2/dx^2 + V and the ansatz

    psi(x) = x^r P(x^2) exp(-a x^4 - b x^2),   deg P = n,

H maps the span of x^(r+2j) exp(-a x^4 - b x^2), j = 0..n, into itself.
In that basis H acts as the tridiagonal matrix built by ``qes_matrix``;
its eigenvalues are the n+1 lowest levels of parity (-1)^r.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .wkbep import PotentialPolynomial


class QesError(RuntimeError):
    """Eigensolve of the quasi-exact sector failed."""


@dataclass(frozen=True)
class QesPotentialSpec:
    a: float
    b: float
    n: int
    r: int

    def __post_init__(self):
        if self.a < 0:
            raise ValueError(f"a must be non-negative for a normalizable ground state, got {self.a}")
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a non-negative integer, got {self.n}")
        if self.r not in (0, 1):
            raise ValueError(f"r must be 0 or 1, got {self.r}")

    @property
    def k(self) -> int:
        return 2 * self.n + self.r

    @property
    def size(self) -> int:
        return self.n + 1


def qes_to_polynomial(s: QesPotentialSpec) -> PotentialPolynomial:
    a, b = s.a, s.b
    return PotentialPolynomial(
        vmin=0.0,
        c2=2.0 * (b * b - (2 * s.k + 3) * a),
        c4=8.0 * a * b,
        c6=8.0 * a * a,
    )


def _bands(s: QesPotentialSpec):
    j = np.arange(s.n + 1, dtype=float)
    diag = s.b * (4 * j + 2 * s.r + 1)
    jj = j[:-1]
    upper = -(jj + 1) * (2 * jj + 2 * s.r + 1)
    lower = 8.0 * s.a * (jj - s.n)
    return diag, upper, lower


def qes_matrix(s: QesPotentialSpec) -> np.ndarray:
    """Matrix of H on the quasi-exact basis; acts on the coefficient vector of P."""
    diag, upper, lower = _bands(s)
    return np.diag(diag) + np.diag(upper, 1) + np.diag(lower, -1)


def _symmetric_bands(s: QesPotentialSpec):
    # upper*lower = 8a (n-j)(j+1)(2j+2r+1) >= 0, so a real diagonal
    # similarity makes the matrix symmetric with off-diagonal -sqrt(product).
    diag, upper, lower = _bands(s)
    return diag, -np.sqrt(upper * lower)


def qes_levels(s: QesPotentialSpec) -> List[float]:
    diag, off = _symmetric_bands(s)
    if s.n == 0:
        return [float(diag[0])]
    try:
        w = eigh_tridiagonal(diag, off, eigvals_only=True)
    except LinAlgError as exc:
        raise QesError(f"tridiagonal eigensolve failed for {s}") from exc
    if len(w) != s.size or not np.all(np.isfinite(w)):
        raise QesError(f"expected {s.size} finite eigenvalues, got {w}")
    return sorted(float(v) for v in w)


def qes_characteristic_polynomial(s: QesPotentialSpec) -> Polynomial:
    """det(E - M) as a polynomial in E, by the three-term recurrence."""
    diag, upper, lower = _bands(s)
    E = Polynomial([0.0, 1.0])
    p_prev, p = Polynomial([1.0]), E - diag[0]
    for j in range(1, s.n + 1):
        p_prev, p = p, (E - diag[j]) * p - upper[j - 1] * lower[j - 1] * p_prev
    return p


@dataclass(frozen=True)
class QesEigenfunction:
    """psi(x) = x^r (sum_j c_j x^{2j}) exp(-a x^4 - b x^2)."""

    energy: float
    coeffs: Tuple[float, ...]
    a: float
    b: float
    r: int

    def polynomial(self, x):
        z = np.multiply(x, x)
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def __call__(self, x):
        x = np.asarray(x)
        return x ** self.r * self.polynomial(x) * np.exp(-self.a * x ** 4 - self.b * x ** 2)


def qes_eigenfunction(s: QesPotentialSpec, level_index: int,
                      degeneracy_tol: float = 1e-10) -> QesEigenfunction:
    if s.a <= 0:
        raise ValueError("eigenfunctions need a > 0 to be normalizable")
    if not 0 <= level_index <= s.n:
        raise ValueError(f"level_index must be in 0..{s.n}, got {level_index}")
    diag, upper, lower = _bands(s)
    if s.n == 0:
        return QesEigenfunction(float(diag[0]), (1.0,), s.a, s.b, s.r)
    sym_diag, off = _symmetric_bands(s)
    try:
        w, y = eigh_tridiagonal(sym_diag, off)
    except LinAlgError as exc:
        raise QesError(f"tridiagonal eigensolve failed for {s}") from exc
    gaps = np.diff(w)
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.any(gaps < degeneracy_tol * scale):
        raise QesError(f"degenerate quasi-exact levels for {s}: {w}")
    # Undo the similarity: M = D S D^-1 with d_{j+1}/d_j = sqrt(lower_j / upper_j).
    d = np.ones(s.n + 1)
    for j in range(s.n):
        d[j + 1] = d[j] * np.sqrt(lower[j] / upper[j])
    c = d * y[:, level_index]
    c = c / c[np.argmax(np.abs(c))]
    return QesEigenfunction(float(w[level_index]), tuple(float(v) for v in c), s.a, s.b, s.r)

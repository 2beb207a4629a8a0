"""WKB equivalent potential of the SU_q(1,1) oscillator, truncated at x^6.

Units: hbar = m = 1, so the scaled coordinate is u = sqrt(2A) x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .spectra import SuqSpectrumParams, suq11_vmin


@dataclass(frozen=True)
class PotentialPolynomial:
    """Even sextic V(x) = vmin + c2 x^2 + c4 x^4 + c6 x^6."""

    vmin: float
    c2: float
    c4: float
    c6: float

    def __call__(self, x):
        return eval_potential(self, x)

    @property
    def coefficients(self) -> Tuple[float, float, float]:
        return (self.c2, self.c4, self.c6)

    def factored(self) -> Tuple[float, float, float]:
        """(c2, c4/c2, c6/c2), the ``c2 (x^2 + r4 x^4 + r6 x^6)`` form."""
        return (self.c2, self.c4 / self.c2, self.c6 / self.c2)

    def as_dict(self) -> dict:
        return {"vmin": self.vmin, "c2": self.c2, "c4": self.c4, "c6": self.c6}


def eval_potential(poly: PotentialPolynomial, x):
    x2 = np.multiply(x, x)
    return poly.vmin + x2 * (poly.c2 + x2 * (poly.c4 + x2 * poly.c6))


def bracket_coefficients(tau: float, N: int) -> Tuple[float, float, float, float]:
    """Coefficients of 1, u^2, u^4, u^6 inside the bracket of the u-series.

    The u^6 term is returned only for limit checks; it never enters the
    sextic truncation.
    """
    s2 = math.sin(tau) ** 2
    C = math.cos(N * tau)
    r = tau * tau / s2
    return (
        1.0,
        -2.0 / 3.0 * r * C,
        (23.0 * C * C - 6.0) * r * r / 45.0,
        -2.0 / 315.0 * (67.0 * C * C - 36.0) * C * r ** 3,
    )


def leading_factor(tau: float, N: int) -> float:
    """K = tau sin(N tau) / sin^2 tau; the u^2 coefficient is (A/4) K^2."""
    return tau * math.sin(N * tau) / math.sin(tau) ** 2


def wkbep_series(p: SuqSpectrumParams) -> PotentialPolynomial:
    sin_theta = math.sin(p.N * p.tau)
    if abs(sin_theta) < 1e-12:
        raise ValueError(f"N tau = {p.N * p.tau} is a multiple of pi; leading coefficient vanishes")
    K = leading_factor(p.tau, p.N)
    _, b4, b6, _ = bracket_coefficients(p.tau, p.N)
    scale = 0.25 * p.A * K * K
    two_a = 2.0 * p.A
    return PotentialPolynomial(
        vmin=suq11_vmin(p),
        c2=scale * two_a,
        c4=scale * b4 * two_a ** 2,
        c6=scale * b6 * two_a ** 3,
    )


def mpt_closed_form(x, vmin: float, A: float, N: int):
    """Modified Poschl-Teller well vmin + (A N^2 / 4) tanh^2(sqrt(2A) x).

    Accepts complex ``x`` (used for contour-based Taylor checks).
    """
    if not A > 0:
        raise ValueError(f"A must be positive, got {A}")
    return vmin + 0.25 * A * N * N * np.tanh(math.sqrt(2.0 * A) * np.asarray(x)) ** 2


# Taylor bracket of the tanh^2 well in powers of u^2, exact rationals.
MPT_BRACKET = (1.0, -2.0 / 3.0, 17.0 / 45.0, -62.0 / 315.0)

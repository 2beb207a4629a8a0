"""Spectra of the q-deformed harmonic oscillator and the SU_q(1,1) anharmonic oscillator."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .qkernel import DeformationParam, qnumber


@dataclass(frozen=True)
class QhoParams:
    omega: float
    d: DeformationParam

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")


@dataclass(frozen=True)
class SuqSpectrumParams:
    """Parameters of the SU_q(1,1) spectrum (phase regime only).

    ``E0prime`` is the energy offset, ``A`` the energy scale, ``tau`` the
    deformation phase and ``N`` the band parameter fixing ``n_max``.
    """

    E0prime: float
    A: float
    tau: float
    N: int

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError(f"A must be positive for an increasing spectrum, got {self.A}")
        if not 0 < self.tau < math.pi:
            raise ValueError(f"tau must lie in (0, pi), got {self.tau}")
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N}")

    @property
    def n_max(self) -> int:
        return n_max(self.N)

    @property
    def theta(self) -> float:
        return self.N * self.tau


def n_max(N: int) -> int:
    """Index of the last level below dissociation (N = 2 n_max or 2 n_max + 1)."""
    return N // 2 if N % 2 == 0 else (N - 1) // 2


def qho_level(n: int, p: QhoParams) -> float:
    if n < 0:
        raise ValueError(f"level index must be non-negative, got {n}")
    return 0.5 * p.omega * (qnumber(n, p.d) + qnumber(n + 1, p.d))


def suq11_level(n: int, p: SuqSpectrumParams) -> float:
    """Energy of level ``n`` of the SU_q(1,1) anharmonic oscillator."""
    if n < 0 or n > p.n_max:
        raise ValueError(f"level {n} outside 0..{p.n_max} (beyond the dissociation limit)")
    t = p.tau
    num = math.sin(t * (n - p.N / 2)) * math.sin(t * (n + 1 - p.N / 2))
    return p.E0prime - p.A * num / math.sin(t) ** 2


def well_depth(A: float, tau: float, N: int) -> float:
    """A (cos tau - cos N tau) / (2 sin^2 tau), the offset E0' - V_min.

    Written as a product of sines so that tau -> 0 does not cancel.
    """
    s = math.sin(0.5 * tau * (N + 1)) * math.sin(0.5 * tau * (N - 1))
    return A * s / math.sin(tau) ** 2


def suq11_vmin(p: SuqSpectrumParams) -> float:
    return p.E0prime - well_depth(p.A, p.tau, p.N)


def e0prime_for_vmin(A: float, tau: float, N: int, vmin: float = 0.0) -> float:
    """Offset E0' that places the potential minimum at ``vmin``."""
    return vmin + well_depth(A, tau, N)

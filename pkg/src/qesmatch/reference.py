"""Published parameter sets of the four worked correspondences.

These are inputs (as printed, to their printed precision), not computed
results.  ``matcher.match`` re-derives the same quantities from (n, r, N).
"""
from __future__ import annotations

from dataclasses import dataclass

from .matcher import SignB
from .qes import QesPotentialSpec
from .spectra import SuqSpectrumParams


@dataclass(frozen=True)
class ReferenceCase:
    name: str
    n: int
    r: int
    N: int
    tau: float
    A: float
    b: float
    E0prime: float
    sign_b: SignB

    @property
    def suq_params(self) -> SuqSpectrumParams:
        return SuqSpectrumParams(E0prime=self.E0prime, A=self.A, tau=self.tau, N=self.N)

    @property
    def qes_spec(self) -> QesPotentialSpec:
        return QesPotentialSpec(a=1.0, b=self.b, n=self.n, r=self.r)


N1 = ReferenceCase("n1", n=1, r=0, N=151, tau=0.0144503, A=0.4343473, b=12.589097,
                   E0prime=1636.8943, sign_b=SignB.POSITIVE)
N3 = ReferenceCase("n3", n=3, r=0, N=325, tau=0.00671384, A=0.2960795, b=18.469158,
                   E0prime=5168.941, sign_b=SignB.POSITIVE)
N9 = ReferenceCase("n9", n=9, r=0, N=399, tau=0.00545864, A=0.2703882, b=21.275801,
                   E0prime=7126.0336, sign_b=SignB.POSITIVE)
DOUBLE_WELL = ReferenceCase("double_well", n=1, r=0, N=61, tau=0.0157377, A=0.4538508,
                            b=-12.108743, E0prime=390.66689, sign_b=SignB.NEGATIVE)

CASES = {c.name: c for c in (N1, N3, N9, DOUBLE_WELL)}

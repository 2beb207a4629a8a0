"""Connect SU_q(1,1) WKB equivalent potentials to quasi-exactly soluble sextic oscillators."""
import logging

from .matcher import MatchSolution, SignB, match, scan_N
from .oracle import GridSpec, LevelReport, refine, solve_bound_states
from .qes import QesPotentialSpec, qes_levels, qes_to_polynomial
from .qkernel import DeformationParam, Regime, qnumber
from .spectra import QhoParams, SuqSpectrumParams, qho_level, suq11_level, suq11_vmin
from .wkbep import PotentialPolynomial, eval_potential, wkbep_series

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"

__all__ = [
    "DeformationParam", "Regime", "qnumber",
    "QhoParams", "SuqSpectrumParams", "qho_level", "suq11_level", "suq11_vmin",
    "PotentialPolynomial", "eval_potential", "wkbep_series",
    "QesPotentialSpec", "qes_levels", "qes_to_polynomial",
    "MatchSolution", "SignB", "match", "scan_N",
    "GridSpec", "LevelReport", "solve_bound_states", "refine",
]

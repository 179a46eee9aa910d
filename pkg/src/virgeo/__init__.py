"""Computable geometry of the Virasoro-Bott group and the universal deformation of the disk."""
from . import (circleact, deformation, errors, flagspace, grunsky, neretin, scalars,
               seriescore, virasoro)
from .circleact import CircleDiffeo, bott_cocycle, coadjoint_act, schwarzian
from .deformation import DeformationPoint, Subsymmetry
from .errors import DivergenceError, DomainError, VirgeoError
from .flagspace import UnivalentPoint, koebe_point, lp_operator, maslov_index
from .grunsky import grunsky_matrix, milin_defect, siegel_check
from .neretin import FormalProduct, NeretinElement, multiply, neretin_cocycle, scaling
from .scalars import GaussianRational
from .seriescore import FourierFunction, TruncatedSeries
from .virasoro import VirasoroVector, WittVector, virasoro_bracket

__version__ = "0.1.0"

__all__ = [
    "circleact", "deformation", "errors", "flagspace", "grunsky", "neretin", "scalars",
    "seriescore", "virasoro",
    "CircleDiffeo", "bott_cocycle", "coadjoint_act", "schwarzian",
    "DeformationPoint", "Subsymmetry",
    "DivergenceError", "DomainError", "VirgeoError",
    "UnivalentPoint", "koebe_point", "lp_operator", "maslov_index",
    "grunsky_matrix", "milin_defect", "siegel_check",
    "FormalProduct", "NeretinElement", "multiply", "neretin_cocycle", "scaling",
    "GaussianRational", "FourierFunction", "TruncatedSeries",
    "VirasoroVector", "WittVector", "virasoro_bracket",
]

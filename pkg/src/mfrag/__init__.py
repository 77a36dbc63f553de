"""Exact-arithmetic matroid structure analysis.

The main entry points are re-exported here; the submodules hold the rest.
"""

from .catalog import catalog, catalog_names, uniform, wheel, whirl
from .connectivity import is_3connected, is_connected, lam
from .corpus import load_corpus
from .deltawye import delta_y, wye_delta
from .errors import MfragError
from .formats import dump_ctx, dump_mtd, dump_pmx, load_ctx, load_mtd, load_pmx
from .incrimination import SetupContext, incriminates, incrimination_dichotomy
from .isomorphism import isomorphic
from .matroid import Matroid, MinorRecipe, matroid_from_bases
from .minors import classify_elements, has_minor, is_fragile, is_strictly_fragile
from .partial_field import pf_make, pf_parse
from .pmatrix import PMatrix, matroid_from_pmatrix, pivot
from .theorems import classify_mainthm1, classify_mainthm2

__version__ = "0.1.0"

__all__ = [
    "Matroid",
    "MinorRecipe",
    "MfragError",
    "PMatrix",
    "SetupContext",
    "catalog",
    "catalog_names",
    "classify_elements",
    "classify_mainthm1",
    "classify_mainthm2",
    "delta_y",
    "dump_ctx",
    "dump_mtd",
    "dump_pmx",
    "has_minor",
    "incriminates",
    "incrimination_dichotomy",
    "is_3connected",
    "is_connected",
    "is_fragile",
    "is_strictly_fragile",
    "isomorphic",
    "lam",
    "load_corpus",
    "load_ctx",
    "load_mtd",
    "load_pmx",
    "matroid_from_bases",
    "matroid_from_pmatrix",
    "pf_make",
    "pf_parse",
    "pivot",
    "uniform",
    "wheel",
    "whirl",
    "wye_delta",
]

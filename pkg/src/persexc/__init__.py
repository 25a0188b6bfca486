"""Absolute and relative persistent homology over GF(p), with machine-checked
excision, Mayer-Vietoris and pair sequences."""

from .complex_core import (
    ComplexError,
    CoverReport,
    FilteredComplex,
    SubcomplexSpec,
    check_cover,
    induced_filtration,
    intersect,
    load_complex,
    load_subcomplex,
    parse_complex,
    sublevel_filtration,
)
from .excision import excise_compute, verify_excision_step, verify_persistent_excision
from .gf_linalg import FieldMatrix
from .homology import build_module, persistent_betti, stage_complex, stage_homology
from .persistence import Barcode, barcode, betti_from_barcode, reduce

__version__ = "0.1.0"

__all__ = [
    "Barcode",
    "ComplexError",
    "CoverReport",
    "FieldMatrix",
    "FilteredComplex",
    "SubcomplexSpec",
    "barcode",
    "betti_from_barcode",
    "build_module",
    "check_cover",
    "excise_compute",
    "induced_filtration",
    "intersect",
    "load_complex",
    "load_subcomplex",
    "parse_complex",
    "persistent_betti",
    "reduce",
    "stage_complex",
    "stage_homology",
    "sublevel_filtration",
    "verify_excision_step",
    "verify_persistent_excision",
]

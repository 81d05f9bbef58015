"""
Metaplectic Iwahori-Whittaker and spherical functions via Demazure-Lusztig
operators built from the Chinta-Gunnells action, with exact arithmetic over
the group algebra of the coroot lattice and a brute-force p-adic oracle.
"""

from .cgaction import cg_simple, cg_word, verify_braid_cg
from .dlops import cs_rhs, dl_simple, dl_word, symmetrizer, whittaker_full
from .galgebra import AlgebraElement, GroupAlgebra, RationalElement, series_expand
from .gausscoeff import CoeffElement, CoeffRing, specialize
from .metastruct import MetaplecticData
from .rootsys import CartanSpec, RootSystem, build_root_system
from .spherical import spherical_function

__all__ = [
    "AlgebraElement", "CartanSpec", "CoeffElement", "CoeffRing", "GroupAlgebra",
    "MetaplecticData", "RationalElement", "RootSystem", "build_root_system",
    "cg_simple", "cg_word", "cs_rhs", "dl_simple", "dl_word", "series_expand",
    "specialize", "spherical_function", "symmetrizer", "verify_braid_cg", "whittaker_full",
]

__version__ = "0.1.0"

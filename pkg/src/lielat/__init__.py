"""Exact arithmetic for Z_p-Lie lattices and their index-stability."""

from .catalog import builtin
from .errors import LieLatError
from .lattice import (
    LieLattice,
    ad_matrix,
    derivations,
    is_powerful,
    is_semisimple,
    killing_matrix,
    series_profile,
    simplicity_report,
    validate,
)
from .padic import INF, QMatrix, hnf_p, newton_slopes, smith_p, vp
from .stability import (
    AutoMap,
    automorphism_check,
    index_ratio,
    iso_index_check,
    search_unstable_witness,
    serre_verdict,
    stability_certificate,
)
from .sublattice import Sublattice, gram, index, is_subalgebra, scale_power, transform

__version__ = "0.1.0"

__all__ = [
    "INF", "AutoMap", "LieLatError", "LieLattice", "QMatrix", "Sublattice",
    "ad_matrix", "automorphism_check", "builtin", "derivations", "gram", "hnf_p", "index",
    "index_ratio", "is_powerful", "is_semisimple", "is_subalgebra", "iso_index_check",
    "killing_matrix", "newton_slopes", "scale_power", "search_unstable_witness",
    "serre_verdict", "series_profile", "simplicity_report", "smith_p", "stability_certificate",
    "transform", "validate", "vp",
]

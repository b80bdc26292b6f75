"""Frobenius splitting, ordinarity and Ulrich/ACM checks for hypersurfaces over F_p."""

__version__ = "0.1.0"

from .polyfp import MultiPoly, poly_parse, poly_mul, poly_pow, poly_coeff, poly_partials
from .matfp import FpMatrix, mat_rank, mat_kernel_basis, mat_stable_rank
from .cohom import (
    HypersurfaceDatum,
    b1_dims,
    b1_table,
    cartier_omega_map,
    chi_b1,
    frobenius_h0_map,
    frobenius_htop_map,
    hasse_witt,
    h0_quotient_basis,
    htop_kernel_basis,
    pushforward_twist_dims,
)
from .families import (
    FamilySpec,
    cartier_manin_hyperelliptic,
    deuring_hasse,
    is_smooth,
    legendre_h,
    make_dwork,
    make_fermat,
    make_legendre_cubic,
    random_hypersurface,
    random_plane_curve,
)
from .criteria import (
    Verdict,
    acm_check_b1,
    fedder_is_split,
    fsplit_equivalence_check,
    is_ordinary_curve,
    kunneth_ulrich_check,
    pushforward_acm_check,
    ulrich_check_curve,
    ulrich_rank_multiplier,
    ulrich_twist_obstruction,
)

__all__ = [
    "__version__",
    "MultiPoly",
    "poly_parse",
    "poly_mul",
    "poly_pow",
    "poly_coeff",
    "poly_partials",
    "FpMatrix",
    "mat_rank",
    "mat_kernel_basis",
    "mat_stable_rank",
    "HypersurfaceDatum",
    "b1_dims",
    "b1_table",
    "cartier_omega_map",
    "chi_b1",
    "frobenius_h0_map",
    "frobenius_htop_map",
    "hasse_witt",
    "h0_quotient_basis",
    "htop_kernel_basis",
    "pushforward_twist_dims",
    "FamilySpec",
    "cartier_manin_hyperelliptic",
    "deuring_hasse",
    "is_smooth",
    "legendre_h",
    "make_dwork",
    "make_fermat",
    "make_legendre_cubic",
    "random_hypersurface",
    "random_plane_curve",
    "Verdict",
    "acm_check_b1",
    "fedder_is_split",
    "fsplit_equivalence_check",
    "is_ordinary_curve",
    "kunneth_ulrich_check",
    "pushforward_acm_check",
    "ulrich_check_curve",
    "ulrich_rank_multiplier",
    "ulrich_twist_obstruction",
]

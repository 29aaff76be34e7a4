"""Certificates for generalized diagonal dominance and eigenvalue inclusion regions."""

from gddkit.matcore import (
    as_matrix,
    as_scaling,
    comparison_matrix,
    deleted_sums,
    weighted_deleted_sums,
)
from gddkit.structure import FrobeniusForm, frobenius_normal_form, is_irreducible, tilde_sums
from gddkit.classify import (
    ClassificationReport,
    ConvergenceError,
    classify_h,
    is_m_matrix,
    is_sdd,
    is_z_matrix,
    spectral_radius_nonneg,
)
from gddkit.eigen import Spectrum, eigenvalues, verify_inclusion
from gddkit.regions import (
    GridMask,
    Region,
    RegionSet,
    approx_intersection,
    build_region_set,
    check_containment,
    contains,
    rasterize,
)

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport",
    "ConvergenceError",
    "FrobeniusForm",
    "GridMask",
    "Region",
    "RegionSet",
    "Spectrum",
    "approx_intersection",
    "as_matrix",
    "as_scaling",
    "build_region_set",
    "check_containment",
    "classify_h",
    "comparison_matrix",
    "contains",
    "deleted_sums",
    "eigenvalues",
    "frobenius_normal_form",
    "is_irreducible",
    "is_m_matrix",
    "is_sdd",
    "is_z_matrix",
    "rasterize",
    "spectral_radius_nonneg",
    "tilde_sums",
    "verify_inclusion",
    "weighted_deleted_sums",
]

"""Dense complex matrices and their deleted absolute row/column sums.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; sum vectors are
nonnegative ``float64`` arrays of length ``n``. A positive scaling vector ``x``
stands for the diagonal matrix ``X = diag(x)``.
"""

from __future__ import annotations

import numpy as np

ROW = "row"
COLUMN = "column"
AXES = (ROW, COLUMN)


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` as a finite square matrix and return a complex copy."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise ValueError("matrix order must be at least 1")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_scaling(x, n: int | None = None) -> np.ndarray:
    """Validate a positive scaling vector (the diagonal of X)."""
    v = np.array(x, dtype=float).reshape(-1)
    if n is not None and v.shape[0] != n:
        raise ValueError(f"scaling has length {v.shape[0]}, expected {n}")
    if not np.all(np.isfinite(v)) or np.any(v <= 0):
        raise ValueError("scaling entries must be finite and strictly positive")
    return v


def _check_axis(axis: str) -> None:
    if axis not in AXES:
        raise ValueError(f"axis must be 'row' or 'column', got {axis!r}")


def offdiag_moduli(a) -> np.ndarray:
    """|A| with the diagonal zeroed. ``np.abs`` on complex uses hypot, so no overflow."""
    m = np.abs(as_matrix(a))
    np.fill_diagonal(m, 0.0)
    return m


def diag_moduli(a) -> np.ndarray:
    return np.abs(np.diagonal(as_matrix(a))).astype(float)


def deleted_sums(a, axis: str = ROW) -> np.ndarray:
    """Deleted absolute row sums r(A) or column sums c(A)."""
    _check_axis(axis)
    m = offdiag_moduli(a)
    return m.sum(axis=1) if axis == ROW else m.sum(axis=0)


def scale(a, x) -> np.ndarray:
    """Form X^{-1} A X explicitly."""
    m = as_matrix(a)
    v = as_scaling(x, m.shape[0])
    return m * v[None, :] / v[:, None]


def weighted_deleted_sums(a, x, axis: str = ROW) -> np.ndarray:
    """Weighted sums r^X(A) = r(X^{-1}AX) or c^X(A) = c(X^{-1}AX)."""
    _check_axis(axis)
    m = offdiag_moduli(a)
    v = as_scaling(x, m.shape[0])
    if axis == ROW:
        return (m @ v) / v
    return v * ((1.0 / v) @ m)


def comparison_matrix(a) -> np.ndarray:
    """Real comparison matrix: |a_ii| on the diagonal, -|a_ij| elsewhere."""
    m = -np.abs(as_matrix(a))
    np.fill_diagonal(m, -np.diagonal(m))
    return m

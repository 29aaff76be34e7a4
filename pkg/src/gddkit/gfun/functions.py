"""Vector-valued functions of a matrix that bound |a_ii| from the off-diagonal part.

Every family here maps A to a nonnegative vector g(A) with the property that
|a_ii| > g_i(A) for all i forces A to be an H-matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gddkit.matcore import COLUMN, ROW, as_matrix, as_scaling, deleted_sums, offdiag_moduli, weighted_deleted_sums
from gddkit.structure import tilde_sums

PLAIN_FAMILIES = ("r", "c", "r_tilde", "c_tilde")
SCALED_FAMILIES = ("r_weighted", "c_weighted", "r_tilde_weighted", "c_tilde_weighted")
NORM_FAMILIES = ("g1", "g2", "g3", "g4")
FAMILIES = PLAIN_FAMILIES + SCALED_FAMILIES + NORM_FAMILIES


def conjugate_exponent(p: float) -> float:
    return p / (p - 1.0)


@dataclass(frozen=True)
class GFunctionId:
    """A G-function family plus its parameters, validated on construction.

    ``scaling`` belongs to the weighted families, ``alpha`` to g1 and g4,
    ``alpha_bar`` to g2 and g3, and ``p`` to g1, g2 and g3. The g4
    constraint involves A itself and is checked when the function is evaluated.
    """

    family: str
    scaling: tuple[float, ...] | None = None
    alpha: float | None = None
    alpha_bar: tuple[float, ...] | None = None
    p: float | None = None

    def __post_init__(self):
        f = self.family
        if f not in FAMILIES:
            raise ValueError(f"unknown G-function family {f!r}; expected one of {', '.join(FAMILIES)}")
        if self.scaling is not None:
            object.__setattr__(self, "scaling", tuple(float(t) for t in as_scaling(self.scaling)))
        if self.alpha_bar is not None:
            object.__setattr__(self, "alpha_bar", tuple(float(t) for t in np.ravel(self.alpha_bar)))
        if self.alpha is not None:
            object.__setattr__(self, "alpha", float(self.alpha))
        if self.p is not None:
            object.__setattr__(self, "p", float(self.p))

        if f in SCALED_FAMILIES and self.scaling is None:
            raise ValueError(f"{f} requires a positive scaling vector")
        if f in ("g1", "g2", "g3"):
            if self.p is None or not (1.0 < self.p < math.inf):
                raise ValueError(f"{f} requires p with 1 < p < inf")
        if f == "g1":
            if self.alpha is None or not (0.0 < self.alpha < 1.0):
                raise ValueError("g1 requires alpha strictly between 0 and 1")
        if f in ("g2", "g3"):
            ab = self.alpha_bar
            if ab is None or len(ab) == 0 or not all(math.isfinite(t) and t > 0 for t in ab):
                raise ValueError(f"{f} requires a vector alpha_bar of positive finite entries")
            if f == "g2":
                total = math.fsum(1.0 / (1.0 + t) for t in ab)
                if total > 1.0:
                    raise ValueError(f"g2 constraint violated: sum 1/(1+alpha_k) = {total!r} > 1")
            else:
                q = conjugate_exponent(self.p)
                total = math.fsum(t ** q for t in ab)
                if total > 1.0:
                    raise ValueError(f"g3 constraint violated: sum alpha_k^q = {total!r} > 1")
        if f == "g4":
            if self.alpha is None or not (0.0 < self.alpha < math.inf):
                raise ValueError("g4 requires a positive finite alpha")

    @property
    def label(self) -> str:
        parts = []
        if self.alpha is not None:
            parts.append(f"alpha={self.alpha!r}")
        if self.p is not None:
            parts.append(f"p={self.p!r}")
        if self.alpha_bar is not None:
            parts.append("alpha_bar=" + ",".join(repr(t) for t in self.alpha_bar))
        if self.scaling is not None:
            parts.append("scaling=" + ",".join(repr(t) for t in self.scaling))
        return self.family + (f"({'; '.join(parts)})" if parts else "")

    def to_dict(self) -> dict:
        out: dict = {"family": self.family}
        for key in ("scaling", "alpha", "alpha_bar", "p"):
            val = getattr(self, key)
            if val is not None:
                out[key] = list(val) if isinstance(val, tuple) else val
        return out


def norm_deleted_sums(a, s: float, axis: str = ROW) -> np.ndarray:
    """s-norm deleted sums (sum_{j != k} |a_kj|^s)^{1/s}, or over column k for axis='column'."""
    if not s > 0:
        raise ValueError("s must be positive")
    m = offdiag_moduli(a)
    if axis == COLUMN:
        m = m.T
    top = m.max(axis=1)
    safe = np.where(top > 0, top, 1.0)
    return top * np.power(np.power(m / safe[:, None], s).sum(axis=1), 1.0 / s)


def offdiag_row_max(a) -> np.ndarray:
    return offdiag_moduli(a).max(axis=1)


def g4_load(a) -> float:
    """sum_i r_i / max_{j != i} |a_ij| over rows with an off-diagonal entry."""
    r = deleted_sums(a)
    top = offdiag_row_max(a)
    nz = top > 0
    return math.fsum((r[nz] / top[nz]).tolist())


def g4_min_alpha(a) -> float:
    """Smallest alpha > 0 (up to one ulp) with g4_load(A) <= alpha(1 + alpha)."""
    load = g4_load(a)
    if load == 0:
        return 1.0
    alpha = 2.0 * load / (1.0 + math.sqrt(1.0 + 4.0 * load))
    while alpha * (1.0 + alpha) < load:
        alpha = math.nextafter(alpha, math.inf)
    return alpha


def g2_uniform(n: int, p: float) -> GFunctionId:
    """g2 with every alpha_k = n - 1, the tightest uniform choice."""
    t = float(max(n - 1, 1))
    while math.fsum([1.0 / (1.0 + t)] * n) > 1.0:
        t = math.nextafter(t, math.inf)
    return GFunctionId("g2", alpha_bar=(t,) * n, p=p)


def g3_uniform(n: int, p: float) -> GFunctionId:
    """g3 with every alpha_k = n^{-1/q}, the tightest uniform choice."""
    q = conjugate_exponent(p)
    t = float(n) ** (-1.0 / q)
    while math.fsum([t ** q] * n) > 1.0:
        t = math.nextafter(t, 0.0)
    return GFunctionId("g3", alpha_bar=(t,) * n, p=p)


def eval_gfunction(gid: GFunctionId, a) -> np.ndarray:
    m = as_matrix(a)
    n = m.shape[0]
    f = gid.family
    if f == "r":
        return deleted_sums(m, ROW)
    if f == "c":
        return deleted_sums(m, COLUMN)
    if f == "r_tilde":
        return tilde_sums(m, ROW)
    if f == "c_tilde":
        return tilde_sums(m, COLUMN)
    if f in SCALED_FAMILIES:
        x = as_scaling(gid.scaling, n)
        axis = ROW if f.startswith("r") else COLUMN
        if "tilde" in f:
            return tilde_sums(m, axis, x)
        return weighted_deleted_sums(m, x, axis)
    if f == "g1":
        alpha, p = gid.alpha, gid.p
        q = conjugate_exponent(p)
        rows = norm_deleted_sums(m, alpha * p, ROW)
        cols = norm_deleted_sums(m, (1.0 - alpha) * q, COLUMN)
        return np.power(rows, alpha) * np.power(cols, 1.0 - alpha)
    if f in ("g2", "g3"):
        ab = np.asarray(gid.alpha_bar)
        if ab.shape[0] != n:
            raise ValueError(f"{f} alpha_bar has length {ab.shape[0]}, expected {n}")
        q = conjugate_exponent(gid.p)
        rows = norm_deleted_sums(m, gid.p, ROW)
        return np.power(ab, 1.0 / q) * rows if f == "g2" else rows / ab
    # g4
    load = g4_load(m)
    if load > gid.alpha * (1.0 + gid.alpha):
        raise ValueError(
            f"g4 constraint violated: sum r_i/max_j|a_ij| = {load!r} > alpha(1+alpha) = "
            f"{gid.alpha * (1.0 + gid.alpha)!r}")
    return gid.alpha * offdiag_row_max(m)

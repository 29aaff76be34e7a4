"""The thirteen two-index functions F(x, y) compared against F(|diag A|, |diag A|).

Kinds 1..7 take one weight ``alpha``; kinds 8..13 take ``alpha`` and
``beta``. Powers follow 0^0 = 1 and 0^t = 0 for t > 0, which is what
``numpy.power`` does on nonnegative floats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gddkit.matcore import as_matrix, diag_moduli

SINGLE_WEIGHT_KINDS = range(1, 8)
DOUBLE_WEIGHT_KINDS = range(8, 14)

pw = np.power

# Sides that agree to this relative precision are treated as tied, so a
# condition that is an equality in exact arithmetic never fires on rounding.
ROUNDING_GUARD = 1e-12


@dataclass(frozen=True)
class PairFunctionSpec:
    kind: int
    alpha: float
    beta: float = 1.0

    def __post_init__(self):
        if self.kind not in range(1, 14):
            raise ValueError(f"pair-function kind must be in 1..13, got {self.kind}")
        for name in ("alpha", "beta"):
            t = float(getattr(self, name))
            if not 0.0 <= t <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {t}")
            object.__setattr__(self, name, t)


@dataclass(frozen=True)
class PairValueGrid:
    """Values on ordered pairs (i, j), i != j, stored as an n x n array.

    The diagonal of ``values`` carries no meaning and is kept at zero.
    """

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def mask(self) -> np.ndarray:
        return ~np.eye(self.n, dtype=bool)

    def offdiagonal(self) -> np.ndarray:
        return self.values[self.mask]

    def as_dict(self) -> dict[tuple[int, int], float]:
        """Entries keyed by 1-based (i, j)."""
        n = self.n
        return {(i + 1, j + 1): float(self.values[i, j]) for i in range(n) for j in range(n) if i != j}


def _weighted_sum(w: float, u, v):
    return w * u + (1.0 - w) * v


def pair_values(kind: int, alpha: float, beta: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Raw n x n evaluation, row index i and column index j."""
    a, b = alpha, beta
    xi, xj = x[:, None], x[None, :]
    yi, yj = y[:, None], y[None, :]
    if kind == 1:
        return pw(xi, a) * pw(yj, 1 - a)
    if kind == 2:
        return pw(xi * xj, a) * pw(yi * yj, 1 - a)
    if kind == 3:
        return pw(xi * yj, a) * pw(xj * yi, 1 - a)
    if kind == 4:
        return _weighted_sum(a, xi * xj, yi * yj)
    if kind == 5:
        return _weighted_sum(a, xi * yj, xj * yi)
    if kind == 6:
        return _weighted_sum(a, xi, yi) * _weighted_sum(a, xj, yj)
    if kind == 7:
        return _weighted_sum(a, xi, yi) * _weighted_sum(a, yj, xj)
    if kind in (8, 9):
        left = pw(pw(xi, b) * pw(yi, 1 - b), a)
        if kind == 8:
            return left * pw(pw(xj, b) * pw(yj, 1 - b), 1 - a)
        return left * pw(pw(yj, b) * pw(xj, 1 - b), 1 - a)
    if kind == 10:
        return _weighted_sum(b, pw(xi, a) * pw(xj, 1 - a), pw(yi, a) * pw(yj, 1 - a))
    if kind == 11:
        return _weighted_sum(b, pw(xi, a) * pw(yj, 1 - a), pw(yi, a) * pw(xj, 1 - a))
    if kind == 12:
        return pw(_weighted_sum(b, xi, yi), a) * pw(_weighted_sum(b, xj, yj), 1 - a)
    if kind == 13:
        return pw(_weighted_sum(b, xi, yi), a) * pw(_weighted_sum(b, yj, xj), 1 - a)
    raise ValueError(f"pair-function kind must be in 1..13, got {kind}")


def _as_vector(v, name: str) -> np.ndarray:
    out = np.asarray(v, dtype=float).reshape(-1)
    if np.any(out < 0) or not np.all(np.isfinite(out)):
        raise ValueError(f"{name} must be finite and nonnegative")
    return out


def eval_pair_function(spec: PairFunctionSpec, x, y) -> PairValueGrid:
    xv, yv = _as_vector(x, "x"), _as_vector(y, "y")
    if xv.shape != yv.shape:
        raise ValueError("x and y must have the same length")
    vals = pair_values(spec.kind, spec.alpha, spec.beta, xv, yv)
    np.fill_diagonal(vals, 0.0)
    return PairValueGrid(vals)


def pair_margin(spec: PairFunctionSpec, a, g, h) -> float:
    """min over i != j of F(d, d)_{ij} - F(g, h)_{ij}, with d = |diag A|; +inf when n = 1."""
    d = diag_moduli(as_matrix(a))
    lhs = eval_pair_function(spec, d, d)
    rhs = eval_pair_function(spec, g, h)
    if lhs.n < 2:
        return float("inf")
    return float(np.min(lhs.offdiagonal() - rhs.offdiagonal()))


def check_pair_condition(spec: PairFunctionSpec, a, g, h, tau: float = 0.0) -> bool:
    """F(d, d) > F(g, h) + tau on every ordered pair; vacuously true for n = 1.

    Sides equal to within ROUNDING_GUARD (relative) count as tied.
    """
    d = diag_moduli(as_matrix(a))
    lhs = eval_pair_function(spec, d, d).offdiagonal()
    rhs = eval_pair_function(spec, g, h).offdiagonal()
    guard = ROUNDING_GUARD * np.maximum(lhs, rhs)
    return bool(np.all(lhs - rhs > tau + guard))

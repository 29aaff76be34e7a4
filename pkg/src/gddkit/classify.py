"""SDD, Z-, M- and H-matrix (GDD) decisions with scaling certificates.

H-matrix status is decided from the Jacobi matrix J = D^{-1}E of the
comparison matrix D - E, block by block over the Frobenius normal form.
Each irreducible block is handled by power iteration on J_block + I, which
is primitive, so the iterate stays positive and the Collatz-Wielandt ratios
bracket the block's spectral radius from both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gddkit.matcore import as_matrix, deleted_sums, diag_moduli, offdiag_moduli, scale
from gddkit.structure import frobenius_normal_form

# Half-width of the inconclusive band around the threshold, relative.
STRICTNESS_BAND = 1e-10
DEFAULT_TOL = 1e-12

GDD = "gdd"
NOT_GDD = "not_gdd"
INCONCLUSIVE = "inconclusive"


class ConvergenceError(RuntimeError):
    """Power iteration exhausted its budget before the bracket closed."""

    def __init__(self, message: str, lower: float, upper: float):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


def default_max_iter(n: int) -> int:
    return int(10 * n * math.log(n + 1)) + 1000


@dataclass(frozen=True)
class PerronBracket:
    """Collatz-Wielandt bounds lower <= rho <= upper and the iterate that produced them."""

    lower: float
    upper: float
    vector: np.ndarray
    converged: bool
    iterations: int

    @property
    def estimate(self) -> float:
        return 0.5 * (self.lower + self.upper)


def perron_bracket(b: np.ndarray, tol: float = DEFAULT_TOL, max_iter: int | None = None,
                   start: np.ndarray | None = None) -> PerronBracket:
    """Power iteration on B + I for an irreducible nonnegative block B.

    The bounds refer to B itself. A 1x1 block is exact immediately.
    """
    n = b.shape[0]
    if n == 1:
        rho = float(b[0, 0])
        return PerronBracket(rho, rho, np.ones(1), True, 0)
    if max_iter is None:
        max_iter = default_max_iter(n)
    v = np.ones(n) if start is None else np.array(start, dtype=float)
    v /= v.max()
    lower, upper = 0.0, math.inf
    for it in range(1, max_iter + 1):
        with np.errstate(over="ignore", under="ignore"):
            w = b @ v
        pos = v > 0
        # Entries can underflow to zero; the lower bound only needs v >= 0, the upper needs v > 0.
        with np.errstate(over="ignore"):
            ratios = w[pos] / v[pos]
        lower = float(ratios.min())
        upper = float(ratios.max()) if pos.all() else math.inf
        if math.isfinite(upper) and upper - lower <= tol * (1.0 + upper):
            return PerronBracket(lower, upper, v, True, it)
        w += v
        v = w / w.max()
    return PerronBracket(lower, upper, v, False, max_iter)


def is_sdd(a, tau: float = 0.0) -> bool:
    """Strict row diagonal dominance with margin: |a_ii| > r_i(A) + tau for every i."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    m = as_matrix(a)
    return bool(np.all(diag_moduli(m) > deleted_sums(m) + tau))


def is_z_matrix(a) -> bool:
    """Real matrix with nonpositive off-diagonal entries."""
    m = as_matrix(a)
    if np.any(m.imag != 0):
        return False
    off = m.real.copy()
    np.fill_diagonal(off, 0.0)
    return bool(np.all(off <= 0))


def _as_nonneg(b) -> np.ndarray:
    m = np.array(b, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError("expected a nonempty square matrix")
    if np.any(m.imag != 0) or not np.all(np.isfinite(m)) or np.any(m.real < 0):
        raise ValueError("expected a finite, real, entrywise nonnegative matrix")
    return m.real.copy()


def _blockwise_brackets(b: np.ndarray, tol: float, max_iter: int | None) -> list[tuple[np.ndarray, PerronBracket]]:
    if max_iter is None:
        max_iter = default_max_iter(b.shape[0])
    form = frobenius_normal_form(b)
    return [(idx, perron_bracket(b[np.ix_(idx, idx)], tol, max_iter)) for idx in form.blocks()]


def spectral_radius_nonneg(b, tol: float = DEFAULT_TOL, max_iter: int | None = None) -> float:
    """Spectral radius of a nonnegative matrix, the maximum over its Frobenius blocks."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = _as_nonneg(b)
    rho = 0.0
    for idx, br in _blockwise_brackets(m, tol, max_iter):
        if not br.converged:
            raise ConvergenceError(
                f"power iteration on block {idx.tolist()} did not converge in "
                f"{br.iterations} iterations (bracket [{br.lower}, {br.upper}])",
                br.lower, br.upper)
        rho = max(rho, br.estimate)
    return rho


def _three_way(lower: float, upper: float, converged: bool, threshold: float) -> bool | None:
    """Decide rho < threshold from a bracket; None means inconclusive."""
    if upper <= threshold * (1 - STRICTNESS_BAND):
        return True
    if lower >= threshold:
        return False
    if converged:
        mid = 0.5 * (lower + upper)
        if mid <= threshold * (1 - STRICTNESS_BAND):
            return True
        if mid >= threshold * (1 + STRICTNESS_BAND):
            return False
    return None


def is_m_matrix(a, tol: float = DEFAULT_TOL, max_iter: int | None = None) -> bool | None:
    """Z-matrix A = sI - B with s the largest diagonal entry and rho(B) < s.

    Returns None when rho(B) sits inside the strictness band around s or the
    iteration could not separate it from s.
    """
    m = as_matrix(a)
    if not is_z_matrix(m):
        return False
    real = m.real
    s = float(np.max(np.diagonal(real)))
    if s <= 0:
        return False
    b = s * np.eye(m.shape[0]) - real
    brackets = _blockwise_brackets(b, tol, max_iter)
    lower = max(br.lower for _, br in brackets)
    upper = max(br.upper for _, br in brackets)
    converged = all(br.converged for _, br in brackets)
    return _three_way(lower, upper, converged, s)


@dataclass(frozen=True)
class ClassificationReport:
    is_sdd: bool
    is_z: bool
    is_m: bool | None
    is_h_gdd: bool
    verdict: str
    certificate: np.ndarray | None = None
    witness: str | None = None
    jacobi_radius: float | None = None

    def to_dict(self) -> dict:
        return {
            "is_sdd": self.is_sdd,
            "is_z": self.is_z,
            "is_m": self.is_m,
            "is_h_gdd": self.is_h_gdd,
            "verdict": self.verdict,
            "certificate": None if self.certificate is None else [float(t) for t in self.certificate],
            "witness": self.witness,
            "jacobi_radius": self.jacobi_radius,
        }


def _assemble_certificate(diag: np.ndarray, off: np.ndarray, blocks: list[np.ndarray],
                          vectors: list[np.ndarray]) -> np.ndarray | None:
    """Glue per-block vectors so every row of X^{-1}AX is strictly dominant.

    Blocks are processed from last to first. Rows of an earlier block see
    the already fixed later blocks through coupling terms, so the earlier
    block's vector is inflated by the smallest power of two that keeps those
    rows dominant.
    """
    n = diag.shape[0]
    x = np.zeros(n)
    fixed = np.zeros(n, dtype=bool)
    for idx, v in zip(reversed(blocks), reversed(vectors)):
        inner = off[np.ix_(idx, idx)]
        margin = diag[idx] * v - inner @ v
        if np.any(margin <= 0):
            return None
        coupling = off[np.ix_(idx, np.flatnonzero(fixed))] @ x[fixed]
        need = float(np.max(coupling / margin)) if coupling.size else 0.0
        exponent = 0 if need <= 0 else max(0, math.ceil(math.log2(need * (1 + 1e-12))))
        for _ in range(64):
            factor = math.ldexp(1.0, exponent)
            if np.all(factor * margin > coupling):
                break
            exponent += 1
        else:
            return None
        x[idx] = factor * v
        fixed[idx] = True
    return x


def _certificate_verifies(a: np.ndarray, x: np.ndarray | None) -> bool:
    return (x is not None and bool(np.all(np.isfinite(x))) and bool(np.all(x > 0))
            and is_sdd(scale(a, x)))


def _linear_certificate(a: np.ndarray) -> np.ndarray | None:
    """Fallback: solve M(A) x = |diag(A)|; for an H-matrix the solution is positive."""
    from gddkit.matcore import comparison_matrix

    try:
        x = np.linalg.solve(comparison_matrix(a), diag_moduli(a))
    except np.linalg.LinAlgError:
        return None
    return x if _certificate_verifies(a, x) else None


def classify_h(a, tol: float = DEFAULT_TOL, max_iter: int | None = None) -> ClassificationReport:
    """Decide whether A is an H-matrix (equivalently GDD) and back a yes with a scaling."""
    m = as_matrix(a)
    n = m.shape[0]
    sdd = is_sdd(m)
    z = is_z_matrix(m)
    is_m = is_m_matrix(m, tol, max_iter) if z else None
    if max_iter is None:
        max_iter = default_max_iter(n)

    def report(verdict, certificate=None, witness=None, radius=None):
        return ClassificationReport(sdd, z, is_m, verdict == GDD, verdict, certificate, witness, radius)

    zero_rows = np.flatnonzero(~np.any(np.abs(m) > 0, axis=1))
    if zero_rows.size:
        return report(NOT_GDD, witness=f"row {int(zero_rows[0])} is identically zero")

    diag = diag_moduli(m)
    off = offdiag_moduli(m)
    form = frobenius_normal_form(m)
    blocks = form.blocks()
    vectors: list[np.ndarray] = []
    radius = 0.0
    verdict = GDD
    witness = None
    for k, idx in enumerate(blocks):
        where = f"block {k} (indices {idx.tolist()})"
        if np.any(diag[idx] == 0):
            i = int(idx[np.argmax(diag[idx] == 0)])
            return report(NOT_GDD, witness=f"{where}: zero diagonal entry at index {i}")
        jac = off[np.ix_(idx, idx)] / diag[idx][:, None]
        br = perron_bracket(jac, tol, max_iter)
        radius = max(radius, br.estimate)
        decision = _three_way(br.lower, br.upper, br.converged, 1.0)
        if decision is False:
            return report(NOT_GDD, witness=f"{where}: Jacobi spectral radius {br.estimate!r} >= 1",
                          radius=radius)
        if decision is None:
            verdict = INCONCLUSIVE
            witness = witness or (
                f"{where}: Jacobi spectral radius bracket [{br.lower!r}, {br.upper!r}] "
                f"undecided against 1" + ("" if br.converged else " (iteration budget exhausted)"))
        vectors.append(br.vector)

    if verdict == INCONCLUSIVE:
        return report(INCONCLUSIVE, witness=witness, radius=radius)

    x = _assemble_certificate(diag, off, blocks, vectors)
    if not _certificate_verifies(m, x):
        x = _linear_certificate(m)
    if x is None:
        return report(INCONCLUSIVE, witness="Jacobi radius below 1 but no scaling verified",
                      radius=radius)
    return report(GDD, certificate=x, radius=radius)

"""Dense eigenvalues for small matrices and the inclusion verifier.

The solver reduces A to upper Hessenberg form with Householder reflections
and then runs single-shift complex QR steps built from Givens rotations,
deflating whenever a subdiagonal entry becomes negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gddkit.matcore import as_matrix
from gddkit.regions import DISK, DEFAULT_MEMBERSHIP_TOL, RegionSet, witness_many

DEFAULT_CAP = 64
DEFLATION_TOL = 1e-14
ITERATIONS_PER_EIGENVALUE = 60
EXCEPTIONAL_SHIFT_AT = (10, 20)


class EigenConvergenceError(RuntimeError):
    """QR iteration ran out of budget; ``found`` holds the eigenvalues deflated so far."""

    def __init__(self, message: str, found: list[complex], window: tuple[int, int]):
        super().__init__(message)
        self.found = found
        self.window = window


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    residual: float


def hessenberg(a) -> np.ndarray:
    """Unitarily similar upper Hessenberg matrix (Householder reflections)."""
    h = as_matrix(a)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        tail = np.linalg.norm(x[1:])
        if tail == 0:
            continue
        norm = math.hypot(abs(x[0]), tail)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * norm
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0
    return h


def _givens(a: complex, b: complex) -> tuple[float, complex]:
    """(c, s) with [[c, s], [-conj(s), c]] @ [a, b] = [*, 0]."""
    if b == 0:
        return 1.0, 0j
    if a == 0:
        return 0.0, complex(np.conj(b) / abs(b))
    aa = abs(a)
    r = math.hypot(aa, abs(b))
    return aa / r, complex((a / aa) * np.conj(b) / r)


def _wilkinson_shift(h: np.ndarray, hi: int) -> complex:
    """Eigenvalue of the trailing 2 x 2 block closer to its last diagonal entry."""
    a, b = h[hi - 1, hi - 1], h[hi - 1, hi]
    c, d = h[hi, hi - 1], h[hi, hi]
    half_tr = (a + d) / 2
    disc = np.sqrt(((a - d) / 2) ** 2 + b * c)
    l1, l2 = half_tr + disc, half_tr - disc
    return complex(l1 if abs(l1 - d) <= abs(l2 - d) else l2)


def _qr_step(h: np.ndarray, lo: int, hi: int, mu: complex) -> None:
    """One explicitly shifted QR step on the window h[lo:hi+1, lo:hi+1], in place."""
    rot = []
    for k in range(lo, hi + 1):
        h[k, k] -= mu
    for k in range(lo, hi):
        c, s = _givens(h[k, k], h[k + 1, k])
        rows = h[k:k + 2, k:hi + 1]
        top = c * rows[0] + s * rows[1]
        bottom = -np.conj(s) * rows[0] + c * rows[1]
        rows[0], rows[1] = top, bottom
        h[k + 1, k] = 0
        rot.append((c, s))
    for k, (c, s) in zip(range(lo, hi), rot):
        stop = min(k + 2, hi) + 1
        cols = h[lo:stop, k:k + 2]
        left = c * cols[:, 0] + np.conj(s) * cols[:, 1]
        right = -s * cols[:, 0] + c * cols[:, 1]
        cols[:, 0], cols[:, 1] = left, right
    for k in range(lo, hi + 1):
        h[k, k] += mu


def _negligible(h: np.ndarray, k: int, lo: int, hi: int) -> bool:
    scale = abs(h[k - 1, k - 1]) + abs(h[k, k])
    if scale == 0:
        scale = float(np.linalg.norm(h[lo:hi + 1, lo:hi + 1]))
    return abs(h[k, k - 1]) <= DEFLATION_TOL * scale


def hessenberg_qr_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of an upper Hessenberg matrix, last index first."""
    h = h.copy()
    n = h.shape[0]
    found: list[complex] = []
    hi = n - 1
    iters = 0
    while hi >= 0:
        if hi == 0:
            found.append(complex(h[0, 0]))
            break
        lo = hi
        while lo > 0 and not _negligible(h, lo, 0, hi):
            lo -= 1
        if lo > 0:
            h[lo, lo - 1] = 0
        if lo == hi:
            found.append(complex(h[hi, hi]))
            hi -= 1
            iters = 0
            continue
        iters += 1
        if iters > ITERATIONS_PER_EIGENVALUE:
            raise EigenConvergenceError(
                f"QR iteration did not converge: window [{lo}, {hi}] still coupled after "
                f"{ITERATIONS_PER_EIGENVALUE} iterations; {len(found)} of {n} eigenvalues deflated",
                found, (lo, hi))
        if iters in EXCEPTIONAL_SHIFT_AT:
            mu = complex(h[hi, hi] + 1.5 * abs(h[hi, hi - 1]) * (1 + 0.5j))
        else:
            mu = _wilkinson_shift(h, hi)
        _qr_step(h, lo, hi, mu)
    return np.array(found, dtype=complex)


def backward_residual(a: np.ndarray, lam: complex) -> float:
    """sigma_min(A - lam I) / ||A||_F, zero for the zero matrix."""
    norm = float(np.linalg.norm(a))
    if norm == 0:
        return 0.0
    smin = np.linalg.svd(a - lam * np.eye(a.shape[0]), compute_uv=False)[-1]
    return float(smin) / norm


def eigenvalues(a, cap: int = DEFAULT_CAP) -> Spectrum:
    """All eigenvalues (with multiplicity), sorted by real then imaginary part."""
    m = as_matrix(a)
    n = m.shape[0]
    if n > cap:
        raise ValueError(f"matrix order {n} exceeds the eigensolver cap {cap}")
    lam = hessenberg_qr_eigenvalues(hessenberg(m))
    lam = lam[np.lexsort((lam.imag, lam.real))]
    residual = max(backward_residual(m, t) for t in lam)
    return Spectrum(lam, residual)


def read_spectrum(source) -> np.ndarray:
    """Parse "re im" per line; blank lines and '#' comments are skipped."""
    text = Path(source).read_text() if isinstance(source, (str, Path)) and "\n" not in str(source) \
        and Path(source).exists() else str(source)
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 're im', got {line.strip()!r}")
        try:
            re, im = float(parts[0]), float(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: not a pair of numbers: {line.strip()!r}") from None
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValueError(f"line {lineno}: non-finite value")
        values.append(complex(re, im))
    return np.array(values, dtype=complex)


@dataclass(frozen=True)
class InclusionRecord:
    eigenvalue: complex
    contained: bool
    region: int | None
    index: tuple[int, ...] | None
    margin: float

    def to_dict(self) -> dict:
        out = {
            "eigenvalue": {"re": self.eigenvalue.real, "im": self.eigenvalue.imag},
            "contained": self.contained,
            "margin": self.margin,
        }
        if self.index is not None:
            out["index"] = list(self.index)
        return out


@dataclass(frozen=True)
class InclusionReport:
    records: tuple[InclusionRecord, ...]

    @property
    def ok(self) -> bool:
        return all(r.contained for r in self.records)

    @property
    def violations(self) -> list[InclusionRecord]:
        return [r for r in self.records if not r.contained]


def verify_inclusion(a, s: RegionSet, tol: float = DEFAULT_MEMBERSHIP_TOL, spectrum=None) -> InclusionReport:
    """Check every eigenvalue against the region set.

    ``margin`` is the smallest (left side - rho) over the regions after the
    membership slack; it is <= 0 exactly when the eigenvalue is contained.
    """
    lam = eigenvalues(a).eigenvalues if spectrum is None else np.asarray(spectrum, dtype=complex).reshape(-1)
    hits, margins = witness_many(s, lam, tol)
    records = []
    for t, hit, margin in zip(lam.tolist(), hits.tolist(), margins.tolist()):
        if hit < 0:
            records.append(InclusionRecord(complex(t), False, None, None, margin))
            continue
        i, j = int(s.first[hit]), int(s.second[hit])
        index = (i,) if s.shape == DISK else (i, j)
        records.append(InclusionRecord(complex(t), True, hit, index, margin))
    return InclusionReport(tuple(records))

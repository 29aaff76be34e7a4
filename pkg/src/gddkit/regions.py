"""Eigenvalue inclusion regions built from two G-function vectors.

A region set is the union over i (disks) or over ordered pairs i != j
(Cassini and power-mean ovals) of one of the following shapes:

* disk        |z - a_ii| <= rho_i
* cassini     |z - a_ii| |z - a_jj| <= rho_ij
* powermean   |z - a_ii|^alpha |z - a_jj|^(1 - alpha) <= rho_ij

The generic table has 27 kinds over a free pair (g, h). Four concrete tables
of 31 kinds each fix (g, h) to scaled/blockwise row and column sums; every
one of those kinds is a generic kind evaluated at (R, R), (C, C) or (R, C).
"""

from __future__ import annotations

import html
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from gddkit.matcore import COLUMN, ROW, as_matrix, as_scaling, deleted_sums, weighted_deleted_sums
from gddkit.structure import tilde_sums

DISK = "disk"
CASSINI = "cassini"
POWERMEAN = "powermean"

GENERIC = "5.1"
TILDE_SCALED = "5.2"
SCALED = "5.3"
TILDE = "5.4"
PLAIN = "5.5"
DEFINITIONS = (GENERIC, TILDE_SCALED, SCALED, TILDE, PLAIN)

pw = np.power


def _ws(w, u, v):
    return w * u + (1.0 - w) * v


# Generic radii: (g_i, g_j, h_i, h_j, alpha, beta) -> rho. Kinds 1-3 ignore the j arguments.
GENERIC_RADII = {
    1: lambda gi, gj, hi, hj, a, b: gi,
    2: lambda gi, gj, hi, hj, a, b: pw(gi, a) * pw(hi, 1 - a),
    3: lambda gi, gj, hi, hj, a, b: _ws(a, gi, hi),
    4: lambda gi, gj, hi, hj, a, b: gi * gj,
    5: lambda gi, gj, hi, hj, a, b: gi * hj,
    6: lambda gi, gj, hi, hj, a, b: pw(gi * gj, a) * pw(hi * hj, 1 - a),
    7: lambda gi, gj, hi, hj, a, b: pw(gi * hj, a) * pw(gj * hi, 1 - a),
    8: lambda gi, gj, hi, hj, a, b: _ws(a, gi * gj, hi * hj),
    9: lambda gi, gj, hi, hj, a, b: _ws(a, gi * hj, gj * hi),
    10: lambda gi, gj, hi, hj, a, b: _ws(a, gi, hi) * _ws(a, gj, hj),
    11: lambda gi, gj, hi, hj, a, b: _ws(a, gi, hi) * _ws(a, hj, gj),
    12: lambda gi, gj, hi, hj, a, b: _ws(a, gi, hj) * _ws(a, gj, hi),
    13: lambda gi, gj, hi, hj, a, b: _ws(a, gi, gj) * _ws(a, hj, hi),
    14: lambda gi, gj, hi, hj, a, b: pw(gi, a) * pw(gj, 1 - a),
    15: lambda gi, gj, hi, hj, a, b: pw(gi, a) * pw(hj, 1 - a),
    16: lambda gi, gj, hi, hj, a, b: _ws(a, gi, gj),
    17: lambda gi, gj, hi, hj, a, b: _ws(a, gi, hj),
    18: lambda gi, gj, hi, hj, a, b: pw(pw(gi, b) * pw(hi, 1 - b), a) * pw(pw(gj, b) * pw(hj, 1 - b), 1 - a),
    19: lambda gi, gj, hi, hj, a, b: pw(pw(gi, b) * pw(hi, 1 - b), a) * pw(pw(hj, b) * pw(gj, 1 - b), 1 - a),
    20: lambda gi, gj, hi, hj, a, b: _ws(b, pw(gi, a) * pw(gj, 1 - a), pw(hi, a) * pw(hj, 1 - a)),
    21: lambda gi, gj, hi, hj, a, b: _ws(b, pw(gi, a) * pw(hj, 1 - a), pw(hi, a) * pw(gj, 1 - a)),
    22: lambda gi, gj, hi, hj, a, b: _ws(a, pw(gi, b) * pw(hi, 1 - b), pw(gj, b) * pw(hj, 1 - b)),
    23: lambda gi, gj, hi, hj, a, b: _ws(a, pw(gi, b) * pw(hi, 1 - b), pw(hj, b) * pw(gj, 1 - b)),
    24: lambda gi, gj, hi, hj, a, b: pw(_ws(b, gi, hi), a) * pw(_ws(b, gj, hj), 1 - a),
    25: lambda gi, gj, hi, hj, a, b: pw(_ws(b, gi, hi), a) * pw(_ws(b, hj, gj), 1 - a),
    26: lambda gi, gj, hi, hj, a, b: pw(_ws(a, gi, gj), b) * pw(_ws(a, hi, hj), 1 - b),
    27: lambda gi, gj, hi, hj, a, b: pw(_ws(a, gi, hj), b) * pw(_ws(a, hi, gj), 1 - b),
}


def generic_shape(k: int) -> str:
    return DISK if k <= 3 else CASSINI if k <= 13 else POWERMEAN


# Concrete kind -> (generic kind, which vector plays g, which plays h); "R" row-type, "C" column-type.
CONCRETE_KINDS: dict[int, tuple[int, str, str]] = {
    1: (1, "R", "R"), 2: (1, "C", "C"), 3: (2, "R", "C"), 4: (3, "R", "C"),
    5: (4, "R", "R"), 6: (4, "C", "C"), 7: (5, "R", "C"),
    **{8 + t: (6 + t, "R", "C") for t in range(8)},
    16: (14, "R", "R"), 17: (14, "C", "C"), 18: (15, "R", "C"),
    19: (16, "R", "R"), 20: (16, "C", "C"), 21: (17, "R", "C"),
    **{22 + t: (18 + t, "R", "C") for t in range(10)},
}


def kind_count(definition: str) -> int:
    _check_definition(definition)
    return 27 if definition == GENERIC else 31


def region_shape(definition: str, k: int) -> str:
    _check_kind(definition, k)
    return generic_shape(k if definition == GENERIC else CONCRETE_KINDS[k][0])


def _check_definition(definition: str) -> None:
    if definition not in DEFINITIONS:
        raise ValueError(f"definition must be one of {', '.join(DEFINITIONS)}, got {definition!r}")


def _check_kind(definition: str, k: int) -> None:
    top = kind_count(definition)
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= top):
        raise ValueError(f"k must be an integer in 1..{top} for definition {definition}, got {k!r}")


def definition_vectors(a, definition: str, x=None, y=None) -> tuple[np.ndarray, np.ndarray]:
    """(R, C) for the concrete definitions; scalings default to ones."""
    _check_definition(definition)
    if definition == GENERIC:
        raise ValueError("the generic definition takes caller-supplied g and h")
    m = as_matrix(a)
    n = m.shape[0]
    xs = np.ones(n) if x is None else as_scaling(x, n)
    ys = np.ones(n) if y is None else as_scaling(y, n)
    if definition == TILDE_SCALED:
        return tilde_sums(m, ROW, xs), tilde_sums(m, COLUMN, ys)
    if definition == SCALED:
        return weighted_deleted_sums(m, xs, ROW), weighted_deleted_sums(m, ys, COLUMN)
    if definition == TILDE:
        return tilde_sums(m, ROW), tilde_sums(m, COLUMN)
    return deleted_sums(m, ROW), deleted_sums(m, COLUMN)


@dataclass(frozen=True)
class Region:
    kind: str
    centers: tuple[complex, ...]
    bound: float
    alpha: float | None = None
    index: tuple[int, ...] = ()


@dataclass(frozen=True)
class RegionSet:
    """One union of regions of a single shape, stored as parallel arrays.

    ``first``/``second`` index the diagonal of A (``second`` equals ``first``
    for disks). ``bounds`` holds the radii rho. ``default_bbox`` is the union
    of the classical row disks of A, inflated by 10%.
    """

    shape: str
    diagonal: np.ndarray
    first: np.ndarray
    second: np.ndarray
    bounds: np.ndarray
    alpha: float | None
    provenance: dict = field(default_factory=dict)
    default_bbox: tuple[complex, complex] | None = None

    def __len__(self) -> int:
        return int(self.bounds.shape[0])

    @property
    def regions(self) -> list[Region]:
        out = []
        for i, j, rho in zip(self.first.tolist(), self.second.tolist(), self.bounds.tolist()):
            if self.shape == DISK:
                out.append(Region(DISK, (complex(self.diagonal[i]),), rho, None, (i,)))
            else:
                out.append(Region(self.shape, (complex(self.diagonal[i]), complex(self.diagonal[j])), rho,
                                  self.alpha if self.shape == POWERMEAN else None, (i, j)))
        return out

    def reach(self) -> np.ndarray:
        """Per region, a radius about each center that covers the region.

        A Cassini oval lies within sqrt(rho) of one of its centers, and a
        power-mean oval within rho, since min(u, v) <= u^a v^(1-a).
        """
        return np.sqrt(self.bounds) if self.shape == CASSINI else self.bounds.copy()

    def extent(self) -> tuple[complex, complex] | None:
        if len(self) == 0:
            return None
        reach = self.reach()
        c = np.concatenate([self.diagonal[self.first], self.diagonal[self.second]])
        rr = np.concatenate([reach, reach])
        lo = complex(float(np.min(c.real - rr)), float(np.min(c.imag - rr)))
        hi = complex(float(np.max(c.real + rr)), float(np.max(c.imag + rr)))
        return lo, hi


def _pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    off = ii != jj
    return ii[off], jj[off]


def inflate_bbox(lo: complex, hi: complex, factor: float = 0.1) -> tuple[complex, complex]:
    """Grow a box by ``factor`` of its size on each axis; a flat box becomes a square."""
    w, h = hi.real - lo.real, hi.imag - lo.imag
    mid = (lo + hi) / 2
    side = max(w, h)
    if w <= 0 or h <= 0:
        side = side if side > 0 else max(1.0, abs(mid))
        w = h = side
    hw, hh = w * (1 + factor) / 2, h * (1 + factor) / 2
    return complex(mid.real - hw, mid.imag - hh), complex(mid.real + hw, mid.imag + hh)


def gershgorin_bbox(a) -> tuple[complex, complex]:
    m = as_matrix(a)
    c = np.diagonal(m)
    r = deleted_sums(m)
    lo = complex(float(np.min(c.real - r)), float(np.min(c.imag - r)))
    hi = complex(float(np.max(c.real + r)), float(np.max(c.imag + r)))
    return inflate_bbox(lo, hi)


def _radii(definition: str, k: int, g: np.ndarray, h: np.ndarray, alpha: float, beta: float,
           first: np.ndarray, second: np.ndarray) -> np.ndarray:
    if definition == GENERIC:
        gk, gv, hv = k, g, h
    else:
        gk, gsel, hsel = CONCRETE_KINDS[k]
        gv = g if gsel == "R" else h
        hv = g if hsel == "R" else h
    return np.asarray(GENERIC_RADII[gk](gv[first], gv[second], hv[first], hv[second], alpha, beta), dtype=float)


def build_region_set(a, definition: str, k: int, g, h, alpha: float = 1.0, beta: float = 1.0,
                     provenance: dict | None = None) -> RegionSet:
    """Regions of kind ``k`` of ``definition`` from the vectors g and h.

    For the concrete definitions pass g = R (row type) and h = C (column
    type), e.g. from :func:`definition_vectors`.
    """
    _check_kind(definition, k)
    m = as_matrix(a)
    n = m.shape[0]
    gv = np.asarray(g, dtype=float).reshape(-1)
    hv = np.asarray(h, dtype=float).reshape(-1)
    if gv.shape[0] != n or hv.shape[0] != n:
        raise ValueError(f"g and h must have length {n}, got {gv.shape[0]} and {hv.shape[0]}")
    if np.any(gv < 0) or np.any(hv < 0) or not (np.all(np.isfinite(gv)) and np.all(np.isfinite(hv))):
        raise ValueError("g and h must be finite and nonnegative")
    for name, t in (("alpha", alpha), ("beta", beta)):
        if not 0.0 <= float(t) <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {t}")
    alpha, beta = float(alpha), float(beta)
    shape = region_shape(definition, k)
    if shape == DISK:
        first = second = np.arange(n)
    else:
        first, second = _pair_indices(n)
    bounds = _radii(definition, k, gv, hv, alpha, beta, first, second)
    prov = {"definition": definition, "k": int(k), "alpha": alpha, "beta": beta}
    if provenance:
        prov.update(provenance)
    return RegionSet(shape, np.diagonal(m).copy(), first, second, bounds,
                     alpha if shape == POWERMEAN else None, prov, gershgorin_bbox(m))


def build_catalog_region_set(a, definition: str, k: int, alpha: float = 1.0, beta: float = 1.0,
                             x=None, y=None, provenance: dict | None = None) -> RegionSet:
    """Concrete-definition region set with its own row/column vectors."""
    g, h = definition_vectors(a, definition, x, y)
    return build_region_set(a, definition, k, g, h, alpha, beta, provenance)


# ------------------------------------------------------------------ membership


def _slack(tol: float, z: np.ndarray, centers: np.ndarray) -> np.ndarray:
    scale = 1.0 + np.abs(z) + (float(np.max(np.abs(centers))) if centers.size else 0.0)
    return tol * scale


def _excess(s: RegionSet, z: np.ndarray, tol: float) -> np.ndarray:
    """For each point (rows) and region (columns): value of the left side minus rho.

    Each distance to a center is first shortened by the slack
    tol * (1 + |z| + max|center|), clipped at zero, so a point within that
    distance of a region counts as inside.
    """
    z = np.asarray(z, dtype=complex).reshape(-1)
    dist = np.abs(z[:, None] - s.diagonal[None, :])
    if tol > 0:
        dist = np.maximum(dist - _slack(tol, z, s.diagonal)[:, None], 0.0)
    d1 = dist[:, s.first]
    if s.shape == DISK:
        lhs = d1
    elif s.shape == CASSINI:
        lhs = d1 * dist[:, s.second]
    else:
        lhs = pw(d1, s.alpha) * pw(dist[:, s.second], 1.0 - s.alpha)
    return lhs - s.bounds[None, :]


def _chunks(z: np.ndarray, width: int) -> Iterable[slice]:
    step = max(1, 2_000_000 // max(width, 1))
    for start in range(0, z.shape[0], step):
        yield slice(start, start + step)


def contains_many(s: RegionSet, z, tol: float = 0.0) -> np.ndarray:
    """Vectorized membership for an array of points."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    z = np.asarray(z, dtype=complex).reshape(-1)
    out = np.zeros(z.shape[0], dtype=bool)
    if len(s) == 0:
        return out
    for sl in _chunks(z, len(s) + s.diagonal.shape[0]):
        out[sl] = np.any(_excess(s, z[sl], tol) <= 0, axis=1)
    return out


DEFAULT_MEMBERSHIP_TOL = 1e-12


def contains(s: RegionSet, z: complex, tol: float = DEFAULT_MEMBERSHIP_TOL) -> bool:
    return bool(contains_many(s, [z], tol)[0])


def witness_many(s: RegionSet, z, tol: float = DEFAULT_MEMBERSHIP_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Per point: index of the first region containing it (-1 if none) and the smallest left-minus-rho."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    if len(s) == 0:
        return np.full(z.shape[0], -1), np.full(z.shape[0], math.inf)
    ex = _excess(s, z, tol)
    inside = ex <= 0
    first = np.where(inside.any(axis=1), inside.argmax(axis=1), -1)
    return first, ex.min(axis=1)


def witness(s: RegionSet, z: complex, tol: float = DEFAULT_MEMBERSHIP_TOL) -> tuple[int | None, float]:
    """(index of the first region containing z or None, smallest left-minus-rho over regions)."""
    hit, margin = witness_many(s, [z], tol)
    return (int(hit[0]) if hit[0] >= 0 else None), float(margin[0])


# ------------------------------------------------------------------ grids


@dataclass(frozen=True)
class GridMask:
    """Membership sampled at cell centers; ``bits[iy, ix]``, row 0 at the lowest imaginary part."""

    bbox: tuple[complex, complex]
    resolution: tuple[int, int]
    bits: np.ndarray

    @property
    def fill_fraction(self) -> float:
        return float(self.bits.mean())

    def to_csv(self) -> str:
        return "".join(",".join("1" if b else "0" for b in row) + "\n" for row in self.bits.tolist())

    def boundary(self) -> np.ndarray:
        """Cells inside the mask with an outside 4-neighbour or on the grid edge."""
        b = self.bits
        pad = np.pad(b, 1, constant_values=False)
        inner = pad[:-2, 1:-1] & pad[2:, 1:-1] & pad[1:-1, :-2] & pad[1:-1, 2:]
        return b & ~inner


def _check_grid(bbox, resolution) -> tuple[tuple[complex, complex], tuple[int, int]]:
    nx, ny = (int(resolution[0]), int(resolution[1]))
    if nx < 2 or ny < 2:
        raise ValueError("resolution must be at least 2 x 2")
    lo, hi = complex(bbox[0]), complex(bbox[1])
    if not (hi.real > lo.real and hi.imag > lo.imag):
        lo, hi = inflate_bbox(lo, hi, 0.0)
    return (lo, hi), (nx, ny)


def grid_points(bbox, resolution) -> np.ndarray:
    """Cell centers, shape (ny, nx)."""
    (lo, hi), (nx, ny) = _check_grid(bbox, resolution)
    xs = lo.real + (np.arange(nx) + 0.5) * (hi.real - lo.real) / nx
    ys = lo.imag + (np.arange(ny) + 0.5) * (hi.imag - lo.imag) / ny
    return xs[None, :] + 1j * ys[:, None]


def _sampled_block(s: RegionSet, k: int, d: np.ndarray, logd: np.ndarray, logb: float) -> np.ndarray:
    """Membership of region k over a block of precomputed distances (tables indexed [center, ...]).

    Products become sums of logs. Weights 0 and 1 compare plain distances so
    that the 0^0 = 1 convention and the disk identities hold exactly.
    """
    i, j = int(s.first[k]), int(s.second[k])
    rho = s.bounds[k]
    if s.shape == DISK or (s.shape == POWERMEAN and s.alpha == 1.0):
        return d[i] <= rho
    if s.shape == POWERMEAN and s.alpha == 0.0:
        return d[j] <= rho
    if s.shape == CASSINI:
        return logd[i] + logd[j] <= logb
    return s.alpha * logd[i] + (1.0 - s.alpha) * logd[j] <= logb


class GridSampler:
    """Cell centers of one grid plus per-diagonal distance tables, shared across region sets.

    Each region is evaluated only on the block of cells its reach can touch.
    """

    def __init__(self, bbox, resolution=(256, 256)):
        self.bbox, self.resolution = _check_grid(bbox, resolution)
        self.points = grid_points(self.bbox, self.resolution)
        self.xs = self.points[0].real
        self.ys = self.points[:, 0].imag
        self._tables: dict[bytes, tuple[np.ndarray, np.ndarray]] = {}

    def tables(self, diagonal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """|z - a_ii| and its logarithm, shape (n, ny, nx)."""
        diag = np.ascontiguousarray(diagonal, dtype=complex)
        key = diag.tobytes()
        if key not in self._tables:
            d = np.abs(self.points[None, :, :] - diag[:, None, None])
            with np.errstate(divide="ignore"):
                self._tables[key] = (d, np.log(d))
        return self._tables[key]

    def _window(self, center: complex, reach: float) -> tuple[slice, slice]:
        x0 = int(np.searchsorted(self.xs, center.real - reach, "left"))
        x1 = int(np.searchsorted(self.xs, center.real + reach, "right"))
        y0 = int(np.searchsorted(self.ys, center.imag - reach, "left"))
        y1 = int(np.searchsorted(self.ys, center.imag + reach, "right"))
        return slice(y0, y1), slice(x0, x1)

    def inside(self, s: RegionSet) -> np.ndarray:
        """Boolean grid, shape (ny, nx)."""
        bits = np.zeros(self.points.shape, dtype=bool)
        if len(s) == 0:
            return bits
        d, logd = self.tables(s.diagonal)
        reach = s.reach()
        with np.errstate(divide="ignore"):
            logb = np.log(s.bounds)
        for k in range(len(s)):
            ends = {int(s.first[k]), int(s.second[k])}
            for c in ends:
                ry, rx = self._window(complex(s.diagonal[c]), float(reach[k]))
                if ry.start >= ry.stop or rx.start >= rx.stop:
                    continue
                hit = _sampled_block(s, k, d[:, ry, rx], logd[:, ry, rx], logb[k])
                bits[ry, rx] |= hit
        return bits

    def mask(self, s: RegionSet) -> GridMask:
        return GridMask(self.bbox, self.resolution, self.inside(s))


def rasterize(s: RegionSet, bbox=None, resolution=(256, 256)) -> GridMask:
    """Membership (tol = 0) of every cell center."""
    return GridSampler(s.default_bbox if bbox is None else bbox, resolution).mask(s)


@dataclass(frozen=True)
class Intersection:
    """Conjunction of finitely many sampled region sets.

    The exact sets intersect over infinitely many scalings or weights, so any
    finite sample is an outer approximation of them.
    """

    sets: tuple[RegionSet, ...]
    label: str = "outer approximation"

    def contains(self, z: complex, tol: float = DEFAULT_MEMBERSHIP_TOL) -> bool:
        return all(contains(s, z, tol) for s in self.sets)

    def contains_many(self, z, tol: float = 0.0) -> np.ndarray:
        z = np.asarray(z, dtype=complex).reshape(-1)
        alive = np.ones(z.shape[0], dtype=bool)
        for s in self.sets:
            idx = np.flatnonzero(alive)
            if idx.size == 0:
                break
            alive[idx] = contains_many(s, z[idx], tol)
        return alive

    def rasterize(self, bbox=None, resolution=(256, 256)) -> GridMask:
        sampler = GridSampler(self.sets[0].default_bbox if bbox is None else bbox, resolution)
        alive = np.ones(sampler.points.shape, dtype=bool)
        for s in self.sets:
            alive &= sampler.inside(s)
            if not alive.any():
                break
        return GridMask(sampler.bbox, sampler.resolution, alive)


def approx_intersection(sets: Sequence[RegionSet]) -> Intersection:
    if len(sets) == 0:
        raise ValueError("need at least one region set")
    return Intersection(tuple(sets))


def union_bbox(sets: Iterable[RegionSet]) -> tuple[complex, complex]:
    boxes = [b for b in (s.extent() for s in sets) if b is not None]
    if not boxes:
        return complex(-1, -1), complex(1, 1)
    lo = complex(min(b[0].real for b in boxes), min(b[0].imag for b in boxes))
    hi = complex(max(b[1].real for b in boxes), max(b[1].imag for b in boxes))
    return inflate_bbox(lo, hi)


def containment_violations(sa: RegionSet, sb: RegionSet, bbox=None, resolution=(256, 256)) -> int:
    """Number of sampled cells inside sa but outside sb."""
    sampler = GridSampler(union_bbox([sa, sb]) if bbox is None else bbox, resolution)
    return int(np.count_nonzero(sampler.inside(sa) & ~sampler.inside(sb)))


def check_containment(sa: RegionSet, sb: RegionSet, bbox=None, resolution=(256, 256)) -> bool:
    """Sampled test of sa being a subset of sb; not a proof."""
    return containment_violations(sa, sb, bbox, resolution) == 0


# ------------------------------------------------------------------ export


def _fmt(t: float) -> str:
    return repr(float(t))


def render_svg(layers: Sequence[tuple[RegionSet, GridMask]], title: str = "inclusion regions") -> str:
    """One <g> per region set: boundary cells as squares, disks also drawn as circles.

    Imaginary parts are negated so that the picture has the usual orientation.
    """
    if not layers:
        raise ValueError("nothing to render")
    lo = complex(min(m.bbox[0].real for _, m in layers), min(m.bbox[0].imag for _, m in layers))
    hi = complex(max(m.bbox[1].real for _, m in layers), max(m.bbox[1].imag for _, m in layers))
    w, h = hi.real - lo.real, hi.imag - lo.imag
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(lo.real)} {_fmt(-hi.imag)} {_fmt(w)} {_fmt(h)}">',
        f"<title>{html.escape(title)}</title>",
    ]
    for s, mask in layers:
        attrs = " ".join(f'data-{key}="{html.escape(str(val))}"' for key, val in sorted(s.provenance.items()))
        lines.append(f'<g class="region-set" data-shape="{s.shape}" {attrs}>')
        (mlo, mhi), (nx, ny) = mask.bbox, mask.resolution
        cw, ch = (mhi.real - mlo.real) / nx, (mhi.imag - mlo.imag) / ny
        for iy, ix in zip(*np.nonzero(mask.boundary())):
            x0 = mlo.real + ix * cw
            top = mlo.imag + (iy + 1) * ch
            lines.append(f'<rect x="{_fmt(x0)}" y="{_fmt(-top)}" width="{_fmt(cw)}" height="{_fmt(ch)}"/>')
        if s.shape == DISK:
            for region in s.regions:
                c = region.centers[0]
                lines.append(f'<circle cx="{_fmt(c.real)}" cy="{_fmt(-c.imag)}" r="{_fmt(region.bound)}" '
                             'fill="none" stroke="black"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

"""Catalog of GDD sufficient conditions and the engine that evaluates them.

Each condition compares |a_ii| (or a product / weighted power mean of
|a_ii| and |a_jj|) against a combination of two G-function vectors g and h.
Conditions are built from a small set of generic forms; a catalog entry
binds a form to concrete G-functions.

Generic forms named ``P1..P19`` are the "pair" family: P1-P3 pointwise, the
rest quantified over i != j and evaluated through a two-index function
F(x, y). Forms ``M1..M8`` mix indices across g and h in ways no F covers,
so they are written out directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from gddkit.matcore import as_matrix, as_scaling, diag_moduli
from gddkit.gfun.functions import GFunctionId, eval_gfunction
from gddkit.gfun.pairs import ROUNDING_GUARD, pair_values

DEFAULT_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


pw = np.power


def _ws(w, u, v):
    return w * u + (1.0 - w) * v


@dataclass(frozen=True)
class Form:
    key: str
    pointwise: bool
    params: str
    statement: str
    # (kind, (a, b) -> (alpha_F, beta_F)) when the form factors through F.
    pair: tuple[int, Callable] | None = None
    # (d, g, h, a, b) -> rhs for pointwise forms, or (di, dj, gi, gj, hi, hj, a, b) -> (lhs, rhs).
    direct: Callable | None = None


PROD = "|a_ii||a_jj|"
MEAN = "|a_ii|^a |a_jj|^(1-a)"

FORMS: dict[str, Form] = {}


def _form(key, pointwise, params, statement, pair=None, direct=None):
    FORMS[key] = Form(key, pointwise, params, statement, pair, direct)


_form("P1", True, "", "|a_ii| > {g}_i", direct=lambda d, g, h, a, b: g)
_form("P2", True, "a", "|a_ii| > {g}_i^a {h}_i^(1-a)",
      direct=lambda d, g, h, a, b: pw(g, a) * pw(h, 1 - a))
_form("P3", True, "a", "|a_ii| > a {g}_i + (1-a) {h}_i",
      direct=lambda d, g, h, a, b: _ws(a, g, h))
_form("P4", False, "", PROD + " > {g}_i {g}_j", pair=(2, lambda a, b: (1.0, b)))
_form("P5", False, "", PROD + " > {g}_i {h}_j", pair=(3, lambda a, b: (1.0, b)))
_form("P6", False, "a", PROD + " > ({g}_i {g}_j)^a ({h}_i {h}_j)^(1-a)", pair=(2, lambda a, b: (a, b)))
_form("P7", False, "a", PROD + " > ({g}_i {h}_j)^a ({g}_j {h}_i)^(1-a)", pair=(3, lambda a, b: (a, b)))
_form("P8", False, "a", PROD + " > a {g}_i {g}_j + (1-a) {h}_i {h}_j", pair=(4, lambda a, b: (a, b)))
_form("P9", False, "a", PROD + " > a {g}_i {h}_j + (1-a) {g}_j {h}_i", pair=(5, lambda a, b: (a, b)))
_form("P10", False, "a", PROD + " > [a {g}_i + (1-a) {h}_i][a {g}_j + (1-a) {h}_j]",
      pair=(6, lambda a, b: (a, b)))
_form("P11", False, "a", PROD + " > [a {g}_i + (1-a) {h}_i][a {h}_j + (1-a) {g}_j]",
      pair=(7, lambda a, b: (a, b)))
_form("P12", False, "a", MEAN + " > {g}_i^a {g}_j^(1-a)", pair=(10, lambda a, b: (a, 1.0)))
_form("P13", False, "a", MEAN + " > {g}_i^a {h}_j^(1-a)", pair=(1, lambda a, b: (a, b)))
_form("P14", False, "ab", MEAN + " > ({g}_i^b {h}_i^(1-b))^a ({g}_j^b {h}_j^(1-b))^(1-a)",
      pair=(8, lambda a, b: (a, b)))
_form("P15", False, "ab", MEAN + " > ({g}_i^b {h}_i^(1-b))^a ({h}_j^b {g}_j^(1-b))^(1-a)",
      pair=(9, lambda a, b: (a, b)))
_form("P16", False, "ab", MEAN + " > b {g}_i^a {g}_j^(1-a) + (1-b) {h}_i^a {h}_j^(1-a)",
      pair=(10, lambda a, b: (a, b)))
_form("P17", False, "ab", MEAN + " > b {g}_i^a {h}_j^(1-a) + (1-b) {h}_i^a {g}_j^(1-a)",
      pair=(11, lambda a, b: (a, b)))
_form("P18", False, "ab", MEAN + " > [b {g}_i + (1-b) {h}_i]^a [b {g}_j + (1-b) {h}_j]^(1-a)",
      pair=(12, lambda a, b: (a, b)))
_form("P19", False, "ab", MEAN + " > [b {g}_i + (1-b) {h}_i]^a [b {h}_j + (1-b) {g}_j]^(1-a)",
      pair=(13, lambda a, b: (a, b)))


def _prod_lhs(di, dj, a):
    return di * dj + 0.0 * a


def _mean_lhs(di, dj, a):
    return pw(di, a) * pw(dj, 1 - a)


_form("M1", False, "a", PROD + " > [a {g}_i + (1-a) {h}_j][a {g}_j + (1-a) {h}_i]",
      direct=lambda di, dj, gi, gj, hi, hj, a, b: (_prod_lhs(di, dj, a), _ws(a, gi, hj) * _ws(a, gj, hi)))
_form("M2", False, "a", PROD + " > [a {g}_i + (1-a) {g}_j][a {h}_j + (1-a) {h}_i]",
      direct=lambda di, dj, gi, gj, hi, hj, a, b: (_prod_lhs(di, dj, a), _ws(a, gi, gj) * _ws(a, hj, hi)))
_form("M3", False, "a", MEAN + " > a {g}_i + (1-a) {g}_j",
      direct=lambda di, dj, gi, gj, hi, hj, a, b: (_mean_lhs(di, dj, a), _ws(a, gi, gj)))
_form("M4", False, "a", MEAN + " > a {g}_i + (1-a) {h}_j",
      direct=lambda di, dj, gi, gj, hi, hj, a, b: (_mean_lhs(di, dj, a), _ws(a, gi, hj)))
_form("M5", False, "ab", MEAN + " > a {g}_i^b {h}_i^(1-b) + (1-a) {g}_j^b {h}_j^(1-b)",
      direct=lambda di, dj, gi, gj, hi, hj, a, b: (
          _mean_lhs(di, dj, a), _ws(a, pw(gi, b) * pw(hi, 1 - b), pw(gj, b) * pw(hj, 1 - b))))
_form("M6", False, "ab", MEAN + " > a {g}_i^b {h}_i^(1-b) + (1-a) {h}_j^b {g}_j^(1-b)",
      direct=lambda di, dj, gi, gj, hi, hj, a, b: (
          _mean_lhs(di, dj, a), _ws(a, pw(gi, b) * pw(hi, 1 - b), pw(hj, b) * pw(gj, 1 - b))))
_form("M7", False, "ab", MEAN + " > [a {g}_i + (1-a) {h}_j]^b [a {h}_i + (1-a) {g}_j]^(1-b)",
      direct=lambda di, dj, gi, gj, hi, hj, a, b: (
          _mean_lhs(di, dj, a), pw(_ws(a, gi, hj), b) * pw(_ws(a, hi, gj), 1 - b)))
_form("M8", False, "ab", MEAN + " > [a {g}_i + (1-a) {g}_j]^b [a {h}_i + (1-a) {h}_j]^(1-b)",
      direct=lambda di, dj, gi, gj, hi, hj, a, b: (
          _mean_lhs(di, dj, a), pw(_ws(a, gi, gj), b) * pw(_ws(a, hi, hj), 1 - b)))


# A role is either "g"/"h" (supplied by the spec) or (family, scaling slot).
Role = object
R_W = ("r_weighted", "x")
C_W = ("c_weighted", "y")
R_TW = ("r_tilde_weighted", "x")
C_TW = ("c_tilde_weighted", "y")
R_T = ("r_tilde", None)
C_T = ("c_tilde", None)
R_P = ("r", None)
C_P = ("c", None)

ROLE_SYMBOLS = {
    "g": "g", "h": "h",
    R_W: "r^X", C_W: "c^Y", R_TW: "r~^X", C_TW: "c~^Y",
    R_T: "r~", C_T: "c~", R_P: "r", C_P: "c",
    ("r_weighted", "y"): "r^Y", ("c_weighted", "x"): "c^X",
}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    group: str
    item: str
    form: str
    g_role: Role
    h_role: Role

    @property
    def params(self) -> str:
        return FORMS[self.form].params

    @property
    def pointwise(self) -> bool:
        return FORMS[self.form].pointwise

    @property
    def statement(self) -> str:
        return FORMS[self.form].statement.format(g=ROLE_SYMBOLS[self.g_role], h=ROLE_SYMBOLS[self.h_role])

    @property
    def needs_gh(self) -> bool:
        return "g" in (self.g_role, self.h_role)

    @property
    def scaling_slots(self) -> tuple[str, ...]:
        slots = {r[1] for r in (self.g_role, self.h_role) if isinstance(r, tuple) and r[1]}
        return tuple(sorted(slots))

    def listing(self) -> dict:
        return {
            "id": self.id,
            "group": self.group,
            "item": self.item,
            "arity": "pointwise" if self.pointwise else "pair",
            "params": [{"a": "alpha", "b": "beta"}[p] for p in self.params],
            "inputs": (["g_id", "h_id"] if self.needs_gh else []) + list(self.scaling_slots),
            "statement": self.statement,
        }


def _fixed_pair_items(R, C, literal_14_15=None):
    """Items of the groups that pin (g, h) to scaled row/column sums."""
    items = [("1", "P1", R, R), ("2", "P1", C, C), ("3", "P2", R, C), ("4", "P3", R, C),
             ("5", "P4", R, R), ("6", "P4", C, C), ("7", "P5", R, C)]
    items += [(str(8 + k), f"P{6 + k}", R, C) for k in range(6)]
    if literal_14_15 is None:
        items += [("14", "P12", R, R), ("15", "P12", C, C)]
    else:
        items += literal_14_15
    items += [("16", "P13", R, C)]
    items += [(str(17 + k), f"P{14 + k}", R, C) for k in range(6)]
    return items


def _mixed_items(R, C, prime=""):
    items = [("1", "M1", R, C), ("2", "M2", R, C), ("3", "M3", R, R), ("4", "M3", C, C), ("5", "M4", R, C)]
    items += [(str(6 + k), f"M{5 + k}", R, C) for k in range(4)]
    return [(i + prime, f, g, h) for i, f, g, h in items]


def _unscaled_items(R, C):
    items = [("1", "P1", R, R), ("2", "P1", C, C), ("3", "P2", R, C), ("4", "P3", R, C),
             ("5", "P4", R, R), ("6", "P4", C, C), ("7", "P5", R, C)]
    items += [(str(8 + k), f"P{6 + k}", R, C) for k in range(6)]
    items += [("14", "M1", R, C), ("15", "M2", R, C),
              ("16", "P12", R, R), ("17", "P12", C, C), ("18", "P13", R, C),
              ("19", "M3", R, R), ("20", "M3", C, C), ("21", "M4", R, C)]
    items += [(str(22 + k), f"P{14 + k}", R, C) for k in range(4)]
    items += [("26", "M5", R, C), ("27", "M6", R, C), ("28", "P18", R, C), ("29", "P19", R, C),
              ("30", "M7", R, C), ("31", "M8", R, C)]
    return items


def _build_catalog() -> dict[str, CatalogEntry]:
    groups = [
        ("T4.1", [(str(k), f"P{k}", "g", "h") for k in range(1, 20)]),
        ("T4.2", _fixed_pair_items(R_TW, C_TW)),
        ("T4.3", _fixed_pair_items(R_W, C_W, [
            ("14", "P13", R_W, ("r_weighted", "y")),
            ("15", "P13", ("c_weighted", "x"), C_W),
            ("14alt", "P12", R_W, R_W),
            ("15alt", "P12", C_W, C_W),
        ])),
        ("T4.4", [(str(k), f"M{k}", "g", "h") for k in range(1, 9)]),
        ("T4.5", _mixed_items(R_TW, C_TW) + _mixed_items(R_W, C_W, "'")),
        ("T4.6", _unscaled_items(R_T, C_T)),
        ("T4.7", _unscaled_items(R_P, C_P)),
    ]
    out = {}
    for group, items in groups:
        for item, form, g, h in items:
            cid = f"{group}-{item}"
            out[cid] = CatalogEntry(cid, group, item, form, g, h)
    return out


CATALOG: dict[str, CatalogEntry] = _build_catalog()


def catalog_listing() -> list[dict]:
    return [e.listing() for e in CATALOG.values()]


def _check_unit(name, t):
    if t is None:
        return None
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {t}")
    return t


@dataclass(frozen=True)
class CriterionSpec:
    catalog_id: str
    g_id: GFunctionId | None = None
    h_id: GFunctionId | None = None
    alpha: float | None = None
    beta: float | None = None
    x: tuple[float, ...] | None = None
    y: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.catalog_id not in CATALOG:
            raise KeyError(f"unknown catalog id {self.catalog_id!r}")
        object.__setattr__(self, "alpha", _check_unit("alpha", self.alpha))
        object.__setattr__(self, "beta", _check_unit("beta", self.beta))
        for name in ("x", "y"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, tuple(float(t) for t in as_scaling(v)))

    @property
    def entry(self) -> CatalogEntry:
        return CATALOG[self.catalog_id]

    def with_params(self, alpha: float | None, beta: float | None) -> "CriterionSpec":
        """Copy with new weights; callers pass weights already checked to lie in [0, 1]."""
        out = object.__new__(CriterionSpec)
        for name in ("catalog_id", "g_id", "h_id", "x", "y"):
            object.__setattr__(out, name, getattr(self, name))
        object.__setattr__(out, "alpha", alpha)
        object.__setattr__(out, "beta", beta)
        return out

    def resolve(self, role) -> GFunctionId:
        if role == "g" or role == "h":
            gid = self.g_id if role == "g" else self.h_id
            if gid is None:
                raise ValueError(f"{self.catalog_id} requires {role}_id")
            return gid
        family, slot = role
        if slot is None:
            return GFunctionId(family)
        s = getattr(self, slot)
        if s is None:
            raise ValueError(f"{self.catalog_id} requires scaling {slot} for {family}")
        return GFunctionId(family, scaling=s)

    def to_dict(self) -> dict:
        e = self.entry
        out: dict = {"catalog_id": self.catalog_id}
        out["g"] = self.resolve(e.g_role).to_dict()
        out["h"] = self.resolve(e.h_role).to_dict()
        if "a" in e.params:
            out["alpha"] = self.alpha
        if "b" in e.params:
            out["beta"] = self.beta
        return out


def _form_sides(form: Form, d, g, h, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Both sides per parameter point, shape (points, quantified indices)."""
    p = a.shape[0]
    n = d.shape[0]
    if form.pointwise:
        rhs = form.direct(d, g, h, a[:, None], b[:, None])
        return np.broadcast_to(d, (p, n)), np.broadcast_to(rhs, (p, n))
    if n < 2:
        return np.zeros((p, 0)), np.zeros((p, 0))
    a3, b3 = a[:, None, None], b[:, None, None]
    if form.pair is not None:
        kind, remap = form.pair
        fa, fb = remap(a3, b3)
        fa = fa + 0.0 * a3
        fb = fb + 0.0 * b3
        lhs = pair_values(kind, fa, fb, d, d)
        rhs = pair_values(kind, fa, fb, g, h)
    else:
        lhs, rhs = form.direct(d[:, None], d[None, :], g[:, None], g[None, :],
                               h[:, None], h[None, :], a3, b3)
    off = ~np.eye(n, dtype=bool)
    lhs = np.broadcast_to(lhs, (p, n, n))[:, off]
    rhs = np.broadcast_to(rhs, (p, n, n))[:, off]
    return lhs, rhs


def _margins_and_verdicts(lhs, rhs, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Smallest lhs - rhs per point, and whether every index clears tau plus the rounding guard."""
    if lhs.shape[1] == 0:
        inf = np.full(lhs.shape[0], math.inf)
        return inf, np.ones(lhs.shape[0], dtype=bool)
    diff = lhs - rhs
    guard = ROUNDING_GUARD * np.maximum(np.abs(lhs), np.abs(rhs))
    return diff.min(axis=1), np.all(diff > tau + guard, axis=1)


def _param_arrays(entry: CatalogEntry, alpha, beta):
    if "a" in entry.params and alpha is None:
        raise ValueError(f"{entry.id} requires alpha")
    if "b" in entry.params and beta is None:
        raise ValueError(f"{entry.id} requires beta")
    a = np.array([alpha if alpha is not None else 1.0])
    b = np.array([beta if beta is not None else 1.0])
    return a, b


def evaluate_criterion(spec: CriterionSpec, a, tau: float = 0.0) -> tuple[bool, float]:
    """(holds, margin): margin is min(lhs - rhs) over the quantified indices, +inf if none."""
    m = as_matrix(a)
    e = spec.entry
    pa, pb = _param_arrays(e, spec.alpha, spec.beta)
    g = eval_gfunction(spec.resolve(e.g_role), m)
    h = eval_gfunction(spec.resolve(e.h_role), m)
    lhs, rhs = _form_sides(FORMS[e.form], diag_moduli(m), g, h, pa, pb)
    margins, ok = _margins_and_verdicts(lhs, rhs, tau)
    return bool(ok[0]), float(margins[0])


def criterion_margin(spec: CriterionSpec, a) -> float:
    return evaluate_criterion(spec, a)[1]


def check_criterion(spec: CriterionSpec, a, tau: float = 0.0) -> bool:
    """True iff the named condition holds strictly (beyond tau) at every quantified index."""
    return evaluate_criterion(spec, a, tau)[0]


# ---------------------------------------------------------------- sweeping


@dataclass(frozen=True)
class ScalingChoice:
    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]


@dataclass(frozen=True)
class SweepPlan:
    """What to try. ``None`` scalings mean ones plus the classification certificate;
    ``None`` gh_pairs mean (r, c), (c, r), (r~, c~) and (r^X, c^Y) per scaling."""

    catalog_ids: tuple[str, ...] | None = None
    alphas: tuple[float, ...] = DEFAULT_GRID
    betas: tuple[float, ...] = DEFAULT_GRID
    scalings: tuple[ScalingChoice, ...] | None = None
    gh_pairs: tuple[tuple[GFunctionId, GFunctionId], ...] | None = None
    extra_gh_pairs: tuple[tuple[GFunctionId, GFunctionId], ...] = ()
    tau: float = 0.0


@dataclass(frozen=True)
class CriterionResult:
    base: CriterionSpec
    alpha: float | None
    beta: float | None
    fired: bool
    margin: float
    scaling: str | None = None

    @property
    def spec(self) -> CriterionSpec:
        return self.base.with_params(self.alpha, self.beta)

    @property
    def catalog_id(self) -> str:
        return self.base.catalog_id

    def to_dict(self) -> dict:
        out = self.spec.to_dict()
        out["fired"] = self.fired
        out["margin"] = self.margin
        if self.scaling is not None:
            out["scaling"] = self.scaling
        return out


def certificate_scalings(a) -> list[ScalingChoice]:
    """Ones, plus (x, y) built from H-matrix certificates of A and A^T when they exist.

    c^Y(A) = r^{Y^{-1}}(A^T), so y is the reciprocal of the transpose's certificate.
    """
    from gddkit.classify import classify_h

    m = as_matrix(a)
    n = m.shape[0]
    out = [ScalingChoice("ones", (1.0,) * n, (1.0,) * n)]
    row = classify_h(m).certificate
    col = classify_h(m.T).certificate
    if row is not None and col is not None:
        out.append(ScalingChoice("certificate", tuple(map(float, row)), tuple(map(float, 1.0 / col))))
    return out


def random_scalings(n: int, k: int, rng: np.random.Generator, spread: float = 2.0) -> list[ScalingChoice]:
    """k pairs with log10 of every entry uniform in [-spread, spread]."""
    out = []
    for t in range(k):
        x = 10.0 ** rng.uniform(-spread, spread, n)
        y = 10.0 ** rng.uniform(-spread, spread, n)
        out.append(ScalingChoice(f"random{t}", tuple(map(float, x)), tuple(map(float, y))))
    return out


def default_gh_pairs(scalings: Iterable[ScalingChoice]) -> list[tuple[GFunctionId, GFunctionId]]:
    pairs = [(GFunctionId("r"), GFunctionId("c")), (GFunctionId("c"), GFunctionId("r")),
             (GFunctionId("r_tilde"), GFunctionId("c_tilde"))]
    for s in scalings:
        if s.label != "ones":
            pairs.append((GFunctionId("r_weighted", scaling=s.x), GFunctionId("c_weighted", scaling=s.y)))
    return pairs


def _grid_points(params: str, alphas, betas):
    if params == "":
        return [(None, None)]
    if params == "a":
        return [(a, None) for a in alphas]
    return [(a, b) for a in alphas for b in betas]


def sweep_criteria(a, plan: SweepPlan | None = None) -> list[CriterionResult]:
    """Evaluate catalog entries over a parameter grid, in catalog order then parameter order."""
    plan = plan or SweepPlan()
    m = as_matrix(a)
    d = diag_moduli(m)
    scalings = list(plan.scalings) if plan.scalings is not None else certificate_scalings(m)
    gh_pairs = list(plan.gh_pairs) if plan.gh_pairs is not None else default_gh_pairs(scalings)
    gh_pairs += list(plan.extra_gh_pairs)
    alphas = [_check_unit("alpha", t) for t in plan.alphas]
    betas = [_check_unit("beta", t) for t in plan.betas]
    ids = plan.catalog_ids if plan.catalog_ids is not None else tuple(CATALOG)
    for cid in ids:
        if cid not in CATALOG:
            raise KeyError(f"unknown catalog id {cid!r}")
    cache: dict[GFunctionId, np.ndarray] = {}

    def value(gid):
        if gid not in cache:
            cache[gid] = eval_gfunction(gid, m)
        return cache[gid]

    results: list[CriterionResult] = []
    for cid in ids:
        e = CATALOG[cid]
        form = FORMS[e.form]
        points = _grid_points(e.params, alphas, betas)
        pa = np.array([1.0 if p[0] is None else p[0] for p in points])
        pb = np.array([1.0 if p[1] is None else p[1] for p in points])
        variants: list[tuple[dict, str | None]] = []
        if e.needs_gh:
            variants = [({"g_id": g, "h_id": h}, None) for g, h in gh_pairs]
        elif e.scaling_slots:
            variants = [({"x": s.x, "y": s.y}, s.label) for s in scalings]
        else:
            variants = [({}, None)]
        for kwargs, label in variants:
            probe = CriterionSpec(cid, **kwargs)
            g = value(probe.resolve(e.g_role))
            h = value(probe.resolve(e.h_role))
            lhs, rhs = _form_sides(form, d, g, h, pa, pb)
            margins, verdicts = _margins_and_verdicts(lhs, rhs, plan.tau)
            results.extend(CriterionResult(probe, al, be, ok, mg, label)
                           for (al, be), mg, ok in zip(points, margins.tolist(), verdicts.tolist()))
    return results


def fired(results: Iterable[CriterionResult]) -> list[CriterionResult]:
    return [r for r in results if r.fired]

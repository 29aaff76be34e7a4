import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SINGULAR, WORKED, complex_matrices, random_complex
from gddkit.classify import classify_h
from gddkit.gfun import (
    CATALOG,

    CriterionSpec,
    GFunctionId,
    PairFunctionSpec,
    SweepPlan,
    check_criterion,
    check_pair_condition,
    eval_gfunction,
    eval_pair_function,
    evaluate_criterion,
    g2_uniform,
    g3_uniform,
    g4_min_alpha,
    pair_margin,
    sweep_criteria,
)
from gddkit.gfun.catalog import FORMS, catalog_listing, certificate_scalings
from gddkit.matcore import COLUMN, ROW, deleted_sums

R, C = GFunctionId("r"), GFunctionId("c")
unit = st.floats(0, 1)
pos = st.floats(0, 50)


# ---------------------------------------------------------------- G-functions


def test_r_delegates():
    assert np.allclose(eval_gfunction(R, WORKED), [4, 0.5])


def test_g4_single_term_rows():
    a = np.array([[5, 2, 0], [0, 5, 3], [1, 0, 5]], dtype=float)
    got = eval_gfunction(GFunctionId("g4", alpha=g4_min_alpha(a)), a)
    assert np.allclose(got / g4_min_alpha(a), deleted_sums(a))


def test_g4_alpha_one_single_terms():
    a = np.array([[5, 1, 0], [0, 5, 1], [1, 0, 5]], dtype=float)  # load 3 > 1*2
    with pytest.raises(ValueError):
        eval_gfunction(GFunctionId("g4", alpha=1.0), a)
    b = np.array([[5, 1], [1, 5]], dtype=float)  # load 2 <= 2
    assert np.allclose(eval_gfunction(GFunctionId("g4", alpha=1.0), b), deleted_sums(b))


def test_g1_hand_value():
    got = eval_gfunction(GFunctionId("g1", alpha=0.5, p=2.0), [[0, 3], [4, 0]])
    assert got[0] == pytest.approx(2 * math.sqrt(3))


def test_g1_matches_loop():
    rng = np.random.default_rng(3)
    a = random_complex(rng, 5)
    alpha, p = 0.3, 3.0
    q = p / (p - 1)
    got = eval_gfunction(GFunctionId("g1", alpha=alpha, p=p), a)
    for k in range(5):
        rk = sum(abs(a[k, j]) ** (alpha * p) for j in range(5) if j != k) ** (1 / (alpha * p))
        ck = sum(abs(a[i, k]) ** ((1 - alpha) * q) for i in range(5) if i != k) ** (1 / ((1 - alpha) * q))
        assert got[k] == pytest.approx(rk ** alpha * ck ** (1 - alpha), rel=1e-12)


@pytest.mark.parametrize("kwargs", [
    {"family": "nope"},
    {"family": "r_weighted"},
    {"family": "g1", "alpha": 0.5, "p": 1.0},
    {"family": "g1", "alpha": 1.0, "p": 2.0},
    {"family": "g2", "alpha_bar": (0.5, 0.5), "p": 2.0},
    {"family": "g3", "alpha_bar": (1.0, 1.0), "p": 2.0},
    {"family": "g4", "alpha": 0.0},
])
def test_invalid_ids(kwargs):
    with pytest.raises(ValueError):
        GFunctionId(**kwargs)


def test_uniform_constraints():
    for n in (2, 3, 7):
        g2 = g2_uniform(n, 2.5)
        assert math.fsum(1 / (1 + t) for t in g2.alpha_bar) <= 1
        g3 = g3_uniform(n, 2.5)
        q = 2.5 / 1.5
        assert math.fsum(t ** q for t in g3.alpha_bar) <= 1


@given(complex_matrices(min_n=2, max_n=6), st.sampled_from(["g1", "g2", "g3", "g4"]),
       st.floats(0.05, 0.95), st.floats(1.1, 6))
def test_norm_families_are_g_functions(a, fam, alpha, p):
    n = a.shape[0]
    gid = {
        "g1": lambda: GFunctionId("g1", alpha=alpha, p=p),
        "g2": lambda: g2_uniform(n, p),
        "g3": lambda: g3_uniform(n, p),
        "g4": lambda: GFunctionId("g4", alpha=g4_min_alpha(a)),
    }[fam]()
    g = eval_gfunction(gid, a)
    assert np.all(g >= 0)
    if np.all(np.abs(np.diag(a)) > g * (1 + 1e-9)):
        assert classify_h(a).verdict != "not_gdd"


# ---------------------------------------------------------------- pair functions


def direct_pair(kind, a, b, xi, xj, yi, yj):
    """Scalar transcription of the thirteen two-index functions."""
    P = lambda u, t: 1.0 if t == 0 else u ** t
    W = lambda w, u, v: w * u + (1 - w) * v
    return {
        1: lambda: P(xi, a) * P(yj, 1 - a),
        2: lambda: P(xi * xj, a) * P(yi * yj, 1 - a),
        3: lambda: P(xi * yj, a) * P(xj * yi, 1 - a),
        4: lambda: a * xi * xj + (1 - a) * yi * yj,
        5: lambda: a * xi * yj + (1 - a) * xj * yi,
        6: lambda: W(a, xi, yi) * W(a, xj, yj),
        7: lambda: W(a, xi, yi) * W(a, yj, xj),
        8: lambda: P(P(xi, b) * P(yi, 1 - b), a) * P(P(xj, b) * P(yj, 1 - b), 1 - a),
        9: lambda: P(P(xi, b) * P(yi, 1 - b), a) * P(P(yj, b) * P(xj, 1 - b), 1 - a),
        10: lambda: b * P(xi, a) * P(xj, 1 - a) + (1 - b) * P(yi, a) * P(yj, 1 - a),
        11: lambda: b * P(xi, a) * P(yj, 1 - a) + (1 - b) * P(yi, a) * P(xj, 1 - a),
        12: lambda: P(W(b, xi, yi), a) * P(W(b, xj, yj), 1 - a),
        13: lambda: P(W(b, xi, yi), a) * P(W(b, yj, xj), 1 - a),
    }[kind]()


def test_pair_examples():
    g = eval_pair_function(PairFunctionSpec(1, 0.5), [4, 9], [1, 1]).as_dict()
    assert g == {(1, 2): 2.0, (2, 1): 3.0}
    g = eval_pair_function(PairFunctionSpec(1, 0.0), [7, 3], [0, 5]).as_dict()
    assert g == {(1, 2): 5.0, (2, 1): 0.0}
    g = eval_pair_function(PairFunctionSpec(8, 0.5, 0.5), [4, 4], [1, 1]).as_dict()
    assert all(v == pytest.approx(2.0) for v in g.values())


def test_pair_condition_examples():
    r = deleted_sums(WORKED)
    assert check_pair_condition(PairFunctionSpec(2, 0.3), WORKED, r, r)
    assert check_pair_condition(PairFunctionSpec(1, 1.0), [[3, 1], [1, 3]], [1, 1], [1, 1])
    rs = deleted_sums(SINGULAR)
    assert not check_pair_condition(PairFunctionSpec(1, 1.0), SINGULAR, rs, rs)


def test_pair_single_index_is_vacuous():
    assert check_pair_condition(PairFunctionSpec(5, 0.5), [[1.0]], [9.0], [9.0])
    assert pair_margin(PairFunctionSpec(5, 0.5), [[1.0]], [9.0], [9.0]) == math.inf


def test_pair_spec_validation():
    with pytest.raises(ValueError):
        PairFunctionSpec(14, 0.5)
    with pytest.raises(ValueError):
        PairFunctionSpec(3, 1.5)


@given(st.integers(1, 13), unit, unit, st.lists(st.tuples(pos, pos), min_size=2, max_size=5))
def test_pair_values_match_scalar_transcription(kind, a, b, xy):
    x = np.array([t[0] for t in xy])
    y = np.array([t[1] for t in xy])
    grid = eval_pair_function(PairFunctionSpec(kind, a, b), x, y)
    for (i, j), v in grid.as_dict().items():
        want = direct_pair(kind, a, b, x[i - 1], x[j - 1], y[i - 1], y[j - 1])
        assert v == pytest.approx(want, rel=1e-12, abs=1e-300)


@given(st.integers(1, 13), unit, unit, st.lists(pos, min_size=2, max_size=5))
def test_pair_degenerates_on_equal_arguments(kind, a, b, d):
    """F(d, d) reduces to the product |a_ii||a_jj| or the mean |a_ii|^a |a_jj|^(1-a)."""
    d = np.array(d)
    grid = eval_pair_function(PairFunctionSpec(kind, a, b), d, d)
    for (i, j), v in grid.as_dict().items():
        di, dj = d[i - 1], d[j - 1]
        if kind in (2, 3, 4, 5, 6, 7):
            want = di * dj
        else:
            want = (1.0 if a == 0 else di ** a) * (1.0 if a == 1 else dj ** (1 - a))
        assert v == pytest.approx(want, rel=1e-9, abs=1e-300)


AMGM = [(4, 2), (5, 3), (6, 2), (7, 3), (10, 8), (12, 8), (11, 9), (13, 9)]


@given(unit, unit, st.lists(st.tuples(pos, pos), min_size=2, max_size=5))
def test_amgm_orderings(a, b, xy):
    x = np.array([t[0] for t in xy])
    y = np.array([t[1] for t in xy])
    for big, small in AMGM:
        hi = eval_pair_function(PairFunctionSpec(big, a, b), x, y).values
        lo = eval_pair_function(PairFunctionSpec(small, a, b), x, y).values
        assert np.all(hi >= lo - 1e-12 * np.maximum(np.abs(hi), 1e-300))


# ---------------------------------------------------------------- catalog


def test_catalog_sizes():
    counts = {}
    for e in CATALOG.values():
        counts[e.group] = counts.get(e.group, 0) + 1
    assert counts == {"T4.1": 19, "T4.2": 22, "T4.3": 24, "T4.4": 8, "T4.5": 18, "T4.6": 31, "T4.7": 31}
    listing = catalog_listing()
    assert len(listing) == len(CATALOG)
    assert all({"id", "group", "item", "arity", "params", "statement"} <= set(d) for d in listing)


def test_worked_example_items():
    assert check_criterion(CriterionSpec("T4.7-5"), WORKED)
    assert not check_criterion(CriterionSpec("T4.7-1"), WORKED)
    ok, margin = evaluate_criterion(CriterionSpec("T4.7-5"), WORKED)
    assert ok and margin == pytest.approx(2.0)


def test_irreducible_sdd_fires_tilde_product():
    a = np.array([[4, 1, 1], [1, 4, 1], [1, 1, 4]], dtype=float)
    assert check_criterion(CriterionSpec("T4.6-5"), a)


def test_sdd_fires_row_item():
    a = np.array([[4, 1, 1], [1, 4, 1], [0, 1, 4]], dtype=float)
    fired = {r.catalog_id for r in sweep_criteria(a) if r.fired}
    assert "T4.7-1" in fired


def test_singular_exemplar_fires_nothing():
    results = sweep_criteria(SINGULAR)
    assert results and not any(r.fired for r in results)


def test_requires_params():
    with pytest.raises(ValueError):
        check_criterion(CriterionSpec("T4.7-3"), WORKED)
    with pytest.raises(ValueError):
        check_criterion(CriterionSpec("T4.1-1"), WORKED)
    with pytest.raises(KeyError):
        CriterionSpec("T9.9-1")


def test_tau_tightens():
    spec = CriterionSpec("T4.7-5")
    assert check_criterion(spec, WORKED, 1.9)
    assert not check_criterion(spec, WORKED, 2.1)


def test_certificate_scalings_worked():
    ss = certificate_scalings(WORKED)
    assert [s.label for s in ss] == ["ones", "certificate"]
    cert = ss[1]
    # r^X and c^Y built from the certificates are both dominated
    g = eval_gfunction(GFunctionId("r_weighted", scaling=cert.x), WORKED)
    h = eval_gfunction(GFunctionId("c_weighted", scaling=cert.y), WORKED)
    assert np.all(np.abs(np.diag(WORKED)) > g) and np.all(np.abs(np.diag(WORKED)) > h)


def direct_statement(form, di, dj, gi, gj, hi, hj, a, b):
    """The pair forms written out from their statements, one index pair at a time."""
    prod = di * dj
    mean = di ** a * dj ** (1 - a)
    W = lambda w, u, v: w * u + (1 - w) * v
    table = {
        "P4": (prod, gi * gj),
        "P5": (prod, gi * hj),
        "P6": (prod, (gi * gj) ** a * (hi * hj) ** (1 - a)),
        "P7": (prod, (gi * hj) ** a * (gj * hi) ** (1 - a)),
        "P8": (prod, a * gi * gj + (1 - a) * hi * hj),
        "P9": (prod, a * gi * hj + (1 - a) * gj * hi),
        "P10": (prod, W(a, gi, hi) * W(a, gj, hj)),
        "P11": (prod, W(a, gi, hi) * W(a, hj, gj)),
        "P12": (mean, gi ** a * gj ** (1 - a)),
        "P13": (mean, gi ** a * hj ** (1 - a)),
        "P14": (mean, (gi ** b * hi ** (1 - b)) ** a * (gj ** b * hj ** (1 - b)) ** (1 - a)),
        "P15": (mean, (gi ** b * hi ** (1 - b)) ** a * (hj ** b * gj ** (1 - b)) ** (1 - a)),
        "P16": (mean, b * gi ** a * gj ** (1 - a) + (1 - b) * hi ** a * hj ** (1 - a)),
        "P17": (mean, b * gi ** a * hj ** (1 - a) + (1 - b) * hi ** a * gj ** (1 - a)),
        "P18": (mean, W(b, gi, hi) ** a * W(b, gj, hj) ** (1 - a)),
        "P19": (mean, W(b, gi, hi) ** a * W(b, hj, gj) ** (1 - a)),
    }
    return table[form]


@given(complex_matrices(min_n=2, max_n=5, sparsity=False), st.integers(4, 19),
       st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_pair_forms_two_routes(a, k, alpha, beta):
    """Margins through the two-index functions equal the written-out statements."""
    cid = f"T4.1-{k}"
    spec = CriterionSpec(cid, R, C, alpha, beta)
    _, margin = evaluate_criterion(spec, a)
    d = np.abs(np.diag(a))
    g, h = deleted_sums(a, ROW), deleted_sums(a, COLUMN)
    n = a.shape[0]
    want = min(
        (lambda lr: lr[0] - lr[1])(direct_statement(f"P{k}", d[i], d[j], g[i], g[j], h[i], h[j], alpha, beta))
        for i in range(n) for j in range(n) if i != j)
    scale = 1 + max(d.max(), g.max(), h.max()) ** 2
    assert margin == pytest.approx(want, abs=1e-9 * scale)


@given(complex_matrices(min_n=1, max_n=5), st.floats(0, 1))
def test_pointwise_forms(a, alpha):
    d = np.abs(np.diag(a))
    g, h = deleted_sums(a, ROW), deleted_sums(a, COLUMN)
    for k, rhs in ((1, g), (2, g ** alpha * h ** (1 - alpha)), (3, alpha * g + (1 - alpha) * h)):
        _, margin = evaluate_criterion(CriterionSpec(f"T4.1-{k}", R, C, alpha), a)
        assert margin == pytest.approx(float(np.min(d - rhs)), abs=1e-9 * (1 + d.max() + g.max() + h.max()))


@given(complex_matrices(min_n=2, max_n=5))
def test_transposition_swaps_roles(a):
    """T4.7 row items on A equal the column items on A^T."""
    for row, col in (("1", "2"), ("5", "6"), ("16", "17"), ("19", "20")):
        spec_r = CriterionSpec(f"T4.7-{row}", alpha=0.5)
        spec_c = CriterionSpec(f"T4.7-{col}", alpha=0.5)
        assert check_criterion(spec_r, a) == check_criterion(spec_c, a.T)


@given(complex_matrices(min_n=2, max_n=6))
def test_firing_implies_gdd(a):
    results = sweep_criteria(a, SweepPlan(alphas=(0, 0.5, 1), betas=(0, 0.5, 1)))
    if any(r.fired for r in results):
        assert classify_h(a).verdict != "not_gdd"


def test_every_form_has_a_route():
    for f in FORMS.values():
        assert (f.pair is not None) != (f.direct is not None) or f.pointwise

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SINGULAR, WORKED, complex_matrices
from gddkit.classify import (
    GDD,
    INCONCLUSIVE,
    NOT_GDD,
    ConvergenceError,
    classify_h,
    is_m_matrix,
    is_sdd,
    is_z_matrix,
    perron_bracket,
    spectral_radius_nonneg,
)
from gddkit.matcore import scale


def jacobi_radius_oracle(a):
    d = np.abs(np.diag(a))
    off = np.abs(a) - np.diag(d)
    return max(abs(np.linalg.eigvals(off / d[:, None])))


def test_sdd_examples():
    assert is_sdd([[3, 1], [1, 3]])
    assert not is_sdd(SINGULAR)
    assert not is_sdd(WORKED)


def test_sdd_with_tau():
    assert is_sdd([[3, 1], [1, 3]], 1.5)
    assert not is_sdd([[3, 1], [1, 3]], 2.0)


@pytest.mark.parametrize("b, rho", [
    ([[0, 1], [1, 0]], 1.0),
    ([[1, 1], [1, 1]], 2.0),
    ([[0, 2], [0, 0]], 0.0),
])
def test_spectral_radius_examples(b, rho):
    assert spectral_radius_nonneg(np.array(b, dtype=float)) == pytest.approx(rho, abs=1e-10)


def test_spectral_radius_rejects_negative():
    with pytest.raises(ValueError):
        spectral_radius_nonneg(np.array([[0, -1], [1, 0]]))


def test_bracket_exhaustion_raises():
    b = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1e-3, 0.0, 0.0]])
    with pytest.raises(ConvergenceError) as err:
        spectral_radius_nonneg(b, tol=1e-15, max_iter=3)
    assert err.value.lower <= err.value.upper


def test_m_matrix_examples():
    assert is_m_matrix([[2, -1], [-1, 2]]) is True
    assert is_m_matrix(SINGULAR) is False
    assert is_m_matrix([[1, 0.5], [0.5, 1]]) is False
    assert not is_z_matrix([[1, 0.5], [0.5, 1]])
    assert is_z_matrix(SINGULAR)


def test_worked_example_certified():
    rep = classify_h(WORKED)
    assert rep.is_h_gdd and rep.verdict == GDD
    assert is_sdd(scale(WORKED, rep.certificate))
    assert is_sdd(scale(WORKED, [3, 1]))
    assert rep.jacobi_radius == pytest.approx(np.sqrt(0.5), rel=1e-9)


def test_singular_exemplar_rejected():
    rep = classify_h(SINGULAR)
    assert not rep.is_h_gdd and rep.verdict == NOT_GDD and rep.certificate is None
    assert rep.is_m is False and not rep.is_sdd


def test_identity_certificate_is_ones():
    rep = classify_h(np.eye(5))
    assert rep.is_h_gdd
    assert np.allclose(rep.certificate, 1)


def test_zero_row_and_zero_diagonal():
    assert classify_h([[0, 0], [1, 2]]).verdict == NOT_GDD
    assert classify_h([[0, 1], [1, 2]]).verdict == NOT_GDD
    assert classify_h([[0.0]]).verdict == NOT_GDD
    assert classify_h([[5.0]]).verdict == GDD


def test_reducible_needs_inflation():
    # Upper block coupled strongly to the lower one; the certificate must scale blocks apart.
    a = np.array([[1, 0.5, 100, 0], [0.5, 1, 0, 100], [0, 0, 1, 0.9], [0, 0, 0.9, 1]], dtype=float)
    rep = classify_h(a)
    assert rep.is_h_gdd
    assert is_sdd(scale(a, rep.certificate))


def test_report_dict_is_plain():
    d = classify_h(WORKED).to_dict()
    assert set(d) == {"is_sdd", "is_z", "is_m", "is_h_gdd", "verdict", "certificate", "witness", "jacobi_radius"}
    assert all(isinstance(t, float) for t in d["certificate"])


@given(complex_matrices(max_n=7))
def test_verdict_agrees_with_eigen_oracle(a):
    rep = classify_h(a)
    d = np.abs(np.diag(a))
    if np.any(d == 0):
        assert rep.verdict == NOT_GDD
        return
    rho = jacobi_radius_oracle(a)
    if rep.verdict == GDD:
        assert rho < 1 + 1e-9
        assert is_sdd(scale(a, rep.certificate))
    elif rep.verdict == NOT_GDD:
        assert rho > 1 - 1e-9
    else:
        assert abs(rho - 1) < 1e-6
    if rho < 1 - 1e-6:
        assert rep.verdict == GDD
    if rho > 1 + 1e-6:
        assert rep.verdict == NOT_GDD


@given(complex_matrices(max_n=7))
def test_sdd_implies_gdd(a):
    if is_sdd(a):
        assert classify_h(a).is_h_gdd


@given(complex_matrices(max_n=6), st.data())
def test_gdd_invariant_under_diagonal_similarity(a, data):
    n = a.shape[0]
    x = np.array(data.draw(st.lists(st.floats(1e-2, 1e2), min_size=n, max_size=n)))
    r1, r2 = classify_h(a), classify_h(scale(a, x))
    if INCONCLUSIVE not in (r1.verdict, r2.verdict):
        assert r1.verdict == r2.verdict


@given(complex_matrices(max_n=6))
def test_bracket_contains_radius(a):
    b = np.abs(a)
    if not is_irreducible_support(b):
        return
    br = perron_bracket(b)
    rho = max(abs(np.linalg.eigvals(b)))
    if br.converged:
        assert br.lower - 1e-9 * (1 + rho) <= rho <= br.upper + 1e-9 * (1 + rho)


def is_irreducible_support(b):
    from gddkit.structure import is_irreducible
    return is_irreducible(b)


@given(complex_matrices(max_n=6))
def test_m_matrix_matches_eigen_oracle(a):
    z = -np.abs(a.real)
    np.fill_diagonal(z, np.abs(np.diag(a.real)) + 0.5)
    verdict = is_m_matrix(z)
    s = np.max(np.diag(z))
    rho = max(abs(np.linalg.eigvals(s * np.eye(len(z)) - z)))
    if verdict is True:
        assert rho < s * (1 + 1e-9)
    elif verdict is False:
        assert rho > s * (1 - 1e-9)


def test_bracket_with_zero_start_entry():
    b = np.array([[0.0, 1.0], [1.0, 0.0]])
    br = perron_bracket(b, start=np.array([1.0, 0.0]))
    assert br.converged and br.iterations > 1
    assert br.lower == pytest.approx(1.0) and br.upper == pytest.approx(1.0)

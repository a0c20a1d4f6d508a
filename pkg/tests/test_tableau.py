import numpy as np
import pytest

from qzsprk import GaussTableau, check_symplectic, gauss_tableau
from qzsprk.errors import TableauError


def collocation_oracle(s):
    """Gauss method built from Legendre nodes and the simplifying conditions C(s)."""
    x, w = np.polynomial.legendre.leggauss(s)
    c = (x + 1) / 2
    b = w / 2
    V = np.vander(c, s, increasing=True)  # V[j, k] = c_j**k
    rhs = np.array([[ci ** (k + 1) / (k + 1) for k in range(s)] for ci in c])
    A = np.linalg.solve(V.T, rhs.T).T
    return A, b, c


@pytest.mark.parametrize("s", [1, 2, 3])
def test_matches_collocation_oracle(s):
    tab = gauss_tableau(s)
    A, b, c = collocation_oracle(s)
    np.testing.assert_allclose(tab.A, A, atol=1e-14)
    np.testing.assert_allclose(tab.b, b, atol=1e-15)
    np.testing.assert_allclose(tab.c, c, atol=1e-15)
    assert tab.order == 2 * s


def test_published_entries():
    t1 = gauss_tableau(1)
    assert t1.A.tolist() == [[0.5]] and t1.b.tolist() == [1.0] and t1.c.tolist() == [0.5]
    t2 = gauss_tableau(2)
    assert t2.A[0, 1] == pytest.approx(0.25 - np.sqrt(3) / 6, abs=1e-16)
    assert t2.b.tolist() == [0.5, 0.5]
    t3 = gauss_tableau(3)
    np.testing.assert_allclose(t3.b, [5 / 18, 4 / 9, 5 / 18], rtol=1e-16)
    assert t3.A[1, 1] == pytest.approx(2 / 9, abs=1e-16)


@pytest.mark.parametrize("s", [1, 2, 3])
def test_consistency_and_quadrature_order(s):
    tab = gauss_tableau(s)
    np.testing.assert_allclose(tab.A.sum(axis=1), tab.c, atol=1e-15)
    assert tab.b.sum() == pytest.approx(1.0, abs=1e-15)
    # b integrates polynomials up to degree 2s-1 exactly
    for k in range(2 * s):
        assert tab.b @ tab.c**k == pytest.approx(1 / (k + 1), abs=1e-14)


@pytest.mark.parametrize("s", [1, 2, 3])
def test_symplectic_below_1e15(s):
    assert check_symplectic(gauss_tableau(s)) < 1e-15


def test_s2_symplectic_entry_by_hand():
    r = np.sqrt(3) / 6
    assert 0.5 * (0.25 - r) + 0.5 * (0.25 + r) == pytest.approx(0.25, abs=1e-16)


def test_perturbed_tableau_residual():
    tab = gauss_tableau(2)
    A = tab.A.copy()
    A[0, 0] += 1e-6
    res = check_symplectic(GaussTableau(A, tab.b, tab.c))
    # diagonal entry: 2 * b_1 * 1e-6 = 1e-6
    assert res == pytest.approx(1e-6, rel=1e-6)


@pytest.mark.parametrize("s", [0, 4, 2.5])
def test_unsupported_stage_count(s):
    with pytest.raises(TableauError):
        gauss_tableau(s)


def test_tableau_is_read_only():
    tab = gauss_tableau(2)
    with pytest.raises(ValueError):
        tab.A[0, 0] = 1.0
    with pytest.raises(TableauError):
        GaussTableau(np.eye(2), [1.0], [0.5])

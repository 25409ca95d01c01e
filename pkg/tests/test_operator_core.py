import numpy as np
import pytest
from hypothesis import given, strategies as st

from ptcoupled.errors import InvalidArgumentError
from ptcoupled.operator_core import (
    PX,
    PY,
    X,
    Y,
    CanonicalBasis,
    QuadraticHamiltonian,
    from_monomials,
    paper_monomials,
    pt_paper_hamiltonian,
    pt_transform,
    symplectic_form,
)

reals = st.floats(-3, 3, allow_nan=False)


def test_symplectic_form_small():
    np.testing.assert_array_equal(symplectic_form(1), [[0, 1], [-1, 0]])
    J = symplectic_form(2)
    expected = np.zeros((4, 4))
    expected[0, 2] = expected[1, 3] = 1
    expected[2, 0] = expected[3, 1] = -1
    np.testing.assert_array_equal(J, expected)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_symplectic_form_structure(n):
    J = symplectic_form(n)
    assert J.shape == (2 * n, 2 * n)
    np.testing.assert_array_equal(J, -J.T)
    np.testing.assert_array_equal(J @ J, -np.eye(2 * n))
    np.testing.assert_array_equal(J @ J.T, np.eye(2 * n))


@pytest.mark.parametrize("bad", [0, -1, 1.5])
def test_symplectic_form_rejects(bad):
    with pytest.raises(InvalidArgumentError):
        symplectic_form(bad)


def test_basis_commutators():
    basis = CanonicalBasis(2)
    assert basis.size == 4
    assert basis.labels == ("x", "y", "px", "py")
    assert basis.commutator(X, PX) == 1j
    assert basis.commutator(PY, Y) == -1j
    assert basis.commutator(X, Y) == 0


def test_monomial_commuting_pair():
    H = from_monomials([(1.0, PX, PY)])
    assert H.A[PX, PY] == H.A[PY, PX] == 0.5
    assert np.count_nonzero(H.A) == 2
    assert H.c0 == 0


def test_monomial_ordering_constant():
    g = 0.3
    H = from_monomials([(g, Y, PY)])
    assert H.A[Y, PY] == H.A[PY, Y] == g / 2
    # y p_y = (y p_y + p_y y)/2 + i/2
    assert H.c0 == pytest.approx(1j * g / 2)
    H2 = from_monomials([(g, Y, PY), (-g, X, PX)])
    assert H2.c0 == 0


def test_monomial_reversed_order_flips_constant():
    assert from_monomials([(1.0, PY, Y)]).c0 == pytest.approx(-0.5j)


def test_monomial_index_range():
    with pytest.raises(InvalidArgumentError):
        from_monomials([(1.0, 0, 4)])
    with pytest.raises(InvalidArgumentError):
        from_monomials([(1.0, -1, 0)])


def test_pt_hamiltonian_bare():
    H = pt_paper_hamiltonian(1, 0, 0)
    expected = np.zeros((4, 4))
    expected[X, Y] = expected[Y, X] = 0.5
    expected[PX, PY] = expected[PY, PX] = 0.5
    np.testing.assert_array_equal(H.A, expected)


def test_pt_hamiltonian_entries():
    H = pt_paper_hamiltonian(1, 0.05, 0.5)
    A = H.A
    assert A[X, Y] == A[Y, X] == pytest.approx((1 - 0.0025) / 2, abs=1e-15)
    assert A[X, X] == A[Y, Y] == 0.25
    assert A[X, PX] == A[PX, X] == -0.025
    assert A[Y, PY] == A[PY, Y] == 0.025
    assert A[PX, PY] == A[PY, PX] == 0.5
    assert A[PX, PX] == A[PY, PY] == A[X, PY] == A[Y, PX] == 0
    assert H.c0 == 0
    assert H.is_real


@given(reals, reals, reals)
def test_pt_hamiltonian_matches_monomials(w, g, e):
    direct = pt_paper_hamiltonian(w, g, e)
    built = from_monomials(paper_monomials(w, g, e))
    np.testing.assert_allclose(built.A, direct.A, rtol=0, atol=1e-15)
    assert built.c0 == direct.c0 == 0


@given(st.lists(st.tuples(st.complex_numbers(max_magnitude=10), st.integers(0, 3), st.integers(0, 3)), max_size=8))
def test_constructors_symmetric(terms):
    H = from_monomials(terms)
    assert np.max(np.abs(H.A - H.A.T), initial=0) == 0


def test_direct_construction_symmetrizes():
    raw = np.arange(16, dtype=float).reshape(4, 4)
    H = QuadraticHamiltonian(raw)
    assert np.array_equal(H.A, H.A.T)
    with pytest.raises(ValueError):
        H.A[0, 0] = 1


@given(st.floats(0.1, 3), st.floats(0, 2), st.floats(0, 3))
def test_pt_invariance(w, g, e):
    H = pt_paper_hamiltonian(w, g, e)
    assert pt_transform(H) == H


def test_parity_alone_is_not_a_symmetry():
    from ptcoupled.operator_core import PARITY

    H = pt_paper_hamiltonian(1, 0.05, 0.5)
    P_only = QuadraticHamiltonian(PARITY.T @ H.A @ PARITY)
    assert P_only != H


def test_json_roundtrip():
    H = from_monomials([(0.3, Y, PY), (1 + 2j, X, X)])
    data = H.to_json()
    assert data["A"][Y][PY] == [0.15, 0.0]
    back = QuadraticHamiltonian.from_json(data)
    assert back == H
    P = pt_paper_hamiltonian(2, 0.1, 2.0)
    assert QuadraticHamiltonian.from_json(P.to_json()).params == P.params

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptcoupled.errors import InvalidArgumentError, NumericalFailureError
from ptcoupled.polyroots import durand_kerner, faddeev_leverrier, matrix_eigenvalues


def match(u, v):
    u, v = list(u), list(v)
    return min(max(abs(a - b) for a, b in zip(u, p)) for p in itertools.permutations(v))


@given(st.integers(1, 6), st.integers(0, 10_000))
def test_faddeev_leverrier_matches_numpy_poly(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    np.testing.assert_allclose(faddeev_leverrier(M), np.poly(M), atol=1e-10)


def test_faddeev_leverrier_known():
    # det(l I - diag(1, 2)) = l^2 - 3 l + 2
    np.testing.assert_allclose(faddeev_leverrier(np.diag([1.0, 2.0])), [1, -3, 2])
    with pytest.raises(InvalidArgumentError):
        faddeev_leverrier(np.ones((2, 3)))


@settings(max_examples=60)
@given(st.lists(st.complex_numbers(max_magnitude=3), min_size=1, max_size=6))
def test_durand_kerner_recovers_separated_roots(roots):
    roots = np.array(roots)
    gaps = [abs(a - b) for a, b in itertools.combinations(roots, 2)]
    if gaps and min(gaps) < 0.1:
        return
    found = durand_kerner(np.poly(roots))
    assert match(found, roots) < 1e-9


@pytest.mark.parametrize(
    "coeffs, expected",
    [
        ([1, 0, -2, 0, 1], [1, 1, -1, -1]),
        ([1, 0, 2, 0, 1], [1j, 1j, -1j, -1j]),
        ([1, -3, 3, -1], [1, 1, 1]),
        ([1, 0, 0], [0, 0]),
    ],
)
def test_durand_kerner_multiple_roots(coeffs, expected):
    assert match(durand_kerner(coeffs), expected) < 1e-12


def test_durand_kerner_trims_leading_zeros_and_rejects_zero():
    assert match(durand_kerner([0, 2, -4]), [2]) < 1e-14
    with pytest.raises(InvalidArgumentError):
        durand_kerner([0, 0])


def test_durand_kerner_iteration_cap():
    with pytest.raises(NumericalFailureError) as info:
        durand_kerner(np.poly([1, 2, 3, 4, 5, 6]), max_iter=2)
    assert "residuals" in info.value.diagnostics


def test_matrix_eigenvalues_against_numpy():
    rng = np.random.default_rng(7)
    M = rng.standard_normal((6, 6))
    assert match(matrix_eigenvalues(M), np.linalg.eigvals(M)) < 1e-9

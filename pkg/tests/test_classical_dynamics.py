import math

import numpy as np
import pytest

from conftest import REF
from ptcoupled.adjoint_spectrum import adjoint_matrix, closed_form_frequencies
from ptcoupled.classical_dynamics import (
    ClassicalSystem,
    Trajectory,
    classical_matrix,
    extract_frequencies,
    integrate,
    random_initial_states,
    spectral_peaks,
)
from ptcoupled.errors import InvalidArgumentError
from ptcoupled.operator_core import QuadraticHamiltonian, pt_paper_hamiltonian, symplectic_form
from ptcoupled.polyroots import matrix_eigenvalues

Z0 = [0.3, -0.7, 0.5, 0.2]


def deviation(u, v):
    import itertools

    return min(max(abs(a - b) for a, b in zip(u, p)) for p in itertools.permutations(v))


def unit_oscillator(omega=1.0):
    return QuadraticHamiltonian(np.diag([omega**2 / 2, 0.5]))


def test_classical_matrix_oscillator():
    w = 1.4
    K = classical_matrix(unit_oscillator(w)).K
    np.testing.assert_allclose(K, [[0, 1], [-w * w, 0]], atol=1e-15)


def test_classical_matrix_is_hamilton_equations():
    H = pt_paper_hamiltonian(*REF)
    K = classical_matrix(H).K
    np.testing.assert_allclose(K, 2 * symplectic_form(2) @ H.A.real, atol=1e-15)


def test_classical_spectrum_reference():
    K = classical_matrix(pt_paper_hamiltonian(*REF)).K
    freqs = closed_form_frequencies(*REF)
    expected = [1j * freqs.lambda1, -1j * freqs.lambda1, 1j * freqs.lambda2, -1j * freqs.lambda2]
    assert deviation(np.linalg.eigvals(K), expected) < 1e-12
    assert abs(freqs.lambda1 - 1.2185743) < 1e-7


def test_classical_spectrum_is_i_times_adjoint():
    for p in [(1, 0.2, 0.7), (2, 0.3, 1.0), (1, 0.5, 0.1)]:
        H = pt_paper_hamiltonian(*p)
        k = np.linalg.eigvals(classical_matrix(H).K)
        m = 1j * matrix_eigenvalues(adjoint_matrix(H).M)
        assert deviation(k, m) < 1e-10


def test_broken_is_unstable():
    K = classical_matrix(pt_paper_hamiltonian(1, 0.5, 0.1)).K
    assert np.max(np.linalg.eigvals(K).real) > 0.1


def test_classical_matrix_rejects_complex():
    with pytest.raises(InvalidArgumentError):
        classical_matrix(QuadraticHamiltonian(np.array([[1j, 0], [0, 1]])))


def test_integrate_zero_flow():
    traj = integrate(ClassicalSystem(np.zeros((4, 4))), Z0, 0.1, 10)
    assert np.all(traj.states == np.array(Z0))
    assert traj.n_steps == 10
    assert traj.energy is None


def test_integrate_unit_oscillator_period():
    n = 629
    traj = integrate(classical_matrix(unit_oscillator()), [1.0, 0.0], 2 * math.pi / n, n)
    np.testing.assert_allclose(traj.states[-1], [1.0, 0.0], atol=1e-8)
    assert traj.times[-1] == pytest.approx(2 * math.pi)


def test_integrate_energy_conservation():
    traj = integrate(classical_matrix(pt_paper_hamiltonian(*REF)), Z0, 0.01, 20000)
    assert not traj.diverged
    assert traj.energy_drift < 1e-8


def test_integrate_argument_checks():
    sys = classical_matrix(unit_oscillator())
    with pytest.raises(InvalidArgumentError):
        integrate(sys, [1, 0], 0.0, 10)
    with pytest.raises(InvalidArgumentError):
        integrate(sys, [1, 0], 0.1, 1)
    with pytest.raises(InvalidArgumentError):
        integrate(sys, [1, 0, 0], 0.1, 10)


def test_divergence_flag_truncates():
    traj = integrate(classical_matrix(pt_paper_hamiltonian(1, 0.05, 1.5)), Z0, 0.05, 10000)
    assert traj.diverged
    assert traj.n_steps < 10000
    with pytest.raises(InvalidArgumentError):
        extract_frequencies(traj)


def test_boundedness_and_divergence_over_random_starts():
    starts = random_initial_states(20, seed=2024)
    np.testing.assert_allclose(np.linalg.norm(starts, axis=1), 1)
    unbroken = classical_matrix(pt_paper_hamiltonian(*REF))
    for z0 in starts:
        traj = integrate(unbroken, z0, 0.05, 10000)
        assert not traj.diverged
        assert np.max(np.abs(traj.states)) <= 10
    for p in [(1, 0.5, 0.1), (1, 0.05, 1.5)]:
        broken = classical_matrix(pt_paper_hamiltonian(*p))
        assert all(integrate(broken, z0, 0.05, 10000).diverged for z0 in starts)


def test_random_initial_states_deterministic():
    np.testing.assert_array_equal(random_initial_states(3, 9), random_initial_states(3, 9))


def test_spectral_peak_pure_cosine():
    t = 0.05 * np.arange(4096)
    peaks = spectral_peaks(np.cos(1.0 * t), 0.05)
    assert abs(peaks[0][0] - 1.0) < 0.01
    assert peaks[0][1] == pytest.approx(1.0, rel=0.1)
    with pytest.raises(InvalidArgumentError):
        spectral_peaks(np.ones(100), 0.05)


def test_extract_reference_frequencies():
    traj = integrate(classical_matrix(pt_paper_hamiltonian(*REF)), Z0, 0.05, 8192)
    peaks = sorted(f for f, _ in extract_frequencies(traj)[:2])
    assert abs(peaks[0] - 0.7106874) < 0.01
    assert abs(peaks[1] - 1.2185743) < 0.01


def test_extract_requires_power_of_two():
    traj = integrate(classical_matrix(unit_oscillator()), [1.0, 0.0], 0.05, 1000)
    with pytest.raises(InvalidArgumentError):
        extract_frequencies(traj)


def test_exceptional_point_single_peak():
    g = 0.3
    e = 2 * g * math.sqrt(1 - g * g)
    traj = integrate(classical_matrix(pt_paper_hamiltonian(1, g, e)), Z0, 0.05, 8192)
    peaks = extract_frequencies(traj)
    assert len(peaks) == 1
    assert abs(peaks[0][0] - math.sqrt(1 - 2 * g * g)) < 0.01


def test_trajectory_energy_drift_zero_energy():
    traj = Trajectory(0.1, np.zeros((3, 2)), energy=np.array([0.0, 1e-3, 0.0]))
    assert traj.energy_drift == 1e-3

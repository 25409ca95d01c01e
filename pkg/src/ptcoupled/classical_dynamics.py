"""Classical flow of a quadratic Hamiltonian and frequency extraction.

Hamilton's equations for ``H = z^T A z`` are linear, ``dz/dt = K z`` with
``K = 2 J A``.  Replacing commutators by ``i`` times Poisson brackets gives the
same matrix from the adjoint representation, ``K = -R^T`` where ``M = i R``,
so the classical growth rates are ``i`` times the quantum mode frequencies.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .adjoint_spectrum import adjoint_matrix
from .errors import InvalidArgumentError
from .operator_core import QuadraticHamiltonian

OVERFLOW_GUARD = 1e12


@dataclass(frozen=True, eq=False)
class ClassicalSystem:
    K: np.ndarray
    hamiltonian: QuadraticHamiltonian | None = None

    def energy(self, states: np.ndarray) -> np.ndarray:
        if self.hamiltonian is None:
            raise InvalidArgumentError("system has no attached Hamiltonian")
        return np.asarray(self.hamiltonian.classical_value(states)).real


def classical_matrix(H: QuadraticHamiltonian) -> ClassicalSystem:
    if np.any(H.A.imag != 0):
        raise InvalidArgumentError("classical flow needs a real Hamiltonian")
    R = (adjoint_matrix(H).M / 1j).real
    return ClassicalSystem(-R.T, H)


@dataclass(frozen=True, eq=False)
class Trajectory:
    dt: float
    states: np.ndarray
    diverged: bool = False
    energy: np.ndarray | None = None

    @property
    def n_steps(self) -> int:
        return len(self.states) - 1

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.states))

    @property
    def energy_drift(self) -> float:
        """``max |H(t) - H(0)| / |H(0)|`` (absolute when ``H(0) = 0``)."""
        if self.energy is None or len(self.energy) == 0:
            return float("nan")
        h0 = self.energy[0]
        drift = float(np.max(np.abs(self.energy - h0)))
        return drift / abs(h0) if h0 != 0 else drift


def integrate(sys: ClassicalSystem, z0, dt: float, n_steps: int) -> Trajectory:
    """Fixed-step classical RK4; stops early and flags divergence past the overflow guard."""
    if not dt > 0:
        raise InvalidArgumentError("dt must be positive")
    if n_steps < 2:
        raise InvalidArgumentError("n_steps must be at least 2")
    K = np.asarray(sys.K, dtype=float)
    z = np.asarray(z0, dtype=float).copy()
    if z.shape != (K.shape[0],):
        raise InvalidArgumentError(f"initial state must have length {K.shape[0]}")
    # RK4 on a linear system is one fixed matrix polynomial per step
    Kdt = K * dt
    step = np.eye(len(z))
    term = np.eye(len(z))
    for order in range(1, 5):
        term = term @ Kdt / order
        step = step + term

    states = np.empty((n_steps + 1, len(z)))
    states[0] = z
    diverged = False
    last = n_steps
    for i in range(1, n_steps + 1):
        z = step @ z
        states[i] = z
        if not np.all(np.isfinite(z)) or np.max(np.abs(z)) > OVERFLOW_GUARD:
            diverged = True
            last = i
            break
    states = states[: last + 1]
    energy = sys.energy(states) if sys.hamiltonian is not None else None
    return Trajectory(dt, states, diverged, energy)


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def spectral_peaks(signal, dt: float, rel_threshold: float = 0.05, max_peaks: int | None = None):
    """Peaks of a Hann-windowed real spectrum as ``(angular_frequency, amplitude)``.

    Peak positions are refined by a parabola through the log-magnitudes of the
    three bins around each local maximum.  Amplitudes are normalized so a
    cosine of amplitude A reports about A.
    """
    x = np.asarray(signal, dtype=float)
    n = len(x)
    if not _is_power_of_two(n):
        raise InvalidArgumentError(f"signal length must be a power of two, got {n}")
    window = np.hanning(n)
    spectrum = np.abs(np.fft.rfft((x - x.mean()) * window)) * 2 / window.sum()
    if spectrum.max() == 0:
        return []
    d_omega = 2 * np.pi / (n * dt)
    logmag = np.log(np.maximum(spectrum, np.finfo(float).tiny))
    peaks = []
    for i in range(1, len(spectrum) - 1):
        if spectrum[i] > spectrum[i - 1] and spectrum[i] >= spectrum[i + 1]:
            if spectrum[i] < rel_threshold * spectrum.max():
                continue
            l, c, r = logmag[i - 1], logmag[i], logmag[i + 1]
            denom = l - 2 * c + r
            offset = 0.5 * (l - r) / denom if denom != 0 else 0.0
            height = c - 0.25 * (l - r) * offset
            peaks.append(((i + offset) * d_omega, float(np.exp(height))))
    peaks.sort(key=lambda p: -p[1])
    return peaks[:max_peaks] if max_peaks is not None else peaks


def extract_frequencies(traj: Trajectory, component: int = 0, **kwargs):
    """Dominant angular frequencies of one phase-space coordinate (x by default)."""
    if traj.diverged:
        raise InvalidArgumentError("cannot extract frequencies from a diverged trajectory")
    if not _is_power_of_two(traj.n_steps):
        raise InvalidArgumentError(f"n_steps must be a power of two, got {traj.n_steps}")
    return spectral_peaks(traj.states[: traj.n_steps, component], traj.dt, **kwargs)


def random_initial_states(count: int, seed: int, dim: int = 4) -> np.ndarray:
    """Unit-norm initial conditions from a seeded generator."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)

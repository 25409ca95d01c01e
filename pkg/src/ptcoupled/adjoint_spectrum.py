"""Adjoint matrix representation, mode frequencies and ladder operators.

For a quadratic Hamiltonian ``H`` and canonical operators ``O_i`` the
commutators close on the basis, ``[H, O_i] = sum_j M_ji O_j`` with
``M = 2i A J``.  Eigenvectors ``C`` of ``M`` give ladder operators
``Z = sum_i C_i O_i`` obeying ``[H, Z] = lambda Z``.

The closed forms below are specific to the coupled gain/loss pair built by
:func:`ptcoupled.operator_core.pt_paper_hamiltonian`.
"""
from __future__ import annotations

import cmath
import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateModeError,
    InvalidArgumentError,
    NumericalFailureError,
    SingularParametersError,
)
from .operator_core import QuadraticHamiltonian, symplectic_form
from .polyroots import matrix_eigenvalues

DEFAULT_TOL = 1e-9
# roots closer than this (relative) count as one repeated frequency
DEGENERACY_TOL = 1e-6


def csqrt(z) -> complex:
    """Principal square root with the cut on the negative real axis.

    A negative zero imaginary part is treated as +0 so that ``csqrt(-x)`` is
    always ``+i sqrt(x)``.
    """
    z = complex(z)
    return cmath.sqrt(complex(z.real, z.imag + 0.0))


@dataclass(frozen=True, eq=False)
class AdjointMatrix:
    M: np.ndarray

    def __post_init__(self):
        M = np.array(self.M, dtype=complex)
        M.setflags(write=False)
        object.__setattr__(self, "M", M)

    @property
    def n_dof(self) -> int:
        return self.M.shape[0] // 2

    def commutator_coeffs(self, coeffs) -> np.ndarray:
        """Coefficients of ``[H, Z]`` for ``Z = sum_i coeffs_i O_i``."""
        return self.M @ np.asarray(coeffs, dtype=complex)


def adjoint_matrix(H: QuadraticHamiltonian) -> AdjointMatrix:
    # [O_i O_j, O_k] = i (J_jk O_i + J_ik O_j)  =>  M = 2i A J
    return AdjointMatrix(2j * H.A @ symplectic_form(H.n_dof))


@dataclass(frozen=True)
class ModeFrequencies:
    """Roots of ``det(M - lambda I)`` grouped into ``+/-`` pairs.

    ``principal`` holds one member of each pair (positive real part, or
    non-negative imaginary part when the real part vanishes) sorted by
    decreasing real part; ``all_roots`` is ``principal`` followed by its
    negation.
    """

    principal: tuple[complex, ...]
    tol: float = DEFAULT_TOL

    @property
    def lambda1(self) -> complex:
        return self.principal[0]

    @property
    def lambda2(self) -> complex:
        return self.principal[1]

    @property
    def all_roots(self) -> tuple[complex, ...]:
        return tuple(self.principal) + tuple(-lam for lam in self.principal)

    @property
    def is_real(self) -> tuple[bool, ...]:
        return tuple(abs(lam.imag) < self.tol * (1 + abs(lam)) for lam in self.all_roots)

    @property
    def all_real(self) -> bool:
        return all(self.is_real)

    @property
    def degenerate(self) -> bool:
        p = self.principal
        return any(
            abs(p[i] - p[j]) < DEGENERACY_TOL * (1 + abs(p[i]))
            for i in range(len(p))
            for j in range(i + 1, len(p))
        )

    def identities(self) -> tuple[complex, complex]:
        """``(lambda1^2 + lambda2^2, lambda1^2 lambda2^2)``."""
        s1, s2 = self.lambda1**2, self.lambda2**2
        return s1 + s2, s1 * s2


def _principal_order(tol):
    def cmp(u, v):
        scale = tol * (1 + max(abs(u), abs(v)))
        if abs(u.real - v.real) > scale:
            return -1 if u.real > v.real else 1
        if abs(u.imag - v.imag) > scale:
            return -1 if u.imag > v.imag else 1
        return 0

    return functools.cmp_to_key(cmp)


def pair_roots(roots, tol: float = DEFAULT_TOL) -> tuple[complex, ...]:
    """Split a negation-closed root set into principal representatives."""
    remaining = [complex(r) for r in roots]
    if len(remaining) % 2:
        raise InvalidArgumentError("root set of odd size cannot be closed under negation")
    scale = 1 + max((abs(r) for r in remaining), default=0.0)
    principal = []
    while remaining:
        r = remaining.pop(0)
        k = min(range(len(remaining)), key=lambda i: abs(remaining[i] + r))
        partner = remaining.pop(k)
        if abs(partner + r) > 1e-6 * scale:
            raise NumericalFailureError(
                "root set is not closed under negation",
                {"root": r, "closest_partner": partner},
            )
        rep = (r - partner) / 2
        if abs(rep.real) <= tol * (1 + abs(rep)):
            if rep.imag < 0:
                rep = -rep
        elif rep.real < 0:
            rep = -rep
        principal.append(rep)
    return tuple(sorted(principal, key=_principal_order(tol)))


def eigenfrequencies(M: AdjointMatrix | np.ndarray, tol: float = DEFAULT_TOL) -> ModeFrequencies:
    if tol <= 0:
        raise InvalidArgumentError("tol must be positive")
    matrix = M.M if isinstance(M, AdjointMatrix) else np.asarray(M)
    roots = matrix_eigenvalues(matrix)
    return ModeFrequencies(pair_roots(roots, tol), tol)


def mode_frequencies(H: QuadraticHamiltonian, tol: float = DEFAULT_TOL) -> ModeFrequencies:
    return eigenfrequencies(adjoint_matrix(H), tol)


def closed_form_frequencies(
    omega: float, gamma: float, epsilon: float, tol: float = DEFAULT_TOL
) -> ModeFrequencies:
    inner = epsilon**2 + 4 * gamma**4 - 4 * gamma**2 * omega**2
    base = omega**2 - 2 * gamma**2
    root = csqrt(inner)
    lam1 = csqrt(root + base)
    lam2 = csqrt(-root + base)
    return ModeFrequencies((lam1, lam2), tol)


@dataclass(frozen=True)
class LadderOperator:
    coeffs: np.ndarray
    lam: complex

    def residual(self, M: AdjointMatrix) -> float:
        C = self.coeffs
        return float(np.linalg.norm(M.M @ C - self.lam * C) / np.linalg.norm(C))


def ladder_coefficients(M: AdjointMatrix, lam: complex, tol: float = 1e-8) -> LadderOperator:
    """Ladder operator ``Z`` with ``[H, Z] = lam Z``.

    ``lam`` is snapped to the nearest computed root within ``tol`` (relative).
    Coefficients are scaled so the largest-magnitude entry equals 1.
    """
    roots = matrix_eigenvalues(M.M)
    dist = np.abs(roots - lam)
    nearest = int(np.argmin(dist))
    if dist[nearest] > tol * (1 + abs(lam)):
        raise InvalidArgumentError(f"{lam!r} is not an eigenvalue of the adjoint matrix")
    root = complex(roots[nearest])
    multiplicity = int(np.sum(np.abs(roots - root) < DEGENERACY_TOL * (1 + abs(root))))

    shifted = M.M - root * np.eye(M.M.shape[0])
    _, sing, vh = np.linalg.svd(shifted)
    if multiplicity > 1:
        geometric = int(np.sum(sing < 1e-8 * (1 + sing[0])))
        kind = "defective (exceptional point)" if geometric < multiplicity else "degenerate"
        raise DegenerateModeError(
            f"frequency {root!r} has multiplicity {multiplicity} and is {kind}; "
            "no unique ladder operator"
        )
    C = vh[-1].conj()
    mags = np.abs(C)
    pivot = int(np.flatnonzero(mags >= (1 - 1e-9) * mags.max())[0])
    C = C / C[pivot]
    C.setflags(write=False)
    op = LadderOperator(C, root)
    if op.residual(M) > 1e-10:
        raise NumericalFailureError(
            "ladder coefficients fail the eigen-equation", {"residual": op.residual(M), "lambda": root}
        )
    return op


@dataclass(frozen=True)
class GroundStateParams:
    """Gaussian ground-state data of the coupled pair.

    ``a`` is the chosen branch ``+sqrt(xi1)``; ``b`` and ``c`` multiply ``x^2``
    and ``y^2`` respectively and ``delta = sqrt(b c - gamma^2)``.
    """

    a: complex
    b: complex
    c: complex
    delta: complex
    xi1: complex
    xi2: complex

    @property
    def a_roots(self) -> tuple[complex, complex, complex, complex]:
        """All four roots of the quartic in ``a``: ``-sqrt(xi1), sqrt(xi1), -sqrt(xi2), sqrt(xi2)``."""
        r1, r2 = csqrt(self.xi1), csqrt(self.xi2)
        return (-r1, r1, -r2, r2)


def xi_roots(omega: float, gamma: float, epsilon: float) -> tuple[complex, complex]:
    root = csqrt(omega**4 - epsilon**2)
    base = omega**2 - 2 * gamma**2
    return (base - root) / 2, (base + root) / 2


def a_quartic(a: complex, omega: float, gamma: float, epsilon: float) -> complex:
    return (
        4 * a**4
        + 4 * a**2 * (2 * gamma**2 - omega**2)
        + epsilon**2
        + 4 * gamma**2 * (gamma**2 - omega**2)
    )


def ground_state_params(omega: float, gamma: float, epsilon: float) -> GroundStateParams:
    xi1, xi2 = xi_roots(omega, gamma, epsilon)
    a = csqrt(xi1)
    small = 1e-12 * max(abs(omega), 1.0)
    if epsilon == 0 or abs(a + 1j * gamma) <= small or abs(a - 1j * gamma) <= small:
        raise SingularParametersError(
            f"Gaussian exponent undefined at omega={omega}, gamma={gamma}, epsilon={epsilon} "
            "(a +/- i gamma vanishes)"
        )
    b = epsilon / (2 * (a + 1j * gamma))
    c = epsilon / (2 * (a - 1j * gamma))
    delta = csqrt(b * c - gamma**2)
    return GroundStateParams(a=a, b=b, c=c, delta=delta, xi1=xi1, xi2=xi2)


def energy(n: int, k: int, freqs: ModeFrequencies, gs: GroundStateParams | complex) -> complex:
    """``n lambda1 - k lambda2 + a``: n quanta up the first ladder, k down the second."""
    if n < 0 or k < 0:
        raise InvalidArgumentError("quantum numbers must be non-negative")
    a = gs.a if isinstance(gs, GroundStateParams) else complex(gs)
    return n * freqs.lambda1 - k * freqs.lambda2 + a


def energy_mn(m: int, n: int, gs: GroundStateParams) -> complex:
    """``(m + 1) a + (2n - m) delta`` for ``0 <= n <= m``."""
    if not 0 <= n <= m:
        raise InvalidArgumentError("need 0 <= n <= m")
    return (m + 1) * gs.a + (2 * n - m) * gs.delta


class PhaseRegion(str, enum.Enum):
    UNBROKEN = "Unbroken"
    BROKEN_LOW = "BrokenLow"
    BROKEN_HIGH = "BrokenHigh"
    BOUNDARY = "Boundary"

    def __str__(self):
        return self.value


def rescale(omega: float, gamma: float, epsilon: float) -> tuple[tuple[float, float, float], float]:
    """Map to unit ``omega``; frequencies and ``a`` scale back by the returned factor."""
    if not omega > 0:
        raise InvalidArgumentError(f"omega must be positive, got {omega}")
    return (1.0, gamma / omega, epsilon / omega**2), omega


def lower_threshold(omega: float, gamma: float) -> float:
    """Coupling at which the two frequencies coalesce, ``2 gamma sqrt(omega^2 - gamma^2)``."""
    return 2 * gamma * math.sqrt(max(omega**2 - gamma**2, 0.0))


def phase_classify(omega: float, gamma: float, epsilon: float, tol: float = DEFAULT_TOL) -> PhaseRegion:
    """Classify by the reality window ``lower < epsilon < omega^2``.

    The window alone is sufficient only for ``2 gamma^2 < omega^2``; above
    that the second frequency is imaginary for every coupling, so the point is
    broken.  Bands of width ``tol`` (in units of ``omega^2``) around each edge
    are reported as Boundary.
    """
    if not omega > 0 or gamma < 0 or epsilon < 0:
        raise InvalidArgumentError("need omega > 0, gamma >= 0, epsilon >= 0")
    if tol <= 0:
        raise InvalidArgumentError("tol must be positive")
    (_, g, e), _ = rescale(omega, gamma, epsilon)
    if e > 1 + tol:
        return PhaseRegion.BROKEN_HIGH
    if e >= 1 - tol:
        return PhaseRegion.BOUNDARY
    if 2 * g * g >= 1:
        return PhaseRegion.BROKEN_LOW
    lower = lower_threshold(1.0, g)
    if e > lower + tol:
        return PhaseRegion.UNBROKEN
    if e < lower - tol:
        return PhaseRegion.BROKEN_LOW
    return PhaseRegion.BOUNDARY

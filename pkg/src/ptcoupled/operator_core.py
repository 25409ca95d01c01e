"""Quadratic Hamiltonians over canonical operators.

Operators are ordered as ``(x_1, ..., x_N, p_1, ..., p_N)`` with
``[O_i, O_j] = i J_ij``.  A Hamiltonian is stored as a complex symmetric
matrix ``A`` of the Weyl-symmetrized form plus a scalar ordering constant::

    H = sum_ij A_ij (O_i O_j + O_j O_i) / 2 + c0

For symmetric ``A`` the plain product ``sum_ij A_ij O_i O_j`` equals the
symmetrized one, so ``A`` can be read off a Hamiltonian term by term.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .errors import InvalidArgumentError

X, Y, PX, PY = 0, 1, 2, 3


class PaperParams(NamedTuple):
    omega: float
    gamma: float
    epsilon: float


def symplectic_form(n_dof: int) -> np.ndarray:
    """Standard symplectic matrix ``[[0, I], [-I, 0]]`` of size ``2 n_dof``."""
    if int(n_dof) != n_dof or n_dof < 1:
        raise InvalidArgumentError(f"n_dof must be a positive integer, got {n_dof!r}")
    n = int(n_dof)
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


@dataclass(frozen=True)
class CanonicalBasis:
    n_dof: int

    def __post_init__(self):
        symplectic_form(self.n_dof)  # validates

    @property
    def size(self) -> int:
        return 2 * self.n_dof

    @property
    def labels(self) -> tuple[str, ...]:
        if self.n_dof == 2:
            return ("x", "y", "px", "py")
        xs = tuple(f"x{k + 1}" for k in range(self.n_dof))
        return xs + tuple(f"p{k + 1}" for k in range(self.n_dof))

    def commutator(self, i: int, j: int) -> complex:
        """``[O_i, O_j]`` as a c-number."""
        return 1j * symplectic_form(self.n_dof)[i, j]


@dataclass(frozen=True, eq=False)
class QuadraticHamiltonian:
    A: np.ndarray
    c0: complex = 0j
    params: PaperParams | None = None
    n_dof: int = field(init=False)

    def __post_init__(self):
        A = np.array(self.A, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2 or A.shape[0] == 0:
            raise InvalidArgumentError(f"A must be a non-empty 2N x 2N matrix, got shape {A.shape}")
        A = (A + A.T) / 2
        A.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "n_dof", A.shape[0] // 2)

    @property
    def basis(self) -> CanonicalBasis:
        return CanonicalBasis(self.n_dof)

    @property
    def is_real(self) -> bool:
        return not np.any(self.A.imag) and self.c0.imag == 0

    def classical_value(self, z: np.ndarray) -> np.ndarray:
        """Evaluate the quadratic form at phase-space point(s) ``z`` (last axis)."""
        z = np.asarray(z)
        return np.einsum("...i,ij,...j->...", z, self.A.real if self.is_real else self.A, z) + (
            self.c0.real if self.is_real else self.c0
        )

    def to_json(self) -> dict:
        return {
            "n_dof": self.n_dof,
            "A": [[[float(v.real), float(v.imag)] for v in row] for row in self.A],
            "c0": [self.c0.real, self.c0.imag],
            "params": None if self.params is None else self.params._asdict(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuadraticHamiltonian":
        A = np.array([[complex(re, im) for re, im in row] for row in data["A"]])
        params = data.get("params")
        return cls(A, complex(*data["c0"]), None if params is None else PaperParams(**params))

    def __eq__(self, other):
        if not isinstance(other, QuadraticHamiltonian):
            return NotImplemented
        return (
            self.A.shape == other.A.shape
            and np.array_equal(self.A, other.A)
            and self.c0 == other.c0
        )

    __hash__ = None


def from_monomials(
    terms: Iterable[tuple[complex, int, int]], n_dof: int = 2, params: PaperParams | None = None
) -> QuadraticHamiltonian:
    """Build ``H = sum coeff * O_i O_j`` from ordered operator products."""
    J = symplectic_form(n_dof)
    size = 2 * n_dof
    A = np.zeros((size, size), dtype=complex)
    c0 = 0j
    for coeff, i, j in terms:
        for idx in (i, j):
            if not (isinstance(idx, (int, np.integer)) and 0 <= idx < size):
                raise InvalidArgumentError(f"basis index {idx!r} out of range for n_dof={n_dof}")
        A[i, j] += coeff / 2
        A[j, i] += coeff / 2
        # O_i O_j = sym(O_i O_j) + [O_i, O_j] / 2
        c0 += coeff * 1j * J[i, j] / 2
    return QuadraticHamiltonian(A, c0, params)


def pt_paper_hamiltonian(omega: float, gamma: float, epsilon: float) -> QuadraticHamiltonian:
    """``p_x p_y + g (y p_y - x p_x) + (w^2 - g^2) x y + e/2 (x^2 + y^2)``."""
    A = np.zeros((4, 4), dtype=complex)
    A[X, Y] = A[Y, X] = (omega**2 - gamma**2) / 2
    A[X, X] = A[Y, Y] = epsilon / 2
    A[PX, PY] = A[PY, PX] = 0.5
    A[X, PX] = A[PX, X] = -gamma / 2
    A[Y, PY] = A[PY, Y] = gamma / 2
    return QuadraticHamiltonian(A, 0j, PaperParams(float(omega), float(gamma), float(epsilon)))


def paper_monomials(omega: float, gamma: float, epsilon: float) -> list[tuple[complex, int, int]]:
    """The gain/loss pair Hamiltonian as a list of ordered products, as written."""
    return [
        (1.0, PX, PY),
        (gamma, Y, PY),
        (-gamma, X, PX),
        (omega**2 - gamma**2, X, Y),
        (epsilon / 2, X, X),
        (epsilon / 2, Y, Y),
    ]


# P: {x, y, px, py} -> {-y, -x, -py, -px}
PARITY = np.array(
    [
        [0, -1, 0, 0],
        [-1, 0, 0, 0],
        [0, 0, 0, -1],
        [0, 0, -1, 0],
    ],
    dtype=float,
)
# T: {x, y, px, py} -> {x, y, -px, -py}, plus complex conjugation
TIME_REVERSAL = np.diag([1.0, 1.0, -1.0, -1.0])


def pt_transform(H: QuadraticHamiltonian) -> QuadraticHamiltonian:
    """Apply the combined PT map to the quadratic form of a two-mode Hamiltonian."""
    if H.n_dof != 2:
        raise InvalidArgumentError("PT map is defined for two degrees of freedom")
    S = PARITY @ TIME_REVERSAL
    return QuadraticHamiltonian(S.T @ H.A.conj() @ S, H.c0.conjugate(), H.params)

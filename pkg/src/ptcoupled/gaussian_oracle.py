"""Exact operator algebra on polynomial-times-Gaussian wavefunctions.

A state is ``P(x, y) exp(-(b x^2 + c y^2 + 2 a x y))`` with ``P`` stored as a
coefficient table ``P[j, k]`` of ``x^j y^k``.  The class is closed under
multiplication by ``x``, ``y`` and under ``d/dx``, ``d/dy``, so every quadratic
Hamiltonian acts on it exactly; no grids or quadrature are involved.

The Gaussian ground state of the coupled pair uses the ground-state data
``(a, b, c)`` in the form ``exp(-(b x^2 + c y^2 + 2 a x y) / 2)``; that is the
normalization for which ``H psi_00 = a psi_00`` holds with
``b = epsilon / (2 (a + i gamma))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .adjoint_spectrum import (
    GroundStateParams,
    LadderOperator,
    ModeFrequencies,
    adjoint_matrix,
    eigenfrequencies,
    ground_state_params,
    ladder_coefficients,
)
from .errors import CapacityError, InvalidArgumentError
from .operator_core import PaperParams, QuadraticHamiltonian, pt_paper_hamiltonian, symplectic_form

DEFAULT_MAX_DEGREE = 16
VANISH_TOL = 1e-12
RESIDUAL_TOL = 1e-9

Params = Union[PaperParams, tuple, QuadraticHamiltonian]


@dataclass(frozen=True, eq=False)
class PolyGaussian:
    exponent: tuple[complex, complex, complex]  # (a_exp, b_exp, c_exp)
    poly: np.ndarray
    max_degree: int = DEFAULT_MAX_DEGREE

    def __post_init__(self):
        exponent = tuple(complex(v) for v in self.exponent)
        if len(exponent) != 3:
            raise InvalidArgumentError("exponent is (a_exp, b_exp, c_exp)")
        P = np.atleast_2d(np.array(self.poly, dtype=complex))
        d = max(P.shape) - 1
        if d > self.max_degree:
            raise CapacityError(f"polynomial degree bound {d} exceeds max_degree={self.max_degree}")
        if P.shape != (d + 1, d + 1):
            P = _pad(P, d)
        P.setflags(write=False)
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "poly", P)

    @classmethod
    def gaussian(cls, exponent, max_degree: int = DEFAULT_MAX_DEGREE) -> "PolyGaussian":
        return cls(exponent, np.ones((1, 1)), max_degree)

    @property
    def degree_bound(self) -> int:
        return self.poly.shape[0] - 1

    @property
    def degree(self) -> int:
        """Largest total degree carrying a nonzero coefficient (-1 for zero)."""
        j, k = np.nonzero(self.poly)
        return int((j + k).max()) if j.size else -1

    @property
    def normalizable(self) -> bool:
        a, b, c = self.exponent
        return b.real > 0 and c.real > 0 and b.real * c.real > a.real**2

    def resized(self, max_degree: int) -> "PolyGaussian":
        return PolyGaussian(self.exponent, self.poly, max_degree)

    def parity(self, tol: float = 0.0) -> int | None:
        """+1 or -1 if ``P(-x, -y) = +/- P(x, y)``; None when mixed."""
        j, k = np.nonzero(np.abs(self.poly) > tol)
        degrees = set(((j + k) % 2).tolist())
        if len(degrees) > 1:
            return None
        return -1 if degrees == {1} else 1

    def __call__(self, x, y):
        """Evaluate the wavefunction (for finite-difference checks)."""
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        a, b, c = self.exponent
        value = np.polynomial.polynomial.polyval2d(x, y, self.poly)
        return value * np.exp(-(b * x * x + c * y * y + 2 * a * x * y))

    def _with(self, P: np.ndarray) -> "PolyGaussian":
        return PolyGaussian(self.exponent, P, self.max_degree)

    def _check_compatible(self, other: "PolyGaussian"):
        if self.exponent != other.exponent:
            raise InvalidArgumentError("states with different Gaussian exponents cannot be combined")

    def __add__(self, other: "PolyGaussian") -> "PolyGaussian":
        self._check_compatible(other)
        d = max(self.degree_bound, other.degree_bound)
        return self._with(_pad(self.poly, d) + _pad(other.poly, d))

    def __sub__(self, other: "PolyGaussian") -> "PolyGaussian":
        return self + (-1) * other

    def __mul__(self, scalar) -> "PolyGaussian":
        return self._with(complex(scalar) * self.poly)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1) * self

    def max_abs(self) -> float:
        return float(np.abs(self.poly).max())

    # elementary actions --------------------------------------------------

    def _grown(self) -> np.ndarray:
        d = self.degree_bound + 1
        if d > self.max_degree:
            raise CapacityError(
                f"degree bound {d} exceeds max_degree={self.max_degree}; use resized()"
            )
        return np.zeros((d + 1, d + 1), dtype=complex)

    def mul_x(self) -> "PolyGaussian":
        out = self._grown()
        n = self.poly.shape[0]
        out[1 : n + 1, :n] = self.poly
        return self._with(out)

    def mul_y(self) -> "PolyGaussian":
        out = self._grown()
        n = self.poly.shape[0]
        out[:n, 1 : n + 1] = self.poly
        return self._with(out)

    def d_x(self) -> "PolyGaussian":
        # d/dx (P e^{-Q}) = (P_x - P Q_x) e^{-Q},  Q_x = 2 b x + 2 a y
        a, b, _ = self.exponent
        out = self._grown()
        n = self.poly.shape[0]
        j = np.arange(1, n)[:, None]
        out[: n - 1, :n] += j * self.poly[1:, :]
        shifted = self.mul_x().poly * (2 * b) + self.mul_y().poly * (2 * a)
        return self._with(out - shifted)

    def d_y(self) -> "PolyGaussian":
        a, _, c = self.exponent
        out = self._grown()
        n = self.poly.shape[0]
        k = np.arange(1, n)[None, :]
        out[:n, : n - 1] += k * self.poly[:, 1:]
        shifted = self.mul_y().poly * (2 * c) + self.mul_x().poly * (2 * a)
        return self._with(out - shifted)

    def p_x(self) -> "PolyGaussian":
        return -1j * self.d_x()

    def p_y(self) -> "PolyGaussian":
        return -1j * self.d_y()

    def basis_action(self, index: int) -> "PolyGaussian":
        """Apply canonical operator ``O_index`` of ``(x, y, p_x, p_y)``."""
        return (self.mul_x, self.mul_y, self.p_x, self.p_y)[index]()


def _pad(P: np.ndarray, d: int) -> np.ndarray:
    out = np.zeros((d + 1, d + 1), dtype=complex)
    out[: P.shape[0], : P.shape[1]] = P
    return out


class LinearOperatorAction(NamedTuple):
    """``alpha_x x + alpha_y y + alpha_px p_x + alpha_py p_y`` with ``p = -i d``."""

    alpha_x: complex
    alpha_y: complex
    alpha_px: complex
    alpha_py: complex

    @classmethod
    def from_ladder(cls, op: LadderOperator | np.ndarray) -> "LinearOperatorAction":
        coeffs = op.coeffs if isinstance(op, LadderOperator) else op
        if len(coeffs) != 4:
            raise InvalidArgumentError("wavefunction oracle supports two degrees of freedom")
        return cls(*(complex(c) for c in coeffs))


def apply_linear(op: LinearOperatorAction | LadderOperator, psi: PolyGaussian) -> PolyGaussian:
    if not isinstance(op, LinearOperatorAction):
        op = LinearOperatorAction.from_ladder(op)
    result = psi._with(np.zeros((1, 1)))
    for index, coeff in enumerate(op):
        if coeff != 0:
            result = result + coeff * psi.basis_action(index)
    return result


def apply_hamiltonian(omega: float, gamma: float, epsilon: float, psi: PolyGaussian) -> PolyGaussian:
    """Act with ``p_x p_y + g (y p_y - x p_x) + (w^2 - g^2) x y + e/2 (x^2 + y^2)``."""
    out = psi.p_y().p_x()
    out = out + gamma * (psi.p_y().mul_y() - psi.p_x().mul_x())
    out = out + (omega**2 - gamma**2) * psi.mul_y().mul_x()
    out = out + (epsilon / 2) * (psi.mul_x().mul_x() + psi.mul_y().mul_y())
    return out


def apply_quadratic(H: QuadraticHamiltonian, psi: PolyGaussian) -> PolyGaussian:
    """Act with a general two-mode quadratic Hamiltonian ``sum A_ij O_i O_j + c0``."""
    if H.n_dof != 2:
        raise InvalidArgumentError("wavefunction oracle supports two degrees of freedom")
    first = [psi.basis_action(j) for j in range(4)]
    out = H.c0 * psi
    for i in range(4):
        for j in range(4):
            if H.A[i, j] != 0:
                out = out + H.A[i, j] * first[j].basis_action(i)
    return out


def _apply_h(params: Params, psi: PolyGaussian) -> PolyGaussian:
    if isinstance(params, QuadraticHamiltonian):
        return apply_quadratic(params, psi)
    omega, gamma, epsilon = params
    return apply_hamiltonian(omega, gamma, epsilon, psi)


def eigen_residual(psi: PolyGaussian, E: complex, params: Params) -> float:
    """``max|H psi - E psi| / max|psi|`` over polynomial coefficients."""
    scale = psi.max_abs()
    if scale == 0:
        raise InvalidArgumentError("zero state has no eigenvalue")
    try:
        diff = _apply_h(params, psi) - E * psi
    except InvalidArgumentError:
        return float("inf")
    return diff.max_abs() / scale


def ground_state(gs: GroundStateParams, max_degree: int = DEFAULT_MAX_DEGREE) -> PolyGaussian:
    """Gaussian ``exp(-(b x^2 + c y^2 + 2 a x y) / 2)`` built from ground-state data."""
    return PolyGaussian.gaussian((gs.a / 2, gs.b / 2, gs.c / 2), max_degree)


@dataclass(frozen=True)
class LadderSet:
    """The four ladder operators of the coupled pair.

    ``Z1``/``Z2`` shift the energy by ``+lambda1``/``+lambda2`` and
    ``Z3``/``Z4`` by ``-lambda1``/``-lambda2``.
    """

    freqs: ModeFrequencies
    gs: GroundStateParams
    operators: tuple[LadderOperator, LadderOperator, LadderOperator, LadderOperator]
    params: PaperParams = field(default=None)

    def __getitem__(self, label: str) -> LadderOperator:
        return self.operators[int(label.lstrip("Zz")) - 1]

    def energy(self, n: int, k: int) -> complex:
        return n * self.freqs.lambda1 - k * self.freqs.lambda2 + self.gs.a


def ladder_set(params: Params) -> LadderSet:
    omega, gamma, epsilon = _pair_params(params)
    M = adjoint_matrix(pt_paper_hamiltonian(omega, gamma, epsilon))
    freqs = eigenfrequencies(M)
    lam1, lam2 = freqs.lambda1, freqs.lambda2
    ops = tuple(ladder_coefficients(M, lam) for lam in (lam1, lam2, -lam1, -lam2))
    return LadderSet(freqs, ground_state_params(omega, gamma, epsilon), ops, PaperParams(omega, gamma, epsilon))


def _pair_params(params: Params) -> PaperParams:
    if isinstance(params, QuadraticHamiltonian):
        if params.params is None:
            raise InvalidArgumentError("Hamiltonian was not built from (omega, gamma, epsilon)")
        return params.params
    return PaperParams(*(float(v) for v in params))


def build_state(
    n: int,
    k: int,
    params: Params,
    max_degree: int = DEFAULT_MAX_DEGREE,
    ladders: LadderSet | None = None,
) -> PolyGaussian:
    """``Z1^n Z4^k psi_00``, energy ``n lambda1 - k lambda2 + a``."""
    if n < 0 or k < 0:
        raise InvalidArgumentError("quantum numbers must be non-negative")
    if n + k > max_degree:
        raise CapacityError(f"n + k = {n + k} exceeds max_degree={max_degree}")
    ladders = ladders or ladder_set(params)
    if not ladders.freqs.all_real:
        raise InvalidArgumentError("eigenstates are only built for real, distinct frequencies")
    psi = ground_state(ladders.gs, max_degree)
    for _ in range(k):
        psi = apply_linear(ladders["Z4"], psi)
    for _ in range(n):
        psi = apply_linear(ladders["Z1"], psi)
    return psi


@dataclass(frozen=True)
class AnnihilationReport:
    magnitudes: dict[str, float]
    vanishes: dict[str, bool]

    @property
    def matches_expected(self) -> bool:
        """Z2 and Z3 annihilate the Gaussian, Z1 and Z4 do not."""
        return self.vanishes == {"Z1": False, "Z2": True, "Z3": True, "Z4": False}


def annihilation_check(params: Params, tol: float = VANISH_TOL) -> AnnihilationReport:
    ladders = ladder_set(params)
    psi0 = ground_state(ladders.gs)
    magnitudes = {}
    for idx, op in enumerate(ladders.operators, start=1):
        result = apply_linear(op, psi0)
        scale = psi0.max_abs() * float(np.abs(op.coeffs).max())
        magnitudes[f"Z{idx}"] = result.max_abs() / scale
    vanishes = {label: mag < tol for label, mag in magnitudes.items()}
    return AnnihilationReport(magnitudes, vanishes)


def commutator_defect(u, v, psi: PolyGaussian) -> float:
    """Max deviation of ``(UV - VU) psi`` from ``i u^T J v psi``."""
    U = LinearOperatorAction(*u)
    V = LinearOperatorAction(*v)
    lhs = apply_linear(U, apply_linear(V, psi)) - apply_linear(V, apply_linear(U, psi))
    expected = 1j * (np.asarray(u) @ symplectic_form(2) @ np.asarray(v))
    return (lhs - expected * psi).max_abs()

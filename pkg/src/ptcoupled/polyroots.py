"""Characteristic polynomials and simultaneous root iteration for tiny matrices."""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError

EPS = np.finfo(float).eps


def faddeev_leverrier(M: np.ndarray) -> np.ndarray:
    """Coefficients of ``det(lambda I - M)``, highest degree first (monic)."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgumentError(f"square matrix required, got shape {M.shape}")
    n = M.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    Mk = np.zeros_like(M)
    identity = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        Mk = M @ Mk + coeffs[k - 1] * identity
        coeffs[k] = -np.trace(M @ Mk) / k
    return coeffs


def horner(coeffs, z):
    """Value of the polynomial and of its rounding-error bound at ``z``."""
    value = 0j
    bound = 0.0
    az = abs(z)
    for c in coeffs:
        value = value * z + c
        bound = bound * az + abs(c)
    return value, bound


def _cauchy_radius(coeffs) -> float:
    return 1.0 + max((abs(c) for c in coeffs[1:]), default=0.0)


def durand_kerner(
    coeffs,
    max_iter: int = 200,
    step_tol: float = 1e-14,
    cluster_tol: float = 1e-4,
) -> np.ndarray:
    """All roots of a polynomial given highest-degree-first coefficients.

    Iteration stops when every root's last update is below
    ``step_tol * (1 + |z|)`` or its residual is at the rounding-error level of
    the Horner evaluation (the best attainable for a multiple root).  Roots
    closer than ``cluster_tol * (1 + |z|)`` are then replaced by their
    centroid, which is well conditioned even when the individual members of a
    multiple root are not.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        raise InvalidArgumentError("zero polynomial has no well-defined roots")
    coeffs = coeffs[nz[0]:] / coeffs[nz[0]]
    n = len(coeffs) - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    coeffs = [complex(c) for c in coeffs]

    radius = _cauchy_radius(coeffs)
    z = [radius * 0.5 * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]

    done = [False] * n
    for iteration in range(1, max_iter + 1):
        max_step = 0.0
        for i in range(n):
            value, bound = horner(coeffs, z[i])
            if abs(value) <= 4 * n * EPS * bound:
                done[i] = True
                continue
            denom = 1.0 + 0j
            for j in range(n):
                if j != i:
                    denom *= z[i] - z[j]
            if denom == 0:
                denom = EPS * (1 + abs(z[i]))
            step = value / denom
            z[i] -= step
            rel = abs(step) / (1 + abs(z[i]))
            done[i] = rel < step_tol
            max_step = max(max_step, rel)
        if all(done):
            break
    else:
        residuals = [abs(horner(coeffs, zi)[0]) for zi in z]
        raise NumericalFailureError(
            f"Durand-Kerner did not converge in {max_iter} iterations",
            {"roots": z, "residuals": residuals, "last_step": max_step, "coefficients": coeffs},
        )

    return merge_clusters(np.array(z), cluster_tol, coeffs)


def merge_clusters(roots: np.ndarray, cluster_tol: float, coeffs=None) -> np.ndarray:
    """Collapse clusters of nearly equal roots onto a single value.

    A root of multiplicity m is a simple root of the (m-1)-th derivative, so a
    Newton solve there started from the cluster centroid recovers it to full
    precision.  With ``coeffs`` a cluster is only merged when the polynomial
    vanishes to rounding level at the polished point, so close but distinct
    roots are left alone.  Without ``coeffs`` the centroid is used.
    """
    roots = np.asarray(roots, dtype=complex).copy()
    n = len(roots)
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = 1 + max(abs(roots[i]), abs(roots[j]))
            if abs(roots[i] - roots[j]) < cluster_tol * scale:
                label[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    for members in groups.values():
        if len(members) > 1:
            centre = roots[members].mean()
            spread = max(abs(roots[k] - centre) for k in members)
            if coeffs is not None:
                centre = _polish_multiple(coeffs, len(members), centre, spread)
                if centre is None:
                    continue
                value, bound = horner(coeffs, centre)
                if abs(value) > 16 * len(coeffs) * EPS * bound:
                    continue
            roots[members] = centre
    return roots


def _polish_multiple(coeffs, multiplicity: int, start: complex, spread: float) -> complex:
    deriv = np.asarray(coeffs, dtype=complex)
    for _ in range(multiplicity - 1):
        deriv = np.polyder(deriv)
    slope = np.polyder(deriv)
    z = start
    for _ in range(50):
        value = np.polyval(deriv, z)
        d = np.polyval(slope, z)
        if d == 0:
            break
        step = value / d
        z -= step
        if abs(step) <= EPS * (1 + abs(z)):
            break
    # a wandering Newton solve means the cluster was not a true multiple root
    if abs(z - start) > 10 * spread + EPS * (1 + abs(start)):
        return None
    return complex(z)


def matrix_eigenvalues(M: np.ndarray, **kwargs) -> np.ndarray:
    """Eigenvalues of a small dense matrix via its characteristic polynomial."""
    return durand_kerner(faddeev_leverrier(M), **kwargs)

"""Dense complex linear algebra for small systems.

Three routes: an LU solver with partial pivoting (hand-rolled, compiled with
numba), an eigensolver backed by LAPACK's Hessenberg + shifted-QR path, and
an independent polynomial-root oracle (Faddeev-LeVerrier characteristic
coefficients plus Durand-Kerner iteration) used to cross-check the
eigensolver without sharing any code with it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import NoConvergence, SingularMatrix

# Pivot magnitudes below PIVOT_RTOL * ||a||_inf count as singular.
PIVOT_RTOL = 1e-14

# Durand-Kerner stops when the largest root update falls below DK_TOL,
# or fails after DK_MAX_SWEEPS full sweeps.
DK_TOL = 1e-12
DK_MAX_SWEEPS = 10000

MAX_EIG_N = 16
MAX_POLY_N = 8


@dataclass(frozen=True)
class EigenResult:
    """Unordered eigenvalues and per-pair residuals ||A v - lambda v||."""

    values: np.ndarray
    residuals: np.ndarray


@njit(cache=True, nogil=True)
def _lu_solve_kernel(a, b):
    n = a.shape[0]
    lu = a.copy()
    x = b.copy()
    scale = 0.0
    for i in range(n):
        s = 0.0
        for j in range(n):
            s += abs(lu[i, j])
        if s > scale:
            scale = s
    if scale == 0.0:
        return x, False
    for k in range(n):
        p = k
        big = abs(lu[k, k])
        for i in range(k + 1, n):
            m = abs(lu[i, k])
            if m > big:
                big = m
                p = i
        if big < PIVOT_RTOL * scale:
            return x, False
        if p != k:
            for j in range(n):
                tmp = lu[k, j]
                lu[k, j] = lu[p, j]
                lu[p, j] = tmp
            tmpx = x[k]
            x[k] = x[p]
            x[p] = tmpx
        for i in range(k + 1, n):
            f = lu[i, k] / lu[k, k]
            lu[i, k] = f
            for j in range(k + 1, n):
                lu[i, j] -= f * lu[k, j]
            x[i] -= f * x[k]
    for i in range(n - 1, -1, -1):
        acc = x[i]
        for j in range(i + 1, n):
            acc -= lu[i, j] * x[j]
        x[i] = acc / lu[i, i]
    return x, True


def lu_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b by LU with partial pivoting.

    Raises SingularMatrix when a pivot magnitude drops below
    PIVOT_RTOL * ||a||_inf.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if b.shape != (a.shape[0],):
        raise ValueError(f"right-hand side shape {b.shape} does not match {a.shape}")
    x, ok = _lu_solve_kernel(a, b)
    if not ok:
        raise SingularMatrix("matrix is singular to working precision")
    return x


def eigenvalues(a: np.ndarray) -> EigenResult:
    """All eigenvalues of a small dense complex matrix, with residuals.

    Values are unordered; ordering and branch tracking are the caller's
    concern. Residual k is ||a v_k - lambda_k v_k||_2 for the computed
    eigenvector v_k (unit norm).
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_EIG_N:
        raise ValueError(f"designed for N <= {MAX_EIG_N}, got N = {a.shape[0]}")
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"QR iteration did not converge: {exc}") from exc
    residuals = np.linalg.norm(a @ vectors - vectors * values, axis=0)
    return EigenResult(values=values, residuals=residuals)


def _char_poly_coeffs(a: np.ndarray) -> np.ndarray:
    """Coefficients of det(lambda*I - a), highest power first (Faddeev-LeVerrier)."""
    n = a.shape[0]
    c = np.zeros(n + 1, dtype=np.complex128)
    c[0] = 1.0
    m = np.zeros_like(a)
    ident = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        m = a @ (m + c[k - 1] * ident)
        c[k] = -np.trace(m) / k
    return c


@njit(cache=True, nogil=True)
def _dk_kernel(c, tol, max_sweeps):
    n = c.shape[0] - 1
    radius = 1.0 + np.max(np.abs(c))
    z = np.empty(n, dtype=np.complex128)
    for j in range(n):
        ang = 2.0 * np.pi * j / n + 0.4
        z[j] = radius * (np.cos(ang) + 1j * np.sin(ang))
    for _ in range(max_sweeps):
        worst = 0.0
        for j in range(n):
            p = c[0]
            for k in range(1, n + 1):
                p = p * z[j] + c[k]
            q = 1.0 + 0.0j
            for k in range(n):
                if k != j:
                    q *= z[j] - z[k]
            step = p / q
            z[j] -= step
            mag = abs(step)
            if mag > worst:
                worst = mag
        if worst < tol:
            return z, True
    return z, False


def char_poly_roots(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a via characteristic-polynomial roots (independent oracle)."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_POLY_N:
        raise ValueError(f"designed for N <= {MAX_POLY_N}, got N = {a.shape[0]}")
    if a.shape[0] == 1:
        return a[0].copy()
    roots, ok = _dk_kernel(_char_poly_coeffs(a), DK_TOL, DK_MAX_SWEEPS)
    if not ok:
        raise NoConvergence(f"Durand-Kerner did not converge in {DK_MAX_SWEEPS} sweeps")
    return roots

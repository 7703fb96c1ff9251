"""Eigensolvers for the small dense sector matrices."""

from __future__ import annotations

import numpy as np

__all__ = ["jacobi_eigh", "real_eigvals", "NumericalContractError"]


class NumericalContractError(ArithmeticError):
    """A numerical contract (symmetry, realness, unit trace) was violated."""


def jacobi_eigh(a, tol: float = 1e-14, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as columns.  Iterates until the off-diagonal Frobenius norm
    drops below ``tol`` times the matrix norm.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("square matrix expected")
    v = np.eye(n)
    if n < 2:
        return np.diag(a).copy(), v
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2) * 2)
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # rotate rows/columns p and q
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise NumericalContractError("Jacobi iteration did not converge")
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], v[:, order]


def real_eigvals(a, imag_tol: float = 1e-10) -> np.ndarray:
    """Eigenvalues of a real, possibly non-symmetric matrix that must have a real spectrum.

    Uses LAPACK's Hessenberg reduction plus shifted QR (``numpy.linalg.eigvals``)
    and raises when any imaginary part exceeds ``imag_tol``.
    """
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return np.zeros(0)
    w = np.linalg.eigvals(a)
    worst = float(np.max(np.abs(w.imag))) if w.size else 0.0
    if worst > imag_tol:
        raise NumericalContractError(
            f"complex eigenvalue with imaginary part {worst:.3g} in a real-spectrum block")
    return np.sort(w.real)

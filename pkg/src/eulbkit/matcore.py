"""Dense complex linear algebra for single- and two-qubit operators.

Matrices are plain ``numpy`` arrays of shape (2, 2) or (4, 4). Two-qubit
operators use the computational basis ordering ``|00>, |01>, |10>, |11>``
with qubit A as the left tensor factor, so ``kron(a, b)`` acts with ``a``
on A and ``b`` on B.
"""

from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

_ALLOWED_DIMS = (2, 4)


class DimensionError(ValueError):
    """Raised when a matrix has a shape outside the supported set."""


class HermiticityError(ValueError):
    """Raised when a matrix expected to be Hermitian is not."""


class ConvergenceError(RuntimeError):
    """Raised when the Jacobi eigensolver exhausts its sweep budget."""


class HermitianSpectrum(NamedTuple):
    """Eigenvalues (descending) and matching eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a, dims=_ALLOWED_DIMS) -> np.ndarray:
    """Coerce ``a`` to a complex square matrix of an allowed dimension."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in dims:
        raise DimensionError(f"expected a square matrix with dim in {dims}, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def identity(dim: int) -> np.ndarray:
    if dim not in _ALLOWED_DIMS:
        raise DimensionError(f"unsupported dimension {dim}")
    return np.eye(dim, dtype=complex)


def kron(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices (A on the left)."""
    return np.kron(as_matrix(a, (2,)), as_matrix(b, (2,)))


def mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return a @ b


def add(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return a + b


def scale(a, s: complex) -> np.ndarray:
    return as_matrix(a) * s


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def partial_trace(rho, keep: Literal["A", "B"]) -> np.ndarray:
    """Reduce a two-qubit operator to the subsystem named by ``keep``."""
    r = as_matrix(rho, (4,)).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def hermiticity_defect(h) -> float:
    h = as_matrix(h)
    return float(np.max(np.abs(h - h.conj().T)))


def _check_hermitian(h) -> np.ndarray:
    h = as_matrix(h)
    defect = hermiticity_defect(h)
    if defect > HERMITIAN_TOL:
        raise HermiticityError(f"matrix is not Hermitian (max |h - h^dag| = {defect:.3e})")
    return (h + h.conj().T) / 2


def _sorted_spectrum(w: np.ndarray, v: np.ndarray) -> HermitianSpectrum:
    order = np.argsort(w)[::-1]
    return HermitianSpectrum(np.asarray(w, dtype=float)[order], v[:, order])


def _eig2(h: np.ndarray) -> HermitianSpectrum:
    # closed form for [[a, b], [b*, d]]
    a, d = h[0, 0].real, h[1, 1].real
    b = h[0, 1]
    mean = (a + d) / 2
    half = np.hypot((a - d) / 2, abs(b))
    w = np.array([mean + half, mean - half])
    if abs(b) == 0.0:
        v = np.eye(2, dtype=complex) if a >= d else np.array([[0, 1], [1, 0]], dtype=complex)
        return HermitianSpectrum(w, v)
    # (b, lambda - a) is an eigenvector of [[a, b], [b*, d]] for eigenvalue lambda
    cols = []
    for lam in w:
        u = np.array([b, lam - a], dtype=complex)
        alt = np.array([lam - d, np.conj(b)], dtype=complex)
        if np.linalg.norm(alt) > np.linalg.norm(u):
            u = alt
        cols.append(u / np.linalg.norm(u))
    return HermitianSpectrum(w, np.column_stack(cols))


def jacobi_eigh(h, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> HermitianSpectrum:
    """Cyclic complex Jacobi eigensolver.

    Iterates until the off-diagonal Frobenius norm drops below ``tol``
    (relative to the matrix norm when that exceeds one).
    """
    a = _check_hermitian(h).copy()
    n = a.shape[0]
    if n == 2:
        return _eig2(a)
    v = np.eye(n, dtype=complex)
    target = tol * max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = np.linalg.norm(a[~np.eye(n, dtype=bool)])
        if off < target:
            return _sorted_spectrum(np.diag(a).real, v)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                # unitary rotation zeroing a[p, q]
                phase = apq / abs(apq)
                theta = 0.5 * np.arctan2(2 * abs(apq), (a[q, q] - a[p, p]).real)
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s * phase
                rot[q, p] = -s * np.conj(phase)
                a = rot.conj().T @ a @ rot
                v = v @ rot
    raise ConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def hermitian_eig(h, method: Literal["lapack", "jacobi"] = "lapack") -> HermitianSpectrum:
    """Full spectrum of a Hermitian matrix, eigenvalues sorted descending.

    ``method="lapack"`` delegates to ``numpy.linalg.eigh``; ``"jacobi"`` runs
    the in-house cyclic Jacobi solver.
    """
    a = _check_hermitian(h)
    if method == "jacobi":
        return jacobi_eigh(a)
    if method != "lapack":
        raise ValueError(f"unknown method {method!r}")
    w, v = np.linalg.eigh(a)
    return _sorted_spectrum(w, v)

"""Weak measurement, local decoherence and measurement reversal.

The pipeline runs in a fixed order: the weak-measurement filter acts on the
initial state, the local noise acts next, and the reversal filter acts last.
Both filters are diagonal in the computational basis and are applied
conditionally on success, i.e. the state is renormalized after each one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel, apply_local, local_kraus
from .matcore import as_matrix
from .states import check_density

ANNIHILATION_TOL = 1e-12
ORTHONORMAL_TOL = 1e-12


class FilterAnnihilationError(ArithmeticError):
    """The filter maps the state to (numerically) zero."""


@dataclass(frozen=True)
class FilterParams:
    m1: float = 1.0
    m2: float = 1.0
    n1: float = 1.0
    n2: float = 1.0

    def __post_init__(self):
        for name in ("m1", "m2", "n1", "n2"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"filter strength {name} must be finite and >= 0, got {v}")


def _check_basis(basis) -> np.ndarray:
    b = np.asarray(basis, dtype=complex)
    if b.shape != (2, 2):
        raise ValueError(f"a qubit basis is a 2x2 array of column vectors, got shape {b.shape}")
    if np.max(np.abs(b.conj().T @ b - np.eye(2))) > ORTHONORMAL_TOL:
        raise ValueError("basis vectors are not orthonormal")
    return b


def pauli_basis(axis: str) -> np.ndarray:
    """Eigenbasis of sigma_x, sigma_y or sigma_z, vectors as columns."""
    s = 1 / np.sqrt(2)
    bases = {
        "x": [[s, s], [s, -s]],
        "y": [[s, s], [1j * s, -1j * s]],
        "z": [[1, 0], [0, 1]],
    }
    try:
        return np.array(bases[axis], dtype=complex)
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}; expected one of x, y, z") from None


def bloch_basis(theta: float, phi: float = 0.0) -> np.ndarray:
    """Eigenbasis of the spin component along the Bloch direction (theta, phi)."""
    up = [np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]
    down = [-np.exp(-1j * phi) * np.sin(theta / 2), np.cos(theta / 2)]
    return np.array([up, down], dtype=complex).T


@dataclass(frozen=True)
class ObservablePair:
    """Eigenbases of the two observables Alice may measure (columns are kets)."""

    q_basis: np.ndarray
    r_basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q_basis", _check_basis(self.q_basis))
        object.__setattr__(self, "r_basis", _check_basis(self.r_basis))

    @classmethod
    def default(cls) -> "ObservablePair":
        return cls(pauli_basis("x"), pauli_basis("z"))


def weak_filter(m1: float, m2: float) -> np.ndarray:
    """``diag(1, m1) (x) diag(1, m2)``."""
    if m1 < 0 or m2 < 0:
        raise ValueError(f"weak-measurement strengths must be >= 0, got ({m1}, {m2})")
    return np.diag([1.0, m2, m1, m1 * m2]).astype(complex)


def reversal_filter(n1: float, n2: float) -> np.ndarray:
    """``diag(n1, 1) (x) diag(n2, 1)``."""
    if n1 < 0 or n2 < 0:
        raise ValueError(f"reversal strengths must be >= 0, got ({n1}, {n2})")
    return np.diag([n1 * n2, n1, n2, 1.0]).astype(complex)


def apply_filter(rho, f) -> tuple[np.ndarray, float]:
    """Apply ``f`` and renormalize; returns the new state and ``tr(f rho f^dag)``."""
    rho = as_matrix(rho)
    f = as_matrix(f)
    peak = float(np.max(np.abs(f)))
    if peak == 0.0:
        raise FilterAnnihilationError("filter is identically zero")
    g = f / peak  # overall scale cancels after renormalization
    out = g @ rho @ g.conj().T
    norm = float(np.trace(out).real)
    if norm < ANNIHILATION_TOL:
        raise FilterAnnihilationError(f"filter annihilates the state (tr = {norm * peak**2:.3e})")
    return out / norm, norm * peak**2


@dataclass(frozen=True)
class PipelineReport:
    state_after_weak: np.ndarray
    state_after_noise: np.ndarray
    state_after_reversal: np.ndarray
    weak_success_prob: float
    reversal_success_prob: float


def run_pipeline(rho0, f: FilterParams, ch_a: KrausChannel, ch_b: KrausChannel) -> PipelineReport:
    rho0 = check_density(rho0)
    weak, p_weak = apply_filter(rho0, weak_filter(f.m1, f.m2))
    noisy = apply_local(weak, ch_a, ch_b)
    rev, p_rev = apply_filter(noisy, reversal_filter(f.n1, f.n2))
    return PipelineReport(
        check_density(weak), check_density(noisy), check_density(rev), p_weak, p_rev
    )


def project_measure(rho, basis) -> np.ndarray:
    """Non-selective projective measurement of qubit A in ``basis``."""
    rho = as_matrix(rho, (4,))
    b = _check_basis(basis)
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        proj = np.kron(np.outer(b[:, i], b[:, i].conj()), np.eye(2))
        out += proj @ rho @ proj
    return out


def _diag_filter_batch(rho: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    peak = np.max(np.abs(d), axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = d / peak
        out = rho * g[:, :, None] * g[:, None, :].conj()
        norm = np.trace(out, axis1=1, axis2=2).real
        out = out / norm[:, None, None]
    return out, norm


def run_pipeline_batch(rho0, m1, m2, n1, n2, ch_a: KrausChannel, ch_b: KrausChannel):
    """Vectorized :func:`run_pipeline` over broadcast filter parameters.

    Returns ``(states, ok)`` where ``states`` has shape (N, 4, 4) and ``ok``
    flags the points where neither filter annihilated the state. States at
    failed points are undefined.
    """
    rho0 = check_density(rho0)
    m1, m2, n1, n2 = (np.ravel(x).astype(float) for x in np.broadcast_arrays(m1, m2, n1, n2))
    one = np.ones_like(m1)
    weak = np.stack([one, m2, m1, m1 * m2], axis=-1)
    rev = np.stack([n1 * n2, n1, n2, one], axis=-1)
    states, w_norm = _diag_filter_batch(np.broadcast_to(rho0, (m1.size, 4, 4)), weak)
    ks = local_kraus(ch_a, ch_b)
    # matmul per matrix keeps each point's arithmetic independent of batch size
    states = np.sum(ks[None] @ states[:, None] @ ks.conj().transpose(0, 2, 1)[None], axis=1)
    states, r_norm = _diag_filter_batch(states, rev)
    ok = (w_norm >= ANNIHILATION_TOL) & (r_norm >= ANNIHILATION_TOL)
    ok &= np.all(np.isfinite(states.reshape(m1.size, -1)), axis=1)
    return states, ok

"""Initial two-qubit states and density-matrix validation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import as_matrix, hermiticity_defect

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_FLOOR = -1e-9
TETRAHEDRON_FLOOR = -1e-12

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

_s = 1 / np.sqrt(2)
PHI_PLUS = np.array([_s, 0, 0, _s], dtype=complex)
PHI_MINUS = np.array([_s, 0, 0, -_s], dtype=complex)
PSI_PLUS = np.array([0, _s, _s, 0], dtype=complex)
PSI_MINUS = np.array([0, _s, -_s, 0], dtype=complex)


class NotAStateError(ValueError):
    """Parameters or matrix do not describe a valid density matrix."""

    def __init__(self, message: str, eigenvalue: float | None = None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


def projector(ket) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


@dataclass(frozen=True)
class DensityReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def ok(self) -> bool:
        return (
            self.hermiticity_defect <= HERMITIAN_TOL
            and self.trace_defect <= TRACE_TOL
            and self.min_eigenvalue >= PSD_FLOOR
        )


def validate_density(rho) -> DensityReport:
    """Measure how far ``rho`` is from a valid density matrix."""
    rho = as_matrix(rho)
    herm = hermiticity_defect(rho)
    tr_def = abs(np.trace(rho) - 1.0)
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return DensityReport(herm, float(tr_def), float(w[0]))


def check_density(rho) -> np.ndarray:
    """Return ``rho`` as an array, raising :class:`NotAStateError` if invalid."""
    report = validate_density(rho)
    if not report.ok:
        raise NotAStateError(f"invalid density matrix: {report}", report.min_eigenvalue)
    return as_matrix(rho)


@dataclass(frozen=True)
class BellDiagonalParams:
    c1: float
    c2: float
    c3: float

    def bell_weights(self) -> dict[str, float]:
        """Weights of the four Bell projectors (eigenvalues of the state)."""
        c1, c2, c3 = self.c1, self.c2, self.c3
        return {
            "phi+": (1 + c1 - c2 + c3) / 4,
            "phi-": (1 - c1 + c2 + c3) / 4,
            "psi+": (1 + c1 + c2 - c3) / 4,
            "psi-": (1 - c1 - c2 - c3) / 4,
        }


def bell_diagonal(c: BellDiagonalParams) -> np.ndarray:
    """``(I + sum_i c_i sigma_i x sigma_i) / 4``; rejects points outside the tetrahedron."""
    cs = (c.c1, c.c2, c.c3)
    if not all(np.isfinite(cs)) or any(abs(ci) > 1 for ci in cs):
        raise NotAStateError(f"correlation coefficients must lie in [-1, 1], got {cs}")
    for name, w in c.bell_weights().items():
        if w < TETRAHEDRON_FLOOR:
            raise NotAStateError(
                f"c = {cs} lies outside the Bell tetrahedron ({name} weight {w:.6g})", w
            )
    rho = np.eye(4, dtype=complex)
    for ci, s in zip(cs, PAULIS):
        rho = rho + ci * np.kron(s, s)
    return rho / 4


def _check_unit(p: float, name: str = "p") -> float:
    p = float(p)
    if not np.isfinite(p) or not 0.0 <= p <= 1.0:
        raise NotAStateError(f"{name} must lie in [0, 1], got {p}")
    return p


def bell_diagonal_p(p: float) -> np.ndarray:
    """One-parameter family with ``c = (1 - 2p, -p, -p)``.

    Equals ``p |Psi-><Psi-| + (1 - p)/2 (|Psi+><Psi+| + |Phi+><Phi+|)``.
    """
    p = _check_unit(p)
    return bell_diagonal(BellDiagonalParams(1 - 2 * p, -p, -p))


@dataclass(frozen=True)
class XStateParams:
    p: float


def x_state(params: XStateParams | float) -> np.ndarray:
    """``p |psi+><psi+| + (1 - p) |11><11|``."""
    p = params.p if isinstance(params, XStateParams) else params
    p = _check_unit(p)
    rho = p * projector(PSI_PLUS)
    rho[3, 3] += 1 - p
    return rho

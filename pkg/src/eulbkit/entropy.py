"""Entropies and the memory-assisted entropic uncertainty bound (EULB).

All logarithms are base 2. For a state shared between Alice (A) and Bob's
quantum memory (B), with Alice measuring one of two observables whose
eigenbases have maximal squared overlap ``c``, the bound reads

    S(Q|B) + S(R|B) >= log2(1/c) + S(A|B).

:func:`eulb` is the right-hand side and :func:`uncertainty_lhs` the left.
"""

from __future__ import annotations

import numpy as np

from .matcore import hermitian_eig, partial_trace
from .protocol import ObservablePair, project_measure

CLAMP_FLOOR = -1e-9
DIST_TOL = 1e-9


class InvalidStateError(ValueError):
    pass


def _entropy_bits(w: np.ndarray) -> float:
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)) + 0.0)


def von_neumann(rho) -> float:
    w = hermitian_eig(rho).eigenvalues
    if w.min() < CLAMP_FLOOR:
        raise InvalidStateError(f"eigenvalue {w.min():.3e} below {CLAMP_FLOOR}")
    return _entropy_bits(np.clip(w, 0.0, None))


def shannon(probs) -> float:
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or np.any(p < -1e-12) or abs(p.sum() - 1.0) > DIST_TOL:
        raise ValueError(f"not a probability vector: {probs!r}")
    return _entropy_bits(np.clip(p, 0.0, None))


def conditional_entropy(rho_ab) -> float:
    """S(A|B) = S(AB) - S(B)."""
    return von_neumann(rho_ab) - von_neumann(partial_trace(rho_ab, keep="B"))


def complementarity(obs: ObservablePair) -> float:
    """max_ij |<q_i|r_j>|^2."""
    overlaps = np.abs(obs.q_basis.conj().T @ obs.r_basis) ** 2
    return float(overlaps.max())


def eulb(rho_ab, obs: ObservablePair | None = None) -> float:
    """log2(1/c) + S(A|B), unclamped."""
    obs = obs or ObservablePair.default()
    return -np.log2(complementarity(obs)) + conditional_entropy(rho_ab)


def measured_conditional_entropy(rho_ab, basis) -> float:
    """S(O|B) after Alice measures in ``basis``."""
    return conditional_entropy(project_measure(rho_ab, basis))


def uncertainty_lhs(rho_ab, obs: ObservablePair | None = None) -> float:
    """S(Q|B) + S(R|B)."""
    obs = obs or ObservablePair.default()
    return measured_conditional_entropy(rho_ab, obs.q_basis) + measured_conditional_entropy(
        rho_ab, obs.r_basis
    )


def _entropy_rows(w: np.ndarray) -> np.ndarray:
    w = np.clip(w, 0.0, None)
    safe = np.where(w > 0, w, 1.0)
    return -np.sum(w * np.log2(safe), axis=-1)


def eulb_batch(states: np.ndarray, obs: ObservablePair | None = None) -> np.ndarray:
    """:func:`eulb` over a stack of (N, 4, 4) states.

    Rows whose spectrum dips below the clamp floor come back as NaN.
    """
    obs = obs or ObservablePair.default()
    states = (states + states.conj().transpose(0, 2, 1)) / 2
    w_ab = np.linalg.eigvalsh(states)
    w_b = np.linalg.eigvalsh(np.einsum("nijik->njk", states.reshape(-1, 2, 2, 2, 2)))
    out = -np.log2(complementarity(obs)) + _entropy_rows(w_ab) - _entropy_rows(w_b)
    bad = (w_ab[:, 0] < CLAMP_FLOOR) | (w_b[:, 0] < CLAMP_FLOOR)
    out[bad] = np.nan
    return out

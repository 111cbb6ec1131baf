"""Single-qubit noise channels in Kraus form and their local two-qubit action."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .matcore import as_matrix
from .states import I2, SIGMA_X, SIGMA_Y, SIGMA_Z

CPTP_TOL = 1e-12

ChannelKind = Literal["identity", "ad", "gad", "depolarizing"]


@dataclass(frozen=True)
class KrausChannel:
    kind: ChannelKind
    p: float | None
    r: float | None
    ops: tuple[np.ndarray, ...] = field(repr=False)

    def completeness_defect(self) -> float:
        """max |sum_k K_k^dag K_k - I|."""
        total = sum(k.conj().T @ k for k in self.ops)
        return float(np.max(np.abs(total - I2)))

    def apply(self, rho) -> np.ndarray:
        rho = as_matrix(rho, (2,))
        return sum(k @ rho @ k.conj().T for k in self.ops)

    def stacked(self) -> np.ndarray:
        return np.stack(self.ops)


def _unit(x: float, name: str) -> float:
    x = float(x)
    if not np.isfinite(x) or not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


def identity_channel() -> KrausChannel:
    return KrausChannel("identity", None, None, (I2.copy(),))


def amplitude_damping(p: float) -> KrausChannel:
    """Zero-temperature decay ``|1> -> |0>`` with probability ``p``."""
    p = _unit(p, "p")
    e0 = np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex)
    e1 = np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)
    return KrausChannel("ad", p, None, (e0, e1))


def generalized_amplitude_damping(p: float, r: float) -> KrausChannel:
    """Finite-temperature damping.

    ``r`` weights the excitation-loss branch and ``1 - r`` the excitation-gain
    branch; ``r = 1`` reduces to :func:`amplitude_damping`.
    """
    p = _unit(p, "p")
    r = _unit(r, "r")
    a, b = np.sqrt(r), np.sqrt(1 - r)
    sp, sq = np.sqrt(p), np.sqrt(1 - p)
    ops = (
        a * np.array([[1, 0], [0, sq]], dtype=complex),
        a * np.array([[0, sp], [0, 0]], dtype=complex),
        b * np.array([[sq, 0], [0, 1]], dtype=complex),
        b * np.array([[0, 0], [sp, 0]], dtype=complex),
    )
    return KrausChannel("gad", p, r, ops)


def depolarizing(r: float) -> KrausChannel:
    r = _unit(r, "r")
    w = np.sqrt(r / 3)
    ops = (np.sqrt(1 - r) * I2, w * SIGMA_X, w * SIGMA_Y, w * SIGMA_Z)
    return KrausChannel("depolarizing", None, r, ops)


def local_kraus(ch_a: KrausChannel, ch_b: KrausChannel) -> np.ndarray:
    """All products ``K_i (x) K_j``, shape (len_a * len_b, 4, 4)."""
    return np.stack([np.kron(ka, kb) for ka in ch_a.ops for kb in ch_b.ops])


def apply_local(rho, ch_a: KrausChannel, ch_b: KrausChannel) -> np.ndarray:
    """Act with ``ch_a`` on qubit A and ``ch_b`` on qubit B independently.

    Sums over every Kraus pair (i, j), so the map is trace preserving.
    """
    rho = as_matrix(rho, (4,))
    ks = local_kraus(ch_a, ch_b)
    return np.sum(ks @ rho @ ks.conj().transpose(0, 2, 1), axis=0)

import numpy as np
import pytest

from eulbkit import channels, states


def random_density(rng, dim=4, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, dim=4):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return a + a.conj().T


def random_tetrahedron_point(rng):
    # uniform Bell weights on the simplex map onto the tetrahedron
    w = rng.dirichlet(np.ones(4))
    lam_phip, lam_phim, lam_psip, lam_psim = w
    c1 = lam_phip - lam_phim + lam_psip - lam_psim
    c2 = -lam_phip + lam_phim + lam_psip - lam_psim
    c3 = lam_phip + lam_phim - lam_psip - lam_psim
    return states.BellDiagonalParams(c1, c2, c3)


def random_channel(rng):
    kind = rng.integers(3)
    if kind == 0:
        return channels.amplitude_damping(rng.random())
    if kind == 1:
        return channels.generalized_amplitude_damping(rng.random(), rng.random())
    return channels.depolarizing(rng.random())


def random_initial_state(rng):
    kind = rng.integers(4)
    if kind == 0:
        return random_density(rng)
    if kind == 1:
        return states.bell_diagonal(random_tetrahedron_point(rng))
    if kind == 2:
        return states.x_state(rng.random())
    return states.bell_diagonal_p(rng.random())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

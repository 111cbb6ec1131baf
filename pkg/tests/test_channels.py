import numpy as np
import pytest

from eulbkit import channels
from eulbkit.channels import (
    amplitude_damping,
    apply_local,
    depolarizing,
    generalized_amplitude_damping,
    identity_channel,
)
from eulbkit.states import PAULIS, validate_density

from conftest import random_channel, random_density

KET0 = np.diag([1.0, 0.0]).astype(complex)
KET1 = np.diag([0.0, 1.0]).astype(complex)


def matrix_units(dim):
    for i in range(dim):
        for j in range(dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, j] = 1
            yield e


def test_kraus_counts():
    assert len(amplitude_damping(0.3).ops) == 2
    assert len(generalized_amplitude_damping(0.3, 0.2).ops) == 4
    assert len(depolarizing(0.3).ops) == 4


def test_amplitude_damping_examples():
    for e in matrix_units(2):
        np.testing.assert_allclose(amplitude_damping(0.0).apply(e), e)
    np.testing.assert_allclose(amplitude_damping(1.0).apply(KET1), KET0)
    np.testing.assert_allclose(amplitude_damping(0.36).apply(KET1), np.diag([0.36, 0.64]), atol=1e-15)


def test_gad_examples():
    for r in (0.0, 0.3, 1.0):
        for e in matrix_units(2):
            np.testing.assert_allclose(generalized_amplitude_damping(0.0, r).apply(e), e, atol=1e-15)
    np.testing.assert_allclose(generalized_amplitude_damping(1.0, 0.0).apply(KET0), KET1)


def test_gad_explicit_operators():
    p, r = 0.36, 0.25
    e0, e1, e2, e3 = generalized_amplitude_damping(p, r).ops
    np.testing.assert_allclose(e0, 0.5 * np.diag([1, 0.8]))
    np.testing.assert_allclose(e1, 0.5 * np.array([[0, 0.6], [0, 0]]))
    np.testing.assert_allclose(e2, np.sqrt(0.75) * np.diag([0.8, 1]))
    np.testing.assert_allclose(e3, np.sqrt(0.75) * np.array([[0, 0], [0.6, 0]]))


def test_depolarizing_examples(rng):
    for e in matrix_units(2):
        np.testing.assert_allclose(depolarizing(0.0).apply(e), e)
    np.testing.assert_allclose(depolarizing(0.3).apply(KET0), np.diag([0.8, 0.2]), atol=1e-15)
    for _ in range(100):
        rho = random_density(rng, 2)
        expanded = 0.25 * rho + 0.25 * sum(s @ rho @ s for s in PAULIS)
        out = depolarizing(0.75).apply(rho)
        np.testing.assert_allclose(out, expanded, atol=1e-14)
        np.testing.assert_allclose(out, np.eye(2) / 2, atol=1e-14)


@pytest.mark.parametrize("bad", [-0.1, 1.1, np.nan])
def test_parameter_validation(bad):
    for build in (amplitude_damping, depolarizing, lambda x: generalized_amplitude_damping(x, 0.5),
                  lambda x: generalized_amplitude_damping(0.5, x)):
        with pytest.raises(ValueError):
            build(bad)


def test_completeness_grid():
    grid = np.linspace(0, 1, 21)
    worst = 0.0
    for p in grid:
        worst = max(worst, amplitude_damping(p).completeness_defect(), depolarizing(p).completeness_defect())
        for r in grid:
            worst = max(worst, generalized_amplitude_damping(p, r).completeness_defect())
    assert worst < 1e-12


@pytest.mark.parametrize("p", np.linspace(0, 1, 21))
def test_gad_at_r1_is_ad(p):
    gad, ad = generalized_amplitude_damping(p, 1.0), amplitude_damping(p)
    for e in matrix_units(2):
        assert np.max(np.abs(gad.apply(e) - ad.apply(e))) < 1e-12


def test_apply_local_identity(rng):
    rho = random_density(rng)
    np.testing.assert_allclose(apply_local(rho, identity_channel(), identity_channel()), rho)


def test_apply_local_gad_unital_point():
    gad = generalized_amplitude_damping(0.7, 0.5)
    np.testing.assert_allclose(apply_local(np.eye(4) / 4, gad, gad), np.eye(4) / 4, atol=1e-15)


def test_apply_local_full_depolarization(rng):
    dep = depolarizing(0.75)
    for _ in range(20):
        np.testing.assert_allclose(apply_local(random_density(rng), dep, dep), np.eye(4) / 4, atol=1e-14)


def test_apply_local_is_sequential_composition(rng):
    # K_i (x) K_j summed over all pairs == (ch_a (x) id) then (id (x) ch_b)
    for _ in range(50):
        rho = random_density(rng)
        ca, cb = random_channel(rng), random_channel(rng)
        step = apply_local(rho, ca, identity_channel())
        step = apply_local(step, identity_channel(), cb)
        np.testing.assert_allclose(apply_local(rho, ca, cb), step, atol=1e-13)


def test_apply_local_product_states(rng):
    for _ in range(100):
        ra, rb = random_density(rng, 2), random_density(rng, 2)
        ca, cb = random_channel(rng), random_channel(rng)
        got = apply_local(np.kron(ra, rb), ca, cb)
        np.testing.assert_allclose(got, np.kron(ca.apply(ra), cb.apply(rb)), atol=1e-12)


def test_random_outputs_are_states(rng):
    for _ in range(1000):
        out = apply_local(random_density(rng), random_channel(rng), random_channel(rng))
        report = validate_density(out)
        assert report.ok, report
        assert report.trace_defect < 1e-10


def test_local_kraus_shape():
    ks = channels.local_kraus(generalized_amplitude_damping(0.2, 0.3), depolarizing(0.1))
    assert ks.shape == (16, 4, 4)

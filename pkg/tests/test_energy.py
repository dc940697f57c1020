import numpy as np
import pytest

import plap.energy as en
from plap.energy import EnergySpec
from plap.errors import InvalidInputError, SingularityError
from plap.geometry import euclidean
from plap.grid import DiscreteField, Grid1D, Grid2D


def radial_field(n=201):
    M = euclidean(3)
    g = Grid1D.uniform(1.0, 2.0, n, manifold=M)
    return DiscreteField(g, 2.0 / g.nodes - 1.0)


def test_energy_spec_validation():
    with pytest.raises(InvalidInputError):
        EnergySpec(1.0, 0.0)
    with pytest.raises(InvalidInputError):
        EnergySpec(2.0, -1e-9)


def test_radial_dirichlet_energy_oracle():
    # u = 2/t - 1 is harmonic on the m=3 annulus [1,2] and has
    # int |grad u|^2 dv = 8 pi
    f = radial_field(801)
    assert en.energy(EnergySpec(2.0, 0.0), f) == pytest.approx(8 * np.pi, rel=1e-5)
    assert en.q_energy(f, 2.0) == pytest.approx(8 * np.pi, rel=1e-5)


def test_energy_eps_exceeds_q_energy():
    f = radial_field()
    e0 = en.q_energy(f, 3.0)
    e1 = en.energy(EnergySpec(3.0, 1e-2), f)
    assert e1 > e0


def test_2d_linear_field_energy():
    g = Grid2D(0, 1, 0, 2, 21, 31)
    f = DiscreteField.from_function(g, lambda x, y: 3 * x + 4 * y)
    # |grad u| = 5 on a rectangle of measure 2
    assert en.energy(EnergySpec(3.0, 0.0), f) == pytest.approx(250.0)
    assert en.q_energy(f, 2.0) == pytest.approx(50.0)


def test_q_energy_rejects_nonpositive_q():
    with pytest.raises(InvalidInputError):
        en.q_energy(radial_field(), 0.0)


def test_singularity_guard():
    g = Grid1D.uniform(0, 1, 9)
    flat = DiscreteField(g, np.zeros(9))
    with pytest.raises(SingularityError):
        en.weak_residual(EnergySpec(1.5, 0.0), flat)
    # eps > 0 smooths the singularity
    r = en.weak_residual(EnergySpec(1.5, 1e-3), flat)
    assert np.allclose(r, 0.0)


def test_weak_residual_is_energy_gradient():
    """Directional FD of the discrete energy matches the assembled residual."""
    rng = np.random.default_rng(3)
    f = radial_field(41)
    spec = EnergySpec(3.0, 1e-3)
    free = np.zeros(f.values.shape, dtype=bool)
    r = en.weak_residual(spec, f, fixed_mask=free)
    v = rng.normal(size=f.values.shape)
    h = 1e-6
    ep = en.energy(spec, f.copy_with(f.values + h * v))
    em = en.energy(spec, f.copy_with(f.values - h * v))
    fd = (ep - em) / (2 * h)
    assert fd == pytest.approx(float(np.dot(r, v)), rel=1e-5)


def test_weak_residual_gradient_2d():
    rng = np.random.default_rng(4)
    g = Grid2D(0, 1, 0, 1, 12, 14)
    f = DiscreteField(g, rng.normal(size=(12, 14)))
    spec = EnergySpec(2.5, 1e-2)
    free = np.zeros(f.values.shape, dtype=bool)
    r = en.weak_residual(spec, f, fixed_mask=free)
    v = rng.normal(size=f.values.shape)
    h = 1e-6
    ep = en.energy(spec, f.copy_with(f.values + h * v))
    em = en.energy(spec, f.copy_with(f.values - h * v))
    assert (ep - em) / (2 * h) == pytest.approx(float(np.sum(r * v)), rel=1e-5)


def test_linearized_action_symmetric_and_consistent():
    rng = np.random.default_rng(5)
    f = radial_field(41)
    spec = EnergySpec(3.0, 1e-3)
    v = rng.normal(size=f.values.shape)
    w = rng.normal(size=f.values.shape)
    free = np.zeros(f.values.shape, dtype=bool)
    av = en.linearized_action(spec, f, f.copy_with(v), fixed_mask=free)
    aw = en.linearized_action(spec, f, f.copy_with(w), fixed_mask=free)
    # symmetry of the Hessian
    assert float(np.dot(w, av)) == pytest.approx(float(np.dot(v, aw)), rel=1e-12)
    # consistency with FD of the residual
    h = 1e-6
    rp = en.weak_residual(spec, f.copy_with(f.values + h * v), fixed_mask=free)
    rm = en.weak_residual(spec, f.copy_with(f.values - h * v), fixed_mask=free)
    fd = (rp - rm) / (2 * h)
    assert np.max(np.abs(fd - av)) <= 1e-5 * (1 + np.max(np.abs(av)))


def test_hessian_diagonal_matches_action():
    f = radial_field(31)
    spec = EnergySpec(3.0, 1e-3)
    free = np.zeros(f.values.shape, dtype=bool)
    diag = en.hessian_diagonal(spec, f, fixed_mask=free)
    n = f.values.size
    ref = np.empty(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        ref[i] = en.linearized_action(spec, f, f.copy_with(e),
                                      fixed_mask=free)[i]
    assert np.max(np.abs(diag - ref)) <= 1e-12 * (1 + np.max(np.abs(ref)))


def test_p2_weak_residual_is_linear():
    f = radial_field(41)
    spec = EnergySpec(2.0, 0.0)
    r1 = en.weak_residual(spec, f)
    r2 = en.weak_residual(spec, f.copy_with(2.0 * f.values))
    assert np.allclose(r2, 2.0 * r1, atol=1e-13)


def test_residual_scale_positive():
    f = radial_field(41)
    assert en.residual_scale(EnergySpec(3.0, 1e-6), f) > 0

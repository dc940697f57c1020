import numpy as np
import pytest

import plap.capacity as cap
import plap.solver as sv
from plap.energy import EnergySpec
from plap.errors import (
    DomainError,
    InternalInconsistencyError,
    InvalidInputError,
    UnsupportedVariantError,
)
from plap.geometry import Cosh, EndKind, Exponential, PolyEven, euclidean, warped
from plap.grid import Grid1D, Grid2D


M3 = euclidean(3)
M2 = euclidean(2)


def test_condenser_validation():
    with pytest.raises(InvalidInputError):
        cap.Condenser(inner=(1.0, 2.0), outer=(1.5, 3.0))
    with pytest.raises(InvalidInputError):
        cap.Condenser(inner=(2.0, 1.0), outer=(3.0, 4.0))


def test_capacity_analytic_oracles():
    # 2-capacity of the m=3 annulus 1 < t < 2: (int 1/(4 pi t^2))^{-1} = 8 pi
    assert cap.capacity_analytic(M3, 2.0, 1.0, 2.0).value == pytest.approx(8 * np.pi)
    # m=2, p=2, annulus 1 < t < e: 2 pi
    assert cap.capacity_analytic(M2, 2.0, 1.0, np.e).value == pytest.approx(2 * np.pi)
    with pytest.raises(InvalidInputError):
        cap.capacity_analytic(M3, 2.0, 2.0, 1.0)


def test_capacity_arctan_model_oracle():
    # A = (1+t^2)^2, p = 3: Phi(-inf,inf) = int (1+t^2)^{-1} = pi,
    # so Cap_3 = pi^{-2}
    M = warped(3, PolyEven(2.0))
    got = M.phi_integral(3.0, -np.inf, np.inf) ** (1.0 - 3.0)
    assert got == pytest.approx(np.pi**-2)


def test_capacity_numeric_matches_analytic():
    g = Grid1D.uniform(1.0, 2.0, 513, manifold=M3)
    pad = 1e-9
    cond = cap.Condenser(inner=(1.0 - pad, 1.0 + pad),
                         outer=(2.0 - pad, 2.0 + pad))
    for p in (2.0, 3.0):
        num = cap.capacity_numeric(g, p, cond)
        ana = cap.capacity_analytic(M3, p, 1.0, 2.0)
        assert num.value == pytest.approx(ana.value, rel=5e-3), p
        assert num.extremal is not None


def test_zero_potential_difference_has_zero_energy():
    # equal plate potentials: the minimizer is constant, p-energy 0
    g = Grid1D.uniform(1.0, 2.0, 65, manifold=M3)
    f, _ = sv.solve_dirichlet(EnergySpec(3.0, 1e-8), g, (1.0, 1.0))
    import plap.energy as en

    assert en.q_energy(f, 3.0) == 0.0


def test_capacity_numeric_2d_annulus():
    # planar annulus 0.3 < r < 1 inside the square [-1,1]^2 with the outer
    # plate including the square boundary
    g = Grid2D(-1, 1, -1, 1, 141, 141)
    cond = cap.Condenser(inner=(0.0, 0.3), outer=(0.999, 1.5))
    num = cap.capacity_numeric(g, 2.0, cond)
    assert num.value > 0


def test_monotonicity_suite():
    out = cap.capacity_monotonicity_suite(
        M3, 2.0, [(1.0, 2.0), (1.0, 3.0), (1.2, 3.0), (1.2, 2.5)])
    assert out["ok"]
    caps = out["capacities"]
    assert caps[1] < caps[0]  # wider gap, smaller capacity
    assert caps[2] > caps[1]
    with pytest.raises(InvalidInputError):
        cap.capacity_monotonicity_suite(M3, 2.0, [(1.0, 2.0)])


def test_end_barrier_sweep_hyperbolic():
    out = cap.end_barrier_sweep(M3, 2.0, 1.0, [4.0, 16.0, 64.0, 256.0])
    assert out["diagnosis"] == EndKind.HYPERBOLIC
    assert out["infima"][-1] == 0.0
    assert out["energies"][-1] > 0


def test_end_barrier_sweep_parabolic():
    out = cap.end_barrier_sweep(M2, 2.5, 1.0, [4.0, 16.0, 64.0, 256.0])
    assert out["diagnosis"] == EndKind.PARABOLIC


def test_end_barrier_sweep_borderline_parabolic():
    # p = m: the barriers approach 1 only logarithmically; the trend
    # diagnosis must still call it parabolic
    out = cap.end_barrier_sweep(M3, 3.0, 1.0, [10.0, 100.0, 1000.0])
    assert out["diagnosis"] == EndKind.PARABOLIC
    assert out["sup_deviation_on_collar"] > 1e-3


def test_end_barrier_sweep_validation():
    with pytest.raises(InvalidInputError):
        cap.end_barrier_sweep(M3, 2.0, 1.0, [4.0, 2.0])
    with pytest.raises(InvalidInputError):
        cap.end_barrier_sweep(M3, 2.0, 1.0, [0.5, 2.0])


def test_tail_energy_profile_euclid():
    # m=3, p=2, R0=1, lambda_p=0: tail(R) = 4 pi / R, bound C3 R^2
    out = cap.tail_energy_profile(M3, 2.0, 1.0, 0.0, [2.0, 4.0, 8.0])
    assert out["ok"]
    assert out["rows"][0]["tail"] == pytest.approx(4 * np.pi / 2.0, rel=1e-8)
    assert out["rate"] == 0.0


def test_tail_energy_profile_exponential():
    M = warped(2, Exponential(1.0))
    out = cap.tail_energy_profile(M, 2.0, 1.0, 0.25, [2, 3, 4, 5, 6])
    assert out["ok"]
    # actual tail decays like e^{-R}, bound rate is 1/6
    assert max(out["slopes"]) <= -out["rate"]


def test_tail_energy_profile_errors():
    with pytest.raises(UnsupportedVariantError):
        cap.tail_energy_profile(M3, 3.0, 1.0, 0.0, [2.0, 4.0])  # parabolic
    with pytest.raises(DomainError):
        cap.tail_energy_profile(M3, 2.0, 1.0, 0.0, [0.5, 2.0])
    with pytest.raises(InvalidInputError):
        cap.tail_energy_profile(M3, 2.0, 1.0, -1.0, [2.0, 4.0])
    with pytest.raises(InvalidInputError):
        cap.tail_energy_profile(M3, 2.0, 1.0, 0.0, [2.0])


def test_volume_growth_hyperbolic():
    M = warped(2, Exponential(1.0))
    out = cap.volume_growth_check(M, 2.0, 0.25, [2, 4, 6, 8, 10])
    assert out["kind"] == EndKind.HYPERBOLIC
    assert out["ok"]


def test_volume_growth_parabolic():
    # A = (1+t^2)^{-2}: finite total volume toward +inf, parabolic for p=2
    M = warped(3, PolyEven(-2.0))
    out = cap.volume_growth_check(M, 2.0, 0.3, [2, 4, 6, 8])
    assert out["kind"] == EndKind.PARABOLIC
    assert out["ok"]
    with pytest.raises(InvalidInputError):
        cap.volume_growth_check(M, 2.0, 0.0, [2, 4, 6, 8])


def test_p_poincare_bound():
    assert cap.p_poincare_bound(1.0, 4.0) == pytest.approx(1.0 / 16.0)
    assert cap.p_poincare_bound(0.0, 2.0) == 0.0
    # surface case: lambda2 = 1/4 gives lambda_2 >= 1/4 (sharp at p=2)
    assert cap.p_poincare_bound(0.25, 2.0) == pytest.approx(0.25)
    with pytest.raises(UnsupportedVariantError):
        cap.p_poincare_bound(1.0, 1.5)
    with pytest.raises(InvalidInputError):
        cap.p_poincare_bound(-1.0, 3.0)

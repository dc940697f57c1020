"""Acceptance battery: one check per numbered criterion, each printing a
single PASS/FAIL line.  Tolerances are pinned; do not loosen them here."""

import numpy as np
import pytest

import plap.capacity as cap
import plap.solver as sv
import plap.verifiers as vf
from plap import cli
from plap.energy import EnergySpec
from plap.errors import ConstantsInfeasibleError
from plap.geometry import (
    Cosh,
    EndKind,
    Exponential,
    PolyEven,
    euclidean,
    warped,
)
from plap.grid import DiscreteField, Grid1D, Grid2D


def _check(label, cond):
    print("[%s] %s" % ("PASS" if cond else "FAIL", label))
    assert cond, label


def test_01_capacity_oracle_annulus():
    # Cap_2 of the m=3 annulus 1 < t < 2 is 8 pi; numeric within 0.5%
    M = euclidean(3)
    g = Grid1D.uniform(1.0, 2.0, 2049, manifold=M)
    cond = cap.Condenser(inner=(1.0, 1.0), outer=(2.0, 2.0))
    num = cap.capacity_numeric(g, 2.0, cond).value
    rel = abs(num - 8 * np.pi) / (8 * np.pi)
    _check("capacity oracle 8*pi (rel err %.3g)" % rel, rel <= 5e-3)


def test_02_capacity_oracle_arctan_model():
    # Cap_3 of the condenser {-1} / {1} in A = (1+t^2)^2: Phi = pi/2,
    # so the capacity is (pi/2)^{-2}
    M = warped(3, PolyEven(2.0))
    g = Grid1D.uniform(-1.0, 1.0, 2049, manifold=M)
    cond = cap.Condenser(inner=(-1.0, -1.0), outer=(1.0, 1.0))
    num = cap.capacity_numeric(g, 3.0, cond).value
    exact = (np.pi / 2.0) ** -2
    rel = abs(num - exact) / exact
    _check("capacity oracle (pi/2)^-2 (rel err %.3g)" % rel, rel <= 5e-3)


def test_03_epsilon_continuation_converges():
    # 48-step halving schedule: W^{1,p} distances to the final iterate
    # decrease (10% slack), the last consecutive step is below 1e-5, and
    # every sandwich chain holds
    M = euclidean(3)
    g = Grid1D.uniform(1.0, 2.0, 257, manifold=M)
    ok = True
    for p in (1.5, 3.0, 4.0):
        cfg = sv.SolveConfig(eps_schedule=sv.default_schedule(1.0, 48))
        _, rep = sv.epsilon_continuation(p, g, (1.0, 0.0), cfg)
        d = rep.distances_to_final
        mono = all(d[i + 1] <= 1.1 * d[i] + 1e-14 for i in range(len(d) - 1))
        tail = rep.consecutive_distances[-1] < 1e-5
        sand = all(s["pass"] for s in rep.sandwich)
        ok &= mono and tail and sand
    _check("epsilon continuation monotone + sandwich (p=1.5,3,4)", ok)


def test_04_kato_equality_values():
    # |Hess u|^2 / |grad|grad u||^2 equals 2 for log on the plane and
    # 7/3 for the p=3 extremal in m=4, both within 1e-3
    g2 = Grid2D(1.0, 2.0, 1.0, 2.0, 513, 513)
    f2 = DiscreteField.from_function(
        g2, lambda x, y: 0.5 * np.log(x * x + y * y))
    r_log = vf.kato_ratio(f2, 2.0, collar=3)
    r_pow = vf.kato_ratio(vf.power_radial_field(3.0, 4, n=1025), 3.0)
    ok = (abs(r_log.minimum - 2.0) <= 1e-3
          and abs(r_log.maximum - 2.0) <= 1e-3
          and abs(r_pow.minimum - 7.0 / 3.0) <= 1e-3
          and abs(r_pow.maximum - 7.0 / 3.0) <= 1e-3)
    _check("Kato ratio equality cases 2 and 7/3 (+-1e-3)", ok)


def test_05_kato_lower_bound_sweep():
    # the improved-Kato bound 1 + kappa holds on extremals for every
    # (p, m) in the sweep, with 1e-3 slack baked into the threshold
    ok = True
    for m in (2, 3, 4, 5):
        for p in (1.5, 2.0, 3.0, 4.0):
            f = (vf.log_radial_field(m=m) if p == m
                 else vf.power_radial_field(p, m))
            rep = vf.kato_ratio(f, p)
            ok &= rep.passed
    _check("Kato lower bound sweep p in {1.5,2,3,4}, m in {2..5}", ok)


def test_06_bochner_identity_first_order():
    # staggered-FD residual of the perturbed identity decays under
    # refinement: least-squares order >= 0.8 over four resolutions
    M = euclidean(3)
    eps = 1e-4
    ns = (257, 513, 1025, 2049)
    maxes = []
    for n in ns:
        g = Grid1D.uniform(1.0, 2.0, n, manifold=M)
        f, _ = sv.solve_dirichlet(EnergySpec(3.0, eps), g, (1.0, 0.0))
        maxes.append(vf.bochner_residual(f, 3.0, eps).maximum)
    slope = np.polyfit(np.log([1.0 / (n - 1) for n in ns]),
                       np.log(maxes), 1)[0]
    _check("Bochner residual order %.2f >= 0.8" % slope, slope >= 0.8)


def test_07_generalized_bochner_closed_form():
    # the five-term identity holds at rounding level on closed-form
    # extremals, and collapses to the perturbed identity at s = p-2
    f = vf.power_radial_field(3.0, 4, n=513)
    r1 = vf.bochner_s_residual(f, 3.0, 1.0, 1e-3)   # s = p-2
    r2 = vf.bochner_s_residual(f, 3.0, 2.5, 1e-3)
    f2, _ = vf.arctan_model_field()
    r3 = vf.bochner_s_residual(f2, 3.0, 1.0, 1e-4)
    ok = all(r.maximum <= 1e-8 * r.details["scale"] for r in (r1, r2, r3))
    _check("generalized Bochner residual <= 1e-8 * scale", ok)


def test_08_strong_form_second_order():
    # FD residual of the sampled closed-form extremal: pure truncation
    maxes = []
    ns = (129, 257, 513)
    for n in ns:
        f = vf.power_radial_field(3.0, 4, n=n)
        f = DiscreteField(f.grid, f.values)  # drop the analytic shortcut
        maxes.append(vf.strong_form_residual(f, 3.0).maximum)
    slope = np.polyfit(np.log([1.0 / (n - 1) for n in ns]),
                       np.log(maxes), 1)[0]
    _check("strong-form residual order %.2f >= 1.8" % slope, slope >= 1.8)


def test_09_monotonicity_inequality():
    out = vf.monotonicity_suite(p_values=(1.5, 2.0, 3.0, 4.0),
                                n=100_000, seed=0)
    _check("vector monotonicity, 1e5 samples per p", out["ok"])


def test_10_regularization_inequality():
    # 1e4 random pairs per exponent branch (1,2], (2,4], (4,6]
    ok = True
    for lo, hi, seed in ((1.0, 2.0, 1), (2.0, 4.0, 2), (4.0, 6.0, 3)):
        rng = np.random.default_rng(seed)
        for _ in range(10_000):
            p = rng.uniform(lo, hi)
            X = rng.normal(size=3)
            Y = rng.normal(size=3)
            if np.linalg.norm(X) < np.linalg.norm(Y):
                X, Y = Y, X
            rep = vf.regularization_gap(X, Y, rng.uniform(0, 1.0), p,
                                        rng.uniform(0.1, 2.0))
            ok &= rep.passed
            if not ok:
                break
    _check("regularization inequality, 1e4 samples per branch", ok)


def test_11_caccioppoli_estimates():
    # plain estimate for w = 1/t with three cutoff profiles, plus the
    # weighted estimate on the cosh model with a strictly positive
    # margin, plus infeasibility when eps2 -> 1
    M3 = euclidean(3)
    g = Grid1D.uniform(1.0, 10.0, 721, manifold=M3)
    w = DiscreteField(g, 1.0 / g.nodes)
    plain = True
    for ramp in (1.0, 2.0, 3.0):
        t = g.nodes
        up = np.clip((t - 2.0) / ramp, 0.0, 1.0)
        down = np.clip((9.0 - t) / ramp, 0.0, 1.0)
        psi = DiscreteField(g, np.minimum(up, down))
        plain &= vf.caccioppoli_check(w, psi, 2.0).passed

    Mc = warped(4, Cosh())
    gc = Grid1D.uniform(-8.0, 8.0, 1025, manifold=Mc)
    eps = 1e-4
    u_eps, _ = sv.solve_dirichlet(EnergySpec(2.0, eps), gc, (0.0, 1.0))
    rep = vf.weighted_caccioppoli_check(Mc, 2.0, u_eps, eps, kappa_val=1.0,
                                        tau=1.5, eps1=0.01, eps2=0.01, R=4.0)
    infeasible = False
    try:
        vf.weighted_caccioppoli_constants(2.0, 1.0, 1.5, 0.01, 1.0 - 1e-7)
    except ConstantsInfeasibleError:
        infeasible = True
    ok = plain and rep.passed and rep.details["margin"] > 0 and infeasible
    _check("Caccioppoli estimates (plain, weighted, infeasible limit)", ok)


def test_12_end_classification():
    # integral classification across 15 Euclidean cases plus warped
    # examples, cross-checked by barrier sweeps on three of them
    ok = True
    for m in (2, 3, 4):
        M = euclidean(m)
        for p in (1.5, 2.0, 3.0, 4.0, float(m)):
            want = EndKind.PARABOLIC if p >= m else EndKind.HYPERBOLIC
            ok &= M.classify_end(p, +1) == want
    Mexp = warped(2, Exponential(1.0))
    ok &= Mexp.classify_end(2.0, +1) == EndKind.HYPERBOLIC
    ok &= Mexp.classify_end(2.0, -1) == EndKind.PARABOLIC
    Mp = warped(3, PolyEven(2.0))
    ok &= Mp.classify_end(3.0, +1) == EndKind.HYPERBOLIC
    ok &= Mp.classify_end(5.0, +1) == EndKind.PARABOLIC
    # barrier sweeps raise InternalInconsistencyError on any mismatch
    s1 = cap.end_barrier_sweep(euclidean(3), 2.0, 1.0, [4.0, 16.0, 64.0])
    s2 = cap.end_barrier_sweep(euclidean(2), 3.0, 1.0, [4.0, 16.0, 64.0])
    s3 = cap.end_barrier_sweep(euclidean(3), 3.0, 1.0, [10.0, 100.0, 1000.0])
    ok &= s1["diagnosis"] == EndKind.HYPERBOLIC
    ok &= s2["diagnosis"] == EndKind.PARABOLIC
    ok &= s3["diagnosis"] == EndKind.PARABOLIC
    _check("end classification (15 Euclidean + warped + barrier sweeps)", ok)


def test_13_decay_and_volume_bounds():
    # surface of revolution eta = e^t: lambda_2 = 1/4, rate 1/6; the
    # barrier tail must decay at least that fast, and both volume bounds
    # must hold with the constant fitted at the smallest R
    M = warped(2, Exponential(1.0))
    lam = cap.p_poincare_bound(0.25, 2.0)
    decay = cap.tail_energy_profile(M, 2.0, 1.0, lam,
                                    list(range(2, 11)))
    vol_h = cap.volume_growth_check(M, 2.0, lam, [2, 4, 6, 8, 10])
    Mp = warped(3, PolyEven(-2.0))
    vol_p = cap.volume_growth_check(Mp, 2.0, 0.3, [2, 4, 6, 8])
    ok = (lam == pytest.approx(0.25) and decay["ok"]
          and max(decay["slopes"]) <= -1.0 / 6.0
          and vol_h["ok"] and vol_p["ok"]
          and vol_p["kind"] == EndKind.PARABOLIC)
    _check("decay bound + volume growth (hyperbolic and parabolic)", ok)


def test_14_finite_energy_example():
    # u = arctan t + pi/2 on A = (1+t^2)^2: E_3 = pi, the two-end
    # barrier has sup/inf within 1e-3 of 1/0 and energy pi^-2
    f, M = vf.arctan_model_field()
    e3 = vf.analytic_q_energy(M, f.analytic.du, 3.0)
    bf, meta = sv.two_end_barrier(M, 3.0, -500.0, 500.0, n=2001)
    ok = (abs(e3 - np.pi) <= 1e-3
          and abs(meta["sup"] - 1.0) <= 1e-3
          and abs(meta["inf"]) <= 1e-3
          and abs(meta["E_p"] - np.pi**-2) / np.pi**-2 <= 5e-3
          and M.classify_end(3.0, +1) == EndKind.HYPERBOLIC
          and M.classify_end(3.0, -1) == EndKind.HYPERBOLIC)
    _check("finite-energy model example (E_3 = pi, barrier)", ok)


def test_15_deterministic_outputs(tmp_path):
    # identical reruns must produce byte-identical CSV artifacts
    cfg = tmp_path / "euclid3.cfg"
    cfg.write_text("variant = euclidean\nm = 3\n")
    dirs = (tmp_path / "r1", tmp_path / "r2")
    for d in dirs:
        d.mkdir()
        assert cli.run(["continuation", "--manifold", str(cfg), "--p", "3",
                        "--nodes", "129", "--steps", "16",
                        "--out", str(d)]) == 0
        assert cli.run(["verify", "kato", "--gallery", "b",
                        "--out", str(d)]) == 0
        assert cli.run(["report", "--out", str(d)]) == 0
    ok = all((dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()
             for name in ("continuation.csv", "verify_kato.csv",
                          "report.csv"))
    _check("byte-identical CSV artifacts across reruns", ok)

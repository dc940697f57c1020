"""Numerical checks of the pointwise identities and integral estimates.

Radial fields reduce every differential-geometric quantity to functions
of t: for u = u(t) on a model manifold the Hessian in an adapted frame
is diag(u'', c u', ..., c u') with c the metric factor, so

    |Hess u|^2 = u''^2 + (m-1) (c u')^2,      |grad|grad u||^2 = u''^2.

Flat 2D fields are handled by finite differences on the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from . import energy as en
from .energy import EnergySpec
from .errors import (
    ConstantsInfeasibleError,
    InvalidInputError,
    NoDataError,
    SingularityError,
    UnsupportedVariantError,
)
from .geometry import ModelManifold, PolyEven, euclidean, warped
from .grid import (
    Analytic1D,
    DiscreteField,
    Grid1D,
    Grid2D,
    _deriv_1d,
    gradient,
    hessian,
)

KAPPA_VARIANTS = ("Theorem1", "RefinedKS", "WeakKa")


def kappa(p: float, m: int, variant: str = "RefinedKS") -> float:
    """Kato-improvement constant; three published strengths."""
    if p <= 1 or m < 2:
        raise InvalidInputError("need p > 1 and m >= 2")
    v = variant.rstrip("'")
    q = (p - 1.0) ** 2
    if v == "Theorem1":
        if p <= 2:
            return q / (m - 1.0)
        return max(1.0 / (m - 1.0), min(q / m, 1.0))
    if v == "RefinedKS":
        return min(q / (m - 1.0), 1.0)
    if v == "WeakKa":
        return 1.0 / (m - 1.0) if p >= 2 else q / (m - 1.0)
    raise InvalidInputError(f"unknown kappa variant {variant!r}")


@dataclass
class VerifierReport:
    name: str
    minimum: float
    maximum: float
    mean: float
    threshold: float
    passed: bool
    excluded: int = 0
    details: dict = dc_field(default_factory=dict)

    def csv_row(self) -> str:
        return "%s,%.12g,%.12g,%.12g,%s" % (
            self.name, self.minimum, self.maximum, self.threshold,
            "pass" if self.passed else "FAIL")


# ---------------------------------------------------------------------------
# radial calculus helpers
# ---------------------------------------------------------------------------


def _radial_frame(field: DiscreteField):
    """(t, u', u'', manifold) for a 1D field, preferring the closed form."""
    grid = field.grid
    if not isinstance(grid, Grid1D):
        raise InvalidInputError("radial path needs a Grid1D field")
    t = grid.nodes
    a = field.analytic
    if a is not None and a.d2u is not None:
        return t, np.asarray(a.du(t), float), np.asarray(a.d2u(t), float), grid.manifold
    du = _deriv_1d(t, field.values)
    d2u = _deriv_1d(t, du)
    return t, du, d2u, grid.manifold


def _hess_sq_radial(t, du, d2u, M: Optional[ModelManifold]):
    """|Hess u|^2 for radial u; flat line when no manifold is attached."""
    if M is None:
        return d2u * d2u
    c = np.asarray(M.metric_factor(t), float)
    return d2u * d2u + (M.m - 1) * (c * du) ** 2


# ---------------------------------------------------------------------------
# Kato ratio
# ---------------------------------------------------------------------------


def kato_ratio(u: DiscreteField, p: float, threshold: Optional[float] = None,
               collar: int = 2) -> VerifierReport:
    """Per-node |Hess u|^2 / |grad|grad u||^2 with degenerate nodes excluded.

    The pass threshold is 1 + kappa(p, m, RefinedKS) - 1e-3; nodes where
    the denominator vanishes count as +inf (the bound holds vacuously).
    """
    if isinstance(u.grid, Grid1D):
        t, du, d2u, M = _radial_frame(u)
        grad_mag = np.abs(du)
        num = _hess_sq_radial(t, du, d2u, M)
        # |grad f| for f = |u'|: difference f itself, per the statement
        f = np.abs(du)
        den = _deriv_1d(t, f) ** 2
        m = M.m if M is not None else 1
        sel = np.ones(t.size, dtype=bool)
        if collar > 0 and u.analytic is None:
            sel[:collar] = sel[-collar:] = False
    elif isinstance(u.grid, Grid2D):
        gx, gy = gradient(u)
        grad_mag = np.hypot(gx, gy)
        uxx, uxy, uyy = hessian(u)
        num = uxx**2 + 2 * uxy**2 + uyy**2
        f = DiscreteField(u.grid, grad_mag)
        fx, fy = gradient(f)
        den = fx**2 + fy**2
        m = 2
        sel = np.zeros(grad_mag.shape, dtype=bool)
        c = max(collar, 1)
        sel[c:-c, c:-c] = True
    else:
        raise InvalidInputError("unsupported grid type")

    theta = threshold if threshold is not None \
        else 1e-8 * float(np.max(grad_mag))
    sel = sel & (grad_mag > theta)
    excluded = int(sel.size - sel.sum())
    if not sel.any():
        raise NoDataError("every node is gradient-degenerate or in the collar")
    num, den = num[sel], den[sel]
    ratio = np.full(num.shape, np.inf)
    nz = den > 0
    ratio[nz] = num[nz] / den[nz]
    thr = 1.0 + kappa(p, m, "RefinedKS") - 1e-3
    finite = ratio[np.isfinite(ratio)]
    mean = float(finite.mean()) if finite.size else np.inf
    return VerifierReport(
        name="kato_ratio",
        minimum=float(ratio.min()), maximum=float(ratio.max()), mean=mean,
        threshold=thr, passed=bool(np.all(ratio >= thr)), excluded=excluded,
        details={"m": m, "p": p, "vacuous": int(np.sum(~nz))})


# ---------------------------------------------------------------------------
# strong form
# ---------------------------------------------------------------------------


def strong_form_residual(u: DiscreteField, p: float) -> VerifierReport:
    """Nodewise f^2 Delta u + (p-2)/2 <grad f^2, grad u>; zero for strongly
    p-harmonic fields, decaying at 2nd order under refinement."""
    if isinstance(u.grid, Grid1D):
        t = u.grid.nodes
        du = _deriv_1d(t, u.values)
        d2u = _deriv_1d(t, du)
        M = u.grid.manifold
        ell = np.asarray(M.log_area_d1(t), float) if M is not None else 0.0
        lap = d2u + ell * du
        f2 = du * du
        res = f2 * lap + 0.5 * (p - 2.0) * _deriv_1d(t, f2) * du
        # nested one-sided stencils at the ends are only 1st order
        res = res[2:-2]
    elif isinstance(u.grid, Grid2D):
        gx, gy = gradient(u)
        uxx, uxy, uyy = hessian(u)
        f2 = gx * gx + gy * gy
        df2 = gradient(DiscreteField(u.grid, f2))
        res = f2 * (uxx + uyy) + 0.5 * (p - 2.0) * (df2[0] * gx + df2[1] * gy)
        res = res[2:-2, 2:-2]
    else:
        raise InvalidInputError("unsupported grid type")
    res = np.abs(np.ravel(res))
    return VerifierReport(
        name="strong_form_residual",
        minimum=float(res.min()), maximum=float(res.max()),
        mean=float(res.mean()), threshold=0.0, passed=True,
        details={"p": p})


# ---------------------------------------------------------------------------
# Bochner residuals
# ---------------------------------------------------------------------------


def _staggered_l_op(grid: Grid1D, coef_mid: np.ndarray, psi: np.ndarray):
    """div(coef grad psi)/A at interior nodes with the energy's fluxes."""
    t = grid.nodes
    flux = coef_mid * np.diff(psi) / grid.h
    mid_area = (grid.area[:-1] + grid.area[1:]) / 2.0
    F = mid_area * flux
    dt = (t[2:] - t[:-2]) / 2.0
    return (F[1:] - F[:-1]) / (dt * grid.area[1:-1])


def bochner_residual(u: DiscreteField, p: float, eps: float,
                     collar: int = 2,
                     collar_frac: float = 0.05) -> VerifierReport:
    """Residual of the perturbed Bochner identity

        1/2 L_eps(f_eps^2) = (p-2)/4 f^{p-4}|grad f^2|^2
                             + f^{p-2}(|Hess u|^2 + Ric(grad u, grad u))

    with the divergence assembled from the same staggered fluxes as the
    energy module.  First-order decay under refinement (nested FD)."""
    if eps <= 0:
        raise SingularityError("the identity is checked for eps > 0 only")
    if isinstance(u.grid, Grid1D):
        grid = u.grid
        t = grid.nodes
        du = _deriv_1d(t, u.values)
        d2u = _deriv_1d(t, du)
        M = grid.manifold
        w = du * du + eps
        # radial linearized coefficient at cell midpoints
        du_mid = np.diff(u.values) / grid.h
        w_mid = du_mid * du_mid + eps
        coef_mid = w_mid ** ((p - 2.0) / 2.0) * (1.0 + (p - 2.0) * du_mid**2 / w_mid)
        lhs_int = 0.5 * _staggered_l_op(grid, coef_mid, w)
        dw = _deriv_1d(t, w)
        hess_sq = _hess_sq_radial(t, du, d2u, M)
        ric = (np.asarray(M.radial_ricci_term(t, du * du), float)
               if M is not None else 0.0)
        rhs = (0.25 * (p - 2.0) * w ** ((p - 4.0) / 2.0) * dw**2
               + w ** ((p - 2.0) / 2.0) * (hess_sq + ric))
        res = np.abs(lhs_int - rhs[1:-1])
        grad_mag = np.abs(du[1:-1])
        # exclude a fixed physical collar so the reported max lives on an
        # n-independent interior region (plus the FD-polluted end nodes)
        ti = t[1:-1]
        width = max(collar_frac * (t[-1] - t[0]),
                    float(collar) * np.max(grid.h))
        keep_c = (ti >= t[0] + width) & (ti <= t[-1] - width)
        if keep_c.any():
            res, grad_mag = res[keep_c], grad_mag[keep_c]
    elif isinstance(u.grid, Grid2D):
        gx, gy = gradient(u)
        w = gx * gx + gy * gy + eps
        fac = w ** ((p - 2.0) / 2.0)
        wx, wy = gradient(DiscreteField(u.grid, w))
        gw = gx * wx + gy * wy
        qx = fac * (wx + (p - 2.0) * gw * gx / w)
        qy = fac * (wy + (p - 2.0) * gw * gy / w)
        dqx = gradient(DiscreteField(u.grid, qx))[0]
        dqy = gradient(DiscreteField(u.grid, qy))[1]
        lhs = 0.5 * (dqx + dqy)
        uxx, uxy, uyy = hessian(u)
        hess_sq = uxx**2 + 2 * uxy**2 + uyy**2
        rhs = (0.25 * (p - 2.0) * w ** ((p - 4.0) / 2.0) * (wx**2 + wy**2)
               + fac * hess_sq)
        c = max(collar, 2)
        res = np.abs((lhs - rhs)[c:-c, c:-c]).ravel()
        grad_mag = np.hypot(gx, gy)[c:-c, c:-c].ravel()
        lhs_int = lhs
    else:
        raise InvalidInputError("unsupported grid type")
    theta = 1e-8 * float(np.max(grad_mag)) if np.max(grad_mag) > 0 else 0.0
    keep = grad_mag > theta
    excluded = int(keep.size - keep.sum())
    if not keep.any():
        res_kept = res  # fully degenerate field: keep everything (all zeros)
        excluded = 0
    else:
        res_kept = res[keep]
    return VerifierReport(
        name="bochner_residual",
        minimum=float(res_kept.min()), maximum=float(res_kept.max()),
        mean=float(res_kept.mean()), threshold=0.0, passed=True,
        excluded=excluded, details={"p": p, "eps": eps})


def bochner_s_residual(u: DiscreteField, p: float, s: float,
                       eps: float) -> VerifierReport:
    """Termwise residual of the generalized five-term identity

      1/2 L_{s,eps}(f^2) = s/4 f^{s-2}|grad f^2|^2
        + f^s (|Hess u|^2 + Ric(grad u, grad u))
        + (p-2)(s-p+2)/4 f^{s-4} <grad u, grad f^2>^2
        + eps (f^{s-2}<grad u, grad(Delta u)>
               + (p-4)/2 f^{s-4} <grad u, grad f^2> Delta u)

    Requires an analytic descriptor with third derivatives: everything
    is evaluated in closed form, so the residual must sit at rounding
    level for strongly p-harmonic u."""
    if eps <= 0:
        raise SingularityError("eps must be positive")
    a = u.analytic
    if a is None or a.d2u is None or a.d3u is None:
        raise InvalidInputError(
            "needs an analytic descriptor with u', u'', u'''")
    grid = u.grid
    if not isinstance(grid, Grid1D):
        raise InvalidInputError("analytic path is radial (Grid1D)")
    M = grid.manifold
    t = grid.nodes
    du = np.asarray(a.du(t), float)
    d2u = np.asarray(a.d2u(t), float)
    d3u = np.asarray(a.d3u(t), float)
    if M is not None:
        ell = np.asarray(M.log_area_d1(t), float)
        ell1 = np.asarray(M.log_area_d2(t), float)
        ric = np.asarray(M.radial_ricci_term(t, du * du), float)
    else:
        ell = ell1 = np.zeros_like(t)
        ric = np.zeros_like(t)
    w = du * du + eps
    dw = 2.0 * du * d2u
    d2w = 2.0 * (d2u * d2u + du * d3u)
    # LHS: 1/2 (1/A)(A G dw)' with G = w^{s/2} + (p-2) w^{s/2-1} u'^2
    G = w ** (s / 2.0) + (p - 2.0) * w ** (s / 2.0 - 1.0) * du * du
    dG = (0.5 * s * w ** (s / 2.0 - 1.0) * dw
          + (p - 2.0) * ((s / 2.0 - 1.0) * w ** (s / 2.0 - 2.0) * dw * du * du
                         + w ** (s / 2.0 - 1.0) * 2.0 * du * d2u))
    lhs = 0.5 * (dG * dw + G * d2w + ell * G * dw)
    hess_sq = _hess_sq_radial(t, du, d2u, M)
    lap = d2u + ell * du
    dlap = d3u + ell * d2u + ell1 * du
    rhs = (0.25 * s * w ** (s / 2.0 - 1.0) * dw**2
           + w ** (s / 2.0) * (hess_sq + ric)
           + 0.25 * (p - 2.0) * (s - p + 2.0) * w ** (s / 2.0 - 2.0)
           * (du * dw) ** 2
           + eps * (w ** (s / 2.0 - 1.0) * du * dlap
                    + 0.5 * (p - 4.0) * w ** (s / 2.0 - 2.0) * du * dw * lap))
    res = np.abs(lhs - rhs)
    scale = float(np.max(np.abs(lhs)) + np.max(np.abs(rhs)) + 1.0)
    return VerifierReport(
        name="bochner_s_residual",
        minimum=float(res.min()), maximum=float(res.max()),
        mean=float(res.mean()), threshold=1e-8 * scale,
        passed=bool(np.max(res) <= 1e-8 * scale),
        details={"p": p, "s": s, "eps": eps, "scale": scale})


# ---------------------------------------------------------------------------
# Caccioppoli estimates
# ---------------------------------------------------------------------------


def _node_gradients(f: DiscreteField):
    if isinstance(f.grid, Grid1D):
        if f.analytic is not None:
            return np.abs(np.asarray(f.analytic.du(f.grid.nodes), float))
        return np.abs(_deriv_1d(f.grid.nodes, f.values))
    gx, gy = gradient(f)
    return np.hypot(gx, gy)


def _node_integral(grid, values) -> float:
    if isinstance(grid, Grid1D):
        return float(np.dot(grid.weights, values))
    w = np.full(values.shape, grid.hx * grid.hy)
    w[0, :] *= 0.5; w[-1, :] *= 0.5; w[:, 0] *= 0.5; w[:, -1] *= 0.5
    return float(np.sum(w * values))


def caccioppoli_check(w: DiscreteField, psi: DiscreteField,
                      p: float) -> VerifierReport:
    """||psi grad w||_p <= p ||grad psi . w||_p for positive p-subharmonic w."""
    if w.grid is not psi.grid:
        raise InvalidInputError("w and psi must share a grid")
    support = psi.values != 0.0
    if np.any(w.values[support] <= 0.0):
        raise InvalidInputError("w must be positive on the support of psi")
    if w.analytic is None:
        # weak subharmonicity: the energy gradient must be <= 0 at
        # interior nodes (up to FD noise)
        r = en.weak_residual(EnergySpec(p, 1e-300 if p < 2 else 0.0), w)
        scale = float(np.max(np.abs(r))) + 1e-300
        if np.any(r > 1e-6 * scale + 1e-12):
            raise InvalidInputError("w is not p-subharmonic on this grid")
    gw = _node_gradients(w)
    gpsi = _node_gradients(psi)
    lhs = _node_integral(w.grid, (np.abs(psi.values) * gw) ** p) ** (1.0 / p)
    rhs = _node_integral(w.grid, (gpsi * np.abs(w.values)) ** p) ** (1.0 / p)
    tol = 1e-9
    ok = lhs <= p * rhs * (1.0 + tol) + tol
    return VerifierReport(
        name="caccioppoli", minimum=lhs, maximum=p * rhs, mean=lhs,
        threshold=p * rhs, passed=bool(ok),
        details={"lhs": lhs, "rhs": p * rhs, "p": p})


def weighted_caccioppoli_constants(p: float, kappa_val: float, tau: float,
                                   eps1: float, eps2: float):
    """(B, C) from the weighted Caccioppoli proof; C must be positive."""
    if not (0 < eps1 and 0 < eps2 < 1):
        raise InvalidInputError("need eps1 > 0 and 0 < eps2 < 1")
    base = (p - 1.0 + kappa_val - eps1) / p**2
    if base <= 0:
        raise ConstantsInfeasibleError(
            "eps1 too large: p - 1 + kappa - eps1 must stay positive")
    B = (1.0 + abs(p - 2.0)) ** 2 / eps1 + 4.0 * (1.0 / eps2 - 1.0) * base
    C = 4.0 * (1.0 - eps2) * base - tau
    if C <= 0:
        raise ConstantsInfeasibleError(
            f"C = {C:.6g} <= 0 for (tau, eps1, eps2) = "
            f"({tau}, {eps1}, {eps2})")
    return B, C


def weighted_caccioppoli_check(M: ModelManifold, p: float,
                               u_eps: DiscreteField, eps: float,
                               kappa_val: float, tau: float,
                               eps1: float, eps2: float,
                               R: float) -> VerifierReport:
    """C int_{B(R)} rho |grad u|^p <= (100 B / R^2) int_{shell} (|grad u|^2+eps)^{p/2}.

    B(R) is the interval |t| <= R; the field must cover B(2R).
    """
    grid = u_eps.grid
    if not isinstance(grid, Grid1D) or grid.manifold is not M:
        raise InvalidInputError("field must live on a 1D grid over M")
    t = grid.nodes
    if t[0] > -2.0 * R or t[-1] < 2.0 * R:
        raise InvalidInputError("field must cover B(2R)")
    rho = np.asarray(M.weight_rho(t), float)
    # Ric >= -tau rho must hold pointwise for the estimate's hypotheses
    ric_unit = np.asarray(M.radial_ricci_term(t, np.ones_like(t)), float)
    if np.any(ric_unit < -tau * rho - 1e-12 * (1.0 + np.abs(rho))):
        raise InvalidInputError("Ric >= -tau rho fails on the grid")
    B, C = weighted_caccioppoli_constants(p, kappa_val, tau, eps1, eps2)
    du = _deriv_1d(t, u_eps.values)
    inner = np.abs(t) <= R
    shell = (np.abs(t) > R) & (np.abs(t) <= 2.0 * R)
    lhs = C * _node_integral(grid, np.where(inner, rho * np.abs(du) ** p, 0.0))
    rhs = (100.0 * B / R**2) * _node_integral(
        grid, np.where(shell, (du * du + eps) ** (p / 2.0), 0.0))
    margin = rhs - lhs
    return VerifierReport(
        name="weighted_caccioppoli", minimum=lhs, maximum=rhs, mean=margin,
        threshold=rhs, passed=bool(lhs <= rhs * (1.0 + 1e-9)),
        details={"B": B, "C": C, "lhs": lhs, "rhs": rhs, "margin": margin})


# ---------------------------------------------------------------------------
# vector inequalities
# ---------------------------------------------------------------------------


def monotonicity_gap(X, Y, p: float) -> dict:
    """<X-Y, |X|^{p-2}X - |Y|^{p-2}Y> against the comparison term Psi."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if X.shape != Y.shape:
        raise InvalidInputError("X and Y must have equal shapes")
    nx = np.linalg.norm(X, axis=-1)
    ny = np.linalg.norm(Y, axis=-1)
    ax = np.where(nx > 0, nx ** (p - 2.0), 0.0)
    ay = np.where(ny > 0, ny ** (p - 2.0), 0.0)
    diff = X - Y
    lhs = np.sum(diff * (ax[..., None] * X - ay[..., None] * Y), axis=-1)
    d = np.linalg.norm(diff, axis=-1)
    if p >= 2:
        psi = d**p
    else:
        psi = (p - 1.0) * d**2 / (1.0 + nx**2 + ny**2) ** ((2.0 - p) / 2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(psi > 0, lhs / psi, np.inf)
    squeeze = lhs.size == 1
    out = {"lhs": lhs, "psi": psi, "ratio": ratio}
    if squeeze:
        out = {k: float(v.reshape(-1)[0]) for k, v in out.items()}
    return out


def monotonicity_suite(p_values=(1.5, 2.0, 3.0, 4.0), n: int = 100_000,
                       dim: int = 3, seed: int = 0) -> dict:
    """Random-pair sweep: lhs >= 0, zero only at X = Y, and the empirical
    constant C_emp = min ratio re-verified at half strength on a fresh
    sample.  Adversarial near-equal and near-collinear pairs included."""
    results = {}
    for ip, p in enumerate(p_values):
        rng = np.random.default_rng(seed + 1000 * ip)
        X = rng.normal(scale=3.0, size=(n, dim))
        Y = rng.normal(scale=3.0, size=(n, dim))
        n_adv = n // 10
        X[:n_adv] = rng.normal(scale=3.0, size=(n_adv, dim))
        Y[:n_adv] = X[:n_adv] * (1.0 + rng.normal(scale=1e-6, size=(n_adv, 1)))
        X[n_adv:2 * n_adv] = rng.normal(scale=3.0, size=(n_adv, dim))
        Y[n_adv:2 * n_adv] = X[n_adv:2 * n_adv] * rng.uniform(
            -1.5, 1.5, size=(n_adv, 1))
        # clip to |X|, |Y| <= 10
        for Z in (X, Y):
            nz = np.linalg.norm(Z, axis=1, keepdims=True)
            np.divide(Z, nz / 10.0, out=Z, where=nz > 10.0)
        g = monotonicity_gap(X, Y, p)
        lhs, psi, ratio = g["lhs"], g["psi"], g["ratio"]
        # per-pair rounding floor: lhs is assembled by subtraction, so
        # values below eps_mach * (|X|+|Y|)^p are indistinguishable from 0
        scale = (np.linalg.norm(X, axis=1) + np.linalg.norm(Y, axis=1)) ** p
        floor = 1e-12 * (scale + 1.0)
        neg = int(np.sum(lhs < -floor))
        eq = np.all(X == Y, axis=1)
        zero_bad = int(np.sum((lhs <= 0) & ~eq & (psi > floor)))
        finite = np.isfinite(ratio) & (psi > floor)
        c_emp = float(np.min(ratio[finite]))
        rng2 = np.random.default_rng(seed + 1000 * ip + 1)
        X2 = rng2.normal(scale=3.0, size=(n, dim))
        Y2 = rng2.normal(scale=3.0, size=(n, dim))
        g2 = monotonicity_gap(X2, Y2, p)
        recheck = bool(np.all(g2["lhs"] >= 0.5 * c_emp * g2["psi"]
                              - 1e-13 * (1.0 + np.abs(g2["lhs"]))))
        results[p] = {"violations": neg, "zero_off_diagonal": zero_bad,
                      "C_emp": c_emp, "half_constant_recheck": recheck,
                      "ok": neg == 0 and zero_bad == 0 and recheck}
    results["ok"] = all(results[p]["ok"] for p in p_values)
    return results


def regularization_gap(X, Y, eps: float, p: float,
                       delta1: float) -> VerifierReport:
    """(|X|^2+eps)^{p/2} - (|Y|^2+eps)^{p/2} <= a (|X|^p - |Y|^p) + delta
    with the proof's explicit (a, delta) for the branch 2q < p <= 2q+2."""
    if eps < 0 or delta1 <= 0:
        raise InvalidInputError("need eps >= 0 and delta1 > 0")
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    nx = float(np.linalg.norm(X))
    ny = float(np.linalg.norm(Y))
    if nx < ny:
        raise InvalidInputError("requires |X| >= |Y|")
    if p < 1:
        raise InvalidInputError("p must be >= 1")
    if p <= 2:
        a, delta = 1.0, 0.0
    else:
        q = int(np.ceil(p / 2.0)) - 1
        x = p * eps / delta1**2
        series = sum(x**k for k in range(1, q + 1))
        a = 1.0 + sum(x**k / math.factorial(k) for k in range(1, q + 1))
        delta = series * delta1**p
    lhs = (nx**2 + eps) ** (p / 2.0) - (ny**2 + eps) ** (p / 2.0)
    rhs = a * (nx**p - ny**p) + delta
    ok = lhs <= rhs + 1e-12 * (1.0 + abs(rhs))
    return VerifierReport(
        name="regularization_gap", minimum=lhs, maximum=rhs, mean=rhs - lhs,
        threshold=rhs, passed=bool(ok),
        details={"a": a, "delta": delta, "lhs": lhs, "rhs": rhs})


def weighted_poincare_check(M: ModelManifold,
                            fields: Sequence[DiscreteField]) -> VerifierReport:
    """int rho Psi^2 dv <= int |grad Psi|^2 dv for compactly supported Psi
    on an admissible warped product."""
    if M.variant != "warped":
        raise UnsupportedVariantError(
            "the weighted inequality needs a warped product (rho undefined "
            "on the Euclidean variant)")
    if not fields:
        raise InvalidInputError("no test functions supplied")
    rows = []
    for f in fields:
        grid = f.grid
        if not isinstance(grid, Grid1D) or grid.manifold is not M:
            raise InvalidInputError("test functions must live on 1D grids over M")
        if f.values[0] != 0.0 or f.values[-1] != 0.0:
            raise InvalidInputError("test functions must vanish at the grid ends")
        adm = M.admissibility_check(grid.nodes)
        if not adm["ok"]:
            raise InvalidInputError(
                f"manifold fails admissibility: {adm['violations'][:3]}")
        rho = np.asarray(M.weight_rho(grid.nodes), float)
        lhs = _node_integral(grid, rho * f.values**2)
        g = _node_gradients(f)
        rhs = _node_integral(grid, g * g)
        rows.append((lhs, rhs))
    margins = [r - l for l, r in rows]
    scale = max(abs(r) for _, r in rows) + 1.0
    ok = all(l <= r + 1e-9 * scale for l, r in rows)
    return VerifierReport(
        name="weighted_poincare",
        minimum=float(min(margins)), maximum=float(max(margins)),
        mean=float(np.mean(margins)), threshold=0.0, passed=bool(ok),
        details={"pairs": rows})


# ---------------------------------------------------------------------------
# examples with closed forms
# ---------------------------------------------------------------------------


def analytic_q_energy(M: ModelManifold, du, q: float,
                      a: float = -np.inf, b: float = np.inf) -> float:
    """int_a^b |u'(t)|^q A(t) dt by adaptive quadrature: the continuum
    q-energy of a radial profile given in closed form."""
    from scipy.integrate import quad

    def integrand(t):
        with np.errstate(over="ignore"):
            return np.abs(du(t)) ** q * M.area(t)

    val, _ = quad(integrand, a, b, limit=400)
    return val


def log_radial_field(m: int = 2, a: float = 1.0, b: float = np.e,
                     n: int = 257) -> DiscreteField:
    """u = log t on the radial Euclidean model: m-harmonic on the annulus."""
    grid = Grid1D.uniform(a, b, n, manifold=euclidean(m))
    ana = Analytic1D(u=np.log, du=lambda t: 1.0 / t,
                     d2u=lambda t: -1.0 / t**2, d3u=lambda t: 2.0 / t**3)
    return DiscreteField(grid, np.log(grid.nodes), analytic=ana)


def power_radial_field(p: float, m: int, a: float = 1.0, b: float = 2.0,
                       n: int = 257) -> DiscreteField:
    """u = t^{(p-m)/(p-1)}: p-harmonic on the radial Euclidean model."""
    if p == m:
        raise InvalidInputError("exponent degenerates at p = m; use the log field")
    al = (p - m) / (p - 1.0)
    grid = Grid1D.uniform(a, b, n, manifold=euclidean(m))
    ana = Analytic1D(
        u=lambda t: t**al,
        du=lambda t: al * t ** (al - 1.0),
        d2u=lambda t: al * (al - 1.0) * t ** (al - 2.0),
        d3u=lambda t: al * (al - 1.0) * (al - 2.0) * t ** (al - 3.0))
    return DiscreteField(grid, grid.nodes**al, analytic=ana)


def arctan_model_field(t_min: float = -30.0, t_max: float = 30.0,
                       n: int = 2001):
    """The finite-energy 3-harmonic field on the warped product with
    A = (1 + t^2)^2: u(t) = arctan t + pi/2, normalized to (0, pi)."""
    M = warped(3, PolyEven(2.0))
    grid = Grid1D.uniform(t_min, t_max, n, manifold=M)
    ana = Analytic1D(
        u=lambda t: np.arctan(t) + np.pi / 2.0,
        du=lambda t: 1.0 / (1.0 + t * t),
        d2u=lambda t: -2.0 * t / (1.0 + t * t) ** 2,
        d3u=lambda t: (6.0 * t * t - 2.0) / (1.0 + t * t) ** 3)
    return DiscreteField(grid, np.arctan(grid.nodes) + np.pi / 2.0,
                         analytic=ana), M


def example_gallery() -> list:
    """Closed-form fields with expected check values."""
    items = []
    f = log_radial_field(m=2)
    items.append({"name": "log_annulus_m2", "field": f, "p": 2.0,
                  "expected": {"kato_ratio": 2.0, "residual": 0.0}})
    f = power_radial_field(p=3.0, m=4)
    items.append({"name": "power_p3_m4", "field": f, "p": 3.0,
                  "expected": {"kato_ratio": 7.0 / 3.0, "residual": 0.0}})
    g2 = Grid2D(0.0, 1.0, 0.0, 1.0, 33, 33)
    items.append({"name": "constant", "p": 2.0,
                  "field": DiscreteField(g2, np.ones((33, 33))),
                  "expected": {"residual": 0.0}})
    items.append({"name": "linear",
                  "field": DiscreteField.from_function(g2, lambda x, y: x),
                  "p": 3.0,
                  "expected": {"residual": 0.0, "kato_vacuous": True}})
    f, M = arctan_model_field()
    items.append({"name": "arctan_warped", "field": f, "p": 3.0,
                  "manifold": M,
                  "expected": {"q_energy": {3.0: np.pi},
                               "barrier_energy": np.pi**-2,
                               "ends": ("Hyperbolic", "Hyperbolic"),
                               "residual": 0.0}})
    return items

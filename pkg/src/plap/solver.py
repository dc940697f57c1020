"""Dirichlet solves for the perturbed p-Laplacian.

Damped Newton on the convex discrete energy: direct tridiagonal solves
in 1D, Jacobi-preconditioned conjugate gradients in 2D (the energy
Hessian is symmetric positive definite on free nodes for eps > 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import solve_banded
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import LinearOperator, cg, spsolve

from . import energy as en
from .energy import EnergySpec
from .errors import (
    InvalidInputError,
    NoBarrierError,
    NonConvergenceError,
)
from .geometry import EndKind, ModelManifold
from .grid import Analytic1D, DiscreteField, Grid1D, Grid2D, wp_distance

EPS_FLOOR = 1e-14


def default_schedule(eps0: float = 1.0, steps: int = 20) -> np.ndarray:
    return eps0 * 0.5 ** np.arange(steps)


@dataclass(frozen=True)
class SolveConfig:
    eps_schedule: Sequence[float] = dc_field(default_factory=default_schedule)
    residual_tol: float = 1e-12
    max_newton_iters: int = 50
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4

    def __post_init__(self):
        sched = np.asarray(self.eps_schedule, dtype=float)
        if sched.size and (np.any(sched <= 0) or np.any(np.diff(sched) >= 0)):
            raise InvalidInputError("eps schedule must be strictly decreasing, positive")
        if self.residual_tol <= 0 or self.max_newton_iters < 1:
            raise InvalidInputError("tolerances must be positive")


@dataclass
class SolveReport:
    steps: list = dc_field(default_factory=list)
    distances_to_final: list = dc_field(default_factory=list)
    consecutive_distances: list = dc_field(default_factory=list)
    sandwich: list = dc_field(default_factory=list)

    def add_step(self, eps, iters, residual, e_eps, e_p):
        self.steps.append(
            {"eps": eps, "iterations": iters, "residual": residual,
             "energy_eps": e_eps, "energy_p": e_p}
        )


# ---------------------------------------------------------------------------
# boundary handling
# ---------------------------------------------------------------------------


def _normalize_boundary(grid, boundary):
    """Accepts (ua, ub) for Grid1D or (mask, values) for either grid."""
    if isinstance(grid, Grid1D) and isinstance(boundary, tuple) \
            and len(boundary) == 2 and np.isscalar(boundary[0]):
        mask = grid.boundary_mask()
        vals = np.zeros(grid.n)
        vals[0], vals[-1] = boundary
        return mask, vals
    mask, vals = boundary
    mask = np.asarray(mask, dtype=bool)
    vals = np.asarray(vals, dtype=float)
    if not np.all(mask[grid.boundary_mask()]):
        raise InvalidInputError("all grid boundary nodes must be fixed")
    if not np.all(np.isfinite(vals[mask])):
        raise InvalidInputError("boundary values must be finite")
    return mask, vals


def _initial_guess(grid, mask, vals):
    """Linear interpolation of the fixed values (1D) or their mean (2D)."""
    u = np.array(vals, dtype=float)
    if isinstance(grid, Grid1D):
        fixed_t = grid.nodes[mask]
        u[~mask] = np.interp(grid.nodes[~mask], fixed_t, vals[mask])
    else:
        u[~mask] = float(np.mean(vals[mask]))
    return u


# ---------------------------------------------------------------------------
# Newton step solvers
# ---------------------------------------------------------------------------


def _newton_direction(spec, field, mask, rhs):
    grid = field.grid
    free = ~mask.ravel()
    if isinstance(grid, Grid1D):
        grad, meas = en.cell_data_1d(field)
        g2 = grad * grad
        k = (en._phi_d(g2, spec.p, spec.eps)
             + en._phi_dd_aniso(g2, spec.p, spec.eps) * g2) * meas / grid.h**2
        n = grid.n
        diag = np.zeros(n)
        diag[:-1] += k
        diag[1:] += k
        off = -k
        if mask[0] and mask[-1] and not np.any(mask[1:-1]):
            # pure two-point boundary: banded tridiagonal solve
            ab = np.zeros((3, n - 2))
            ab[1] = diag[1:-1]
            ab[0, 1:] = off[1:-1]
            ab[2, :-1] = off[1:-1]
            d = np.zeros(n)
            d[1:-1] = solve_banded((1, 1), ab, rhs[1:-1])
            return d
        rows, cols, vals_ = [], [], []
        idx = np.arange(n)
        rows.extend(idx); cols.extend(idx); vals_.extend(diag)
        rows.extend(idx[:-1]); cols.extend(idx[1:]); vals_.extend(off)
        rows.extend(idx[1:]); cols.extend(idx[:-1]); vals_.extend(off)
        K = csr_matrix((vals_, (rows, cols)), shape=(n, n))
        Kff = K[free][:, free]
        d = np.zeros(n)
        d[free] = spsolve(Kff.tocsc(), rhs.ravel()[free])
        return d
    # 2D: matrix-free CG with Jacobi preconditioner
    shape = field.values.shape
    nfree = int(free.sum())
    diag = en.hessian_diagonal(spec, field, mask).ravel()[free]

    def matvec(x):
        full = np.zeros(shape).ravel()
        full[free] = x
        out = en.linearized_action(spec, field,
                                   DiscreteField(grid, full.reshape(shape)),
                                   fixed_mask=mask)
        return out.ravel()[free]

    A = LinearOperator((nfree, nfree), matvec=matvec)
    M = LinearOperator((nfree, nfree), matvec=lambda x: x / diag)
    b = rhs.ravel()[free]
    x, info = cg(A, b, rtol=1e-10, atol=0.0, maxiter=20 * nfree, M=M)
    if info != 0:
        raise NonConvergenceError(f"CG failed to converge (info={info})")
    d = np.zeros(shape).ravel()
    d[free] = x
    return d.reshape(shape)


# ---------------------------------------------------------------------------
# Dirichlet solve
# ---------------------------------------------------------------------------


def solve_dirichlet(spec: EnergySpec, grid, boundary,
                    cfg: Optional[SolveConfig] = None,
                    initial: Optional[np.ndarray] = None):
    """Minimize E_{p,eps} over fields with the given fixed values.

    Returns (DiscreteField, SolveReport).  eps is floored at 1e-14.
    """
    cfg = cfg or SolveConfig()
    eps = max(spec.eps, EPS_FLOOR)
    if spec.eps <= 0:
        raise InvalidInputError("solve_dirichlet needs eps > 0")
    spec = EnergySpec(spec.p, eps)
    mask, vals = _normalize_boundary(grid, boundary)
    report = SolveReport()

    fixed = vals[mask]
    if np.ptp(fixed) == 0.0:
        u = np.full_like(vals, fixed.flat[0])
        f = DiscreteField(grid, u)
        report.add_step(eps, 0, 0.0, en.energy(spec, f),
                        en.q_energy(f, spec.p))
        return f, report

    u = np.array(initial, dtype=float) if initial is not None \
        else _initial_guess(grid, mask, vals)
    u[mask] = vals[mask]
    f = DiscreteField(grid, u)
    e_val = en.energy(spec, f)
    r = en.weak_residual(spec, f, mask)
    # tolerance relative to the elementary flux magnitude: the residual's
    # rounding floor grows with the fluxes (roughly like 1/h)
    tol = cfg.residual_tol * (1.0 + en.residual_scale(spec, f))
    # a full Newton step that no longer halves the residual means the
    # assembly's rounding floor is reached; accept if plausibly small
    guard = 1e-6 * (1.0 + en.residual_scale(spec, f))
    iters = 0
    r_prev = np.inf
    while np.max(np.abs(r)) > tol:
        if (iters > 0 and alpha == 1.0
                and np.max(np.abs(r)) >= 0.5 * r_prev
                and np.max(np.abs(r)) <= guard):
            break
        if iters >= cfg.max_newton_iters:
            report.add_step(eps, iters, float(np.max(np.abs(r))), e_val,
                            en.q_energy(f, spec.p))
            raise NonConvergenceError(
                f"Newton did not reach tol={tol:.3e} in "
                f"{cfg.max_newton_iters} iterations "
                f"(residual {np.max(np.abs(r)):.3e})",
                best=f, report=report)
        d = _newton_direction(spec, f, mask, -r)
        slope = float(np.sum(r * d))  # negative for a descent direction
        alpha = 1.0
        # rounding slack: near the optimum the true decrease drops below
        # the float resolution of the energy and pure Armijo stalls
        slack = 16.0 * np.finfo(float).eps * (1.0 + abs(e_val))
        while True:
            trial = DiscreteField(grid, f.values + alpha * d)
            e_trial = en.energy(spec, trial)
            if e_trial <= e_val + cfg.armijo_c * alpha * slope + slack:
                break
            alpha *= cfg.backtrack_factor
            if alpha < 1e-14:
                raise NonConvergenceError("line search collapsed", best=f,
                                          report=report)
        f, e_val = trial, e_trial
        r_prev = float(np.max(np.abs(r)))
        r = en.weak_residual(spec, f, mask)
        tol = cfg.residual_tol * (1.0 + en.residual_scale(spec, f))
        iters += 1
    report.add_step(eps, iters, float(np.max(np.abs(r))), e_val,
                    en.q_energy(f, spec.p))
    return f, report


def epsilon_continuation(p: float, grid, boundary,
                         cfg: Optional[SolveConfig] = None):
    """Solve along the eps schedule with warm starts.

    Returns (list of DiscreteField, SolveReport) with W^{1,p} distances
    of every iterate to the final one and between consecutive iterates.
    """
    cfg = cfg or SolveConfig()
    sched = np.asarray(cfg.eps_schedule, dtype=float)
    if sched.size == 0:
        raise InvalidInputError("empty eps schedule")
    report = SolveReport()
    fields = []
    initial = None
    if p != 2:
        # harmonic start: cheap, in the right boundary class
        f0, _ = solve_dirichlet(EnergySpec(2.0, sched[0]), grid, boundary, cfg)
        initial = f0.values
    for eps in sched:
        f, rep = solve_dirichlet(EnergySpec(p, eps), grid, boundary, cfg,
                                 initial=initial)
        report.steps.extend(rep.steps)
        fields.append(f)
        initial = f.values
    final = fields[-1]
    report.distances_to_final = [wp_distance(f, final, p) for f in fields]
    report.consecutive_distances = [
        wp_distance(fields[i], fields[i + 1], p) for i in range(len(fields) - 1)
    ]
    for f, eps in zip(fields, sched):
        report.sandwich.append(sandwich_check(p, eps, final, f))
    return fields, report


def sandwich_check(p: float, eps: float, u: DiscreteField,
                   u_eps: DiscreteField) -> dict:
    """Verify E_p(u) <= E_p(u_eps) <= E_{p,eps}(u_eps) <= E_{p,eps}(u)."""
    if u.grid is not u_eps.grid:
        raise InvalidInputError("fields must share a grid")
    bmask = u.grid.boundary_mask()
    if not np.allclose(u.values[bmask], u_eps.values[bmask],
                       rtol=0.0, atol=1e-8 * (1.0 + np.max(np.abs(u.values)))):
        raise InvalidInputError("boundary values differ")
    ep_u = en.q_energy(u, p)
    ep_ue = en.q_energy(u_eps, p)
    epe_ue = en.energy(EnergySpec(p, eps), u_eps)
    epe_u = en.energy(EnergySpec(p, eps), u)
    chain = [ep_u, ep_ue, epe_ue, epe_u]
    tol = 1e-8 * (1.0 + max(abs(v) for v in chain))
    ok = all(chain[i] <= chain[i + 1] + tol for i in range(3))
    return {"E_p(u)": ep_u, "E_p(u_eps)": ep_ue,
            "E_p_eps(u_eps)": epe_ue, "E_p_eps(u)": epe_u,
            "tolerance": tol, "pass": ok}


# ---------------------------------------------------------------------------
# closed-form radial solutions
# ---------------------------------------------------------------------------


def _phi_on_nodes(M: ModelManifold, p: float, nodes: np.ndarray) -> np.ndarray:
    """Cumulative int_{t0}^{t} A^{-1/(p-1)} on the node set."""
    pieces = [0.0]
    for a, b in zip(nodes[:-1], nodes[1:]):
        pieces.append(M.phi_integral(p, a, b))
    return np.cumsum(pieces)


def radial_p_harmonic(M: ModelManifold, p: float, a: float, b: float,
                      u_a: float, u_b: float, n: int = 257) -> DiscreteField:
    """Exact extremal of the p-energy between levels u_a at a, u_b at b.

    u(t) = u_a + (u_b - u_a) Phi(t) / Phi(b) with
    Phi(t) = int_a^t A^{-1/(p-1)} ds; carries an analytic descriptor.
    """
    if not a < b:
        raise InvalidInputError("need a < b")
    grid = Grid1D.uniform(a, b, n, manifold=M)
    if u_a == u_b:
        const = Analytic1D(u=lambda t: np.full_like(np.asarray(t, float), u_a),
                           du=lambda t: np.zeros_like(np.asarray(t, float)),
                           d2u=lambda t: np.zeros_like(np.asarray(t, float)))
        return DiscreteField(grid, np.full(n, float(u_a)), analytic=const)
    phi = _phi_on_nodes(M, p, grid.nodes)
    scale = (u_b - u_a) / phi[-1]
    vals = u_a + scale * phi
    expo = -1.0 / (p - 1.0)

    def du(t):
        return scale * np.asarray(M.area(t)) ** expo

    def d2u(t):
        A = np.asarray(M.area(t))
        return scale * expo * A ** (expo - 1.0) * np.asarray(M.area_d1(t))

    def u(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.array([u_a + scale * (M.phi_integral(p, a, ti) if ti > a else 0.0)
                        for ti in t])
        return out if out.size > 1 else float(out[0])

    return DiscreteField(grid, vals, analytic=Analytic1D(u=u, du=du, d2u=d2u))


def two_end_barrier(M: ModelManifold, p: float, t_min: float, t_max: float,
                    n: int = 513):
    """Barrier h = Phi(t)/Phi(+inf), Phi(t) = int_{-inf}^t A^{-1/(p-1)}.

    Requires both ends p-hyperbolic.  Returns (field, metadata) with
    metadata sup/inf over the grid and E_p = Phi(inf)^{1-p}.
    """
    for direction in (+1, -1):
        if M.classify_end(p, direction) != EndKind.HYPERBOLIC:
            raise NoBarrierError(
                f"end toward {'+' if direction > 0 else '-'}inf is p-parabolic; "
                "no two-end barrier exists")
    grid = Grid1D.uniform(t_min, t_max, n, manifold=M)
    phi_left = M.phi_integral(p, -np.inf, t_min)
    phi = phi_left + _phi_on_nodes(M, p, grid.nodes)
    phi_total = phi[-1] + M.phi_integral(p, t_max, np.inf)
    vals = phi / phi_total
    expo = -1.0 / (p - 1.0)
    scale = 1.0 / phi_total

    def du(t):
        return scale * np.asarray(M.area(t)) ** expo

    def d2u(t):
        A = np.asarray(M.area(t))
        return scale * expo * A ** (expo - 1.0) * np.asarray(M.area_d1(t))

    f = DiscreteField(grid, vals, analytic=Analytic1D(
        u=lambda t: np.interp(t, grid.nodes, vals), du=du, d2u=d2u))
    meta = {
        "sup": float(vals.max()),
        "inf": float(vals.min()),
        "E_p": float(phi_total ** (1.0 - p)),
        "phi_total": float(phi_total),
    }
    return f, meta


def maximum_principle_holds(f: DiscreteField, boundary) -> bool:
    mask, vals = _normalize_boundary(f.grid, boundary)
    lo, hi = vals[mask].min(), vals[mask].max()
    pad = 1e-12 * (1.0 + hi - lo)
    return bool(np.all(f.values >= lo - pad) and np.all(f.values <= hi + pad))

"""The (p, eps)-energy, its gradient and Hessian action on grid fields.

The discrete energy evaluates gradients at cell midpoints (1D) or cell
centers (2D) so it is a sum of per-cell convex terms; convexity then
holds exactly at the discrete level and the weak residual is literally
the gradient of the discrete energy with respect to node values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, SingularityError
from .grid import DiscreteField, Grid1D, Grid2D


@dataclass(frozen=True)
class EnergySpec:
    """The pair (p, eps); eps = 0 is evaluation-only."""

    p: float
    eps: float = 0.0

    def __post_init__(self):
        if self.p <= 1:
            raise InvalidInputError("p must exceed 1")
        if self.eps < 0:
            raise InvalidInputError("eps must be nonnegative")


# -- cell quantities ---------------------------------------------------------


def cell_data_1d(field: DiscreteField):
    """Per-cell midpoint gradient and cell measure on a Grid1D."""
    g = field.grid
    grad = np.diff(field.values) / g.h
    meas = g.h * (g.area[:-1] + g.area[1:]) / 2.0
    return grad, meas


def cell_data_2d(field: DiscreteField):
    """Per-cell center gradient (gx, gy) and cell measure on a Grid2D."""
    g = field.grid
    v = field.values
    gx = (v[1:, :-1] + v[1:, 1:] - v[:-1, :-1] - v[:-1, 1:]) / (2 * g.hx)
    gy = (v[:-1, 1:] + v[1:, 1:] - v[:-1, :-1] - v[1:, :-1]) / (2 * g.hy)
    return gx, gy, g.hx * g.hy


def _phi(g2, p, eps):
    return (g2 + eps) ** (p / 2.0)


def _phi_d(g2, p, eps):
    """phi'(g) / g  =  p (g^2+eps)^{(p-2)/2}  as a function of g^2."""
    return p * (g2 + eps) ** ((p - 2.0) / 2.0)


def _phi_dd_aniso(g2, p, eps):
    """p (p-2) (g^2+eps)^{(p-4)/2}: the rank-one part of the cell Hessian."""
    return p * (p - 2.0) * (g2 + eps) ** ((p - 4.0) / 2.0)


def _check_differentiable(spec: EnergySpec, g2) -> None:
    if spec.eps > 0:
        return
    if spec.p < 2 and np.any(g2 == 0.0):
        raise SingularityError(
            "p < 2 with eps = 0 and a vanishing cell gradient: "
            "the integrand is not differentiable there"
        )


# -- energies ----------------------------------------------------------------


def energy(spec: EnergySpec, field: DiscreteField) -> float:
    """E_{p,eps}(u) = int (|grad u|^2 + eps)^{p/2} dv (cellwise)."""
    if isinstance(field.grid, Grid1D):
        grad, meas = cell_data_1d(field)
        g2 = grad * grad
    else:
        gx, gy, meas = cell_data_2d(field)
        g2 = gx * gx + gy * gy
    return float(np.sum(_phi(g2, spec.p, spec.eps).ravel() * np.ravel(meas)))


def q_energy(field: DiscreteField, q: float) -> float:
    """int |grad u|^q dv."""
    if q <= 0:
        raise InvalidInputError("q must be positive")
    if isinstance(field.grid, Grid1D):
        grad, meas = cell_data_1d(field)
        g2 = grad * grad
    else:
        gx, gy, meas = cell_data_2d(field)
        g2 = gx * gx + gy * gy
    return float(np.sum(g2 ** (q / 2.0) * meas))


# -- first variation ---------------------------------------------------------


def residual_scale(spec: EnergySpec, field: DiscreteField) -> float:
    """Magnitude of the elementary fluxes entering weak_residual; the
    natural scale for a relative stopping tolerance."""
    if isinstance(field.grid, Grid1D):
        grad, meas = cell_data_1d(field)
        g2 = grad * grad
        return float(np.max(np.abs(
            _phi_d(g2, spec.p, spec.eps) * grad * meas / field.grid.h)))
    gx, gy, meas = cell_data_2d(field)
    g2 = gx * gx + gy * gy
    c = _phi_d(g2, spec.p, spec.eps) * meas
    return float(np.max(np.abs(c) * np.hypot(gx, gy)
                        / (2 * min(field.grid.hx, field.grid.hy))))


def weak_residual(spec: EnergySpec, field: DiscreteField,
                  fixed_mask=None) -> np.ndarray:
    """Gradient of the discrete energy w.r.t. free node values.

    Entries at fixed (boundary) nodes are zero.
    """
    if fixed_mask is None:
        fixed_mask = field.grid.boundary_mask()
    if isinstance(field.grid, Grid1D):
        grad, meas = cell_data_1d(field)
        g2 = grad * grad
        _check_differentiable(spec, g2)
        flux = _phi_d(g2, spec.p, spec.eps) * grad * meas / field.grid.h
        r = np.zeros_like(field.values)
        r[:-1] -= flux
        r[1:] += flux
    else:
        gx, gy, meas = cell_data_2d(field)
        g2 = gx * gx + gy * gy
        _check_differentiable(spec, g2)
        c = _phi_d(g2, spec.p, spec.eps) * meas
        fx = c * gx / (2 * field.grid.hx)
        fy = c * gy / (2 * field.grid.hy)
        r = np.zeros_like(field.values)
        # corner (i, j) enters gx with -, gy with -; (i+1, j): +, -; etc.
        r[:-1, :-1] += -fx - fy
        r[1:, :-1] += fx - fy
        r[:-1, 1:] += -fx + fy
        r[1:, 1:] += fx + fy
    r[fixed_mask] = 0.0
    return r


# -- second variation --------------------------------------------------------


def linearized_action(spec: EnergySpec, field: DiscreteField,
                      psi: DiscreteField, fixed_mask=None) -> np.ndarray:
    """Hessian of the discrete energy at u applied to psi (free nodes).

    This is the discretization of the linearized operator
    div(f_eps^{p-2} (id + (p-2) grad u x grad u / f_eps^2) grad psi)
    in the same staggered fluxes as the energy itself.
    """
    if spec.eps <= 0:
        raise SingularityError("linearization requires eps > 0")
    if fixed_mask is None:
        fixed_mask = field.grid.boundary_mask()
    pv = np.where(fixed_mask, 0.0, psi.values)
    if isinstance(field.grid, Grid1D):
        grad, meas = cell_data_1d(field)
        g2 = grad * grad
        gpsi = np.diff(pv) / field.grid.h
        coef = (_phi_d(g2, spec.p, spec.eps)
                + _phi_dd_aniso(g2, spec.p, spec.eps) * g2)
        flux = coef * gpsi * meas / field.grid.h
        out = np.zeros_like(pv)
        out[:-1] -= flux
        out[1:] += flux
    else:
        gx, gy, meas = cell_data_2d(field)
        g2 = gx * gx + gy * gy
        pfield = DiscreteField(field.grid, pv)
        px, py, _ = cell_data_2d(pfield)
        a = _phi_d(g2, spec.p, spec.eps)
        b = _phi_dd_aniso(g2, spec.p, spec.eps)
        dot = gx * px + gy * py
        qx = (a * px + b * dot * gx) * meas / (2 * field.grid.hx)
        qy = (a * py + b * dot * gy) * meas / (2 * field.grid.hy)
        out = np.zeros_like(pv)
        out[:-1, :-1] += -qx - qy
        out[1:, :-1] += qx - qy
        out[:-1, 1:] += -qx + qy
        out[1:, 1:] += qx + qy
    out[fixed_mask] = 0.0
    return out


def hessian_diagonal(spec: EnergySpec, field: DiscreteField,
                     fixed_mask=None) -> np.ndarray:
    """Diagonal of the discrete energy Hessian (Jacobi preconditioner)."""
    if spec.eps <= 0:
        raise SingularityError("linearization requires eps > 0")
    if fixed_mask is None:
        fixed_mask = field.grid.boundary_mask()
    if isinstance(field.grid, Grid1D):
        grad, meas = cell_data_1d(field)
        g2 = grad * grad
        coef = (_phi_d(g2, spec.p, spec.eps)
                + _phi_dd_aniso(g2, spec.p, spec.eps) * g2)
        c = coef * meas / field.grid.h**2
        d = np.zeros_like(field.values)
        d[:-1] += c
        d[1:] += c
    else:
        gx, gy, meas = cell_data_2d(field)
        g2 = gx * gx + gy * gy
        a = _phi_d(g2, spec.p, spec.eps)
        b = _phi_dd_aniso(g2, spec.p, spec.eps)
        cx, cy = 1.0 / (2 * field.grid.hx), 1.0 / (2 * field.grid.hy)
        m00 = a + b * gx * gx
        m11 = a + b * gy * gy
        m01 = b * gx * gy
        d = np.zeros_like(field.values)
        for sx, sy, sl in (
            (-cx, -cy, (np.s_[:-1], np.s_[:-1])),
            (cx, -cy, (np.s_[1:], np.s_[:-1])),
            (-cx, cy, (np.s_[:-1], np.s_[1:])),
            (cx, cy, (np.s_[1:], np.s_[1:])),
        ):
            d[sl] += (m00 * sx * sx + 2 * m01 * sx * sy + m11 * sy * sy) * meas
    d[fixed_mask] = 1.0
    return d

"""Discrete entropy bookkeeping for the fully discrete schemes.

For a time pair ``(v^n, v^{n+1})`` with ``dv = v^{n+1} - v^n`` and the path
``v(s) = (v^n + v^{n+1})/2 + s dv`` on ``s in [-1/2, 1/2]``, the forward and
backward Euler entropy production terms are

    E_FE = int (1/2 + s) dv^T H(v(s)) dv ds
    E_BE = int (1/2 - s) dv^T H(v(s)) dv ds

so that ``U^{n+1} - U^n = (v^n)^T du + E_FE = (v^{n+1})^T du - E_BE``.  Both
integrals are evaluated by Gauss-Legendre quadrature.
"""
from dataclasses import dataclass

import numpy as np

from .euler import (
    AIR,
    InvalidStateError,
    cons_to_prim,
    entropy_variables,
    entropy_vars_to_cons,
    math_entropy_pair,
    specific_entropy,
    temporal_jacobian,
)
from .fluxes import flux_ec_roe, gauss_legendre_unit, interface_entropy_flux
from .integrators import (
    BALANCE_WEIGHTS,
    DEFAULT_EC_ORDER,
    Discretization,
    TimeState,
    combine_levels,
    flux_level_fields,
    step_fe,
)
from .problems import init_fields

DEFAULT_QUAD_ORDER = 16


class UsageError(ValueError):
    """Inputs to a diagnostic do not fit together (shapes, scheme, symmetry)."""


@dataclass
class EntropyBudget:
    """Global entropy balance of one step.

    ``production`` is the residual ``P`` of the scheme's discrete entropy
    statement: positive means the step created mathematical entropy U
    (i.e. destroyed physical entropy rho*S), zero means conservation.
    """

    step_index: int
    t: float
    total_U: float
    total_rhoS: float
    boundary_F_left: float
    boundary_F_right: float
    production: float
    scheme: str = ""


def _quad_form_integral(vn, vnp1, gas, order, sign):
    vn = np.asarray(vn, dtype=float)
    vnp1 = np.asarray(vnp1, dtype=float)
    if vn.shape != vnp1.shape:
        raise UsageError(f"time levels differ in shape: {vn.shape} vs {vnp1.shape}")
    nodes, weights = gauss_legendre_unit(order, -0.5, 0.5)
    dv = vnp1 - vn
    path = 0.5 * (vn + vnp1) + nodes.reshape((order,) + (1,) * dv.ndim) * dv
    try:
        H = temporal_jacobian(entropy_vars_to_cons(path, gas), gas)
    except InvalidStateError as exc:
        raise InvalidStateError(f"entropy-variable path left the admissible set: {exc}",
                                exc.value, exc.index) from exc
    q = np.einsum("...i,...ij,...j->...", dv, H, dv)
    return np.tensordot(weights * (0.5 + sign * nodes), q, axes=1)


def entropy_prod_fe(vn, vnp1, gas=AIR, order=DEFAULT_QUAD_ORDER):
    return _quad_form_integral(vn, vnp1, gas, order, +1.0)


def entropy_prod_be(vn, vnp1, gas=AIR, order=DEFAULT_QUAD_ORDER):
    return _quad_form_integral(vn, vnp1, gas, order, -1.0)


def entropy_prod_bdf2(vn, vnp1, vnp2, gas=AIR, order=DEFAULT_QUAD_ORDER):
    """``4/3 E_BE(v^{n+1}, v^{n+2}) - 1/3 E_BE(v^n, v^{n+2})``; no definite sign."""
    return (4.0 / 3.0 * entropy_prod_be(vnp1, vnp2, gas, order)
            - 1.0 / 3.0 * entropy_prod_be(vn, vnp2, gas, order))


def entropy_prod_leapfrog(vnm1, vn, vnp1, gas=AIR, order=DEFAULT_QUAD_ORDER):
    """``E_BE(v^{n-1}, v^n) - E_FE(v^n, v^{n+1})``; no definite sign."""
    return entropy_prod_be(vnm1, vn, gas, order) - entropy_prod_fe(vn, vnp1, gas, order)


def cell_time_production(scheme, before, after, history=None, gas=AIR, order=DEFAULT_QUAD_ORDER):
    """Per-cell entropy production of the time scheme, signed as in ``P``.

    Paired with an EC flux, ``dx * sum`` of this equals the step production
    of :func:`step_total_entropy_balance` up to quadrature error.
    """
    vb = entropy_variables(before, gas)
    va = entropy_variables(after, gas)
    if scheme == "fe":
        return entropy_prod_fe(vb, va, gas, order)
    if scheme == "be":
        return -entropy_prod_be(vb, va, gas, order)
    if scheme in ("ec", "ec-quadrature"):
        return np.zeros(vb.shape[:-1])
    if history is None:
        raise UsageError(f"scheme {scheme!r} needs the history level")
    vh = entropy_variables(history, gas)
    if scheme == "bdf2":
        return -entropy_prod_bdf2(vh, vb, va, gas, order)
    if scheme == "leapfrog":
        return -entropy_prod_leapfrog(vh, vb, va, gas, order)
    raise UsageError(f"unknown scheme {scheme!r}")


def boundary_entropy_fluxes(level, disc):
    """Entropy interface fluxes ``(F_left, F_right)`` at the two domain ends."""
    g = disc.ghosted(level)
    f = disc.interface_fluxes(level)
    F_left = interface_entropy_flux(g[0], g[1], f[0], disc.gas)
    F_right = interface_entropy_flux(g[-2], g[-1], f[-1], disc.gas)
    return float(F_left), float(F_right)


def step_total_entropy_balance(before, after, scheme, dt, disc, history=None,
                               order=DEFAULT_EC_ORDER, step_index=0, t=0.0):
    """Budget of one step of ``scheme`` taken from ``before`` to ``after``.

    ``P = dx * sum_j (combination of U levels)_j + c dt (F_right - F_left)``
    with the level combination and multiplier ``c`` of the scheme (``1`` and
    ``U^{n+1} - U^n`` for one-step schemes) and boundary entropy fluxes
    evaluated where the scheme evaluates its fluxes: ``n`` for FE and
    Leap-Frog, ``n+1`` for BE and BDF2, the intermediate state for EC.
    ``history`` is ``u^n`` for BDF2 (``before = u^{n+1}``) and ``u^{n-1}`` for
    Leap-Frog.  ``order`` is the quadrature order of ``"ec-quadrature"``.
    """
    before = np.asarray(before, dtype=float)
    after = np.asarray(after, dtype=float)
    if scheme not in BALANCE_WEIGHTS:
        raise UsageError(f"unknown scheme {scheme!r}")
    n = disc.mesh.n_cells
    for name, arr in (("before", before), ("after", after), ("history", history)):
        if arr is not None and np.shape(arr) != (n, 3):
            raise UsageError(f"{name} has shape {np.shape(arr)}, mesh needs ({n}, 3)")
    if BALANCE_WEIGHTS[scheme][0][2] and history is None:
        raise UsageError(f"scheme {scheme!r} needs the history level")

    gas = disc.gas
    _, coef = BALANCE_WEIGHTS[scheme]
    U_after = math_entropy_pair(after, gas)[0]
    U_before = math_entropy_pair(before, gas)[0]
    U_hist = math_entropy_pair(history, gas)[0] if history is not None else None
    dU = combine_levels(scheme, U_after, U_before, U_hist)

    level = flux_level_fields(scheme, before, after, gas, order)
    F_left, F_right = boundary_entropy_fluxes(level, disc)
    dx = disc.mesh.dx
    total_U = float(dx * U_after.sum())
    return EntropyBudget(
        step_index=step_index,
        t=t,
        total_U=total_U,
        total_rhoS=float(dx * np.sum(-(gas.gamma - 1.0) * U_after)),
        boundary_F_left=F_left,
        boundary_F_right=F_right,
        production=float(dx * dU.sum() + coef * dt * (F_right - F_left)),
        scheme=scheme,
    )


def _receding_first_step(ic, mesh, dt, gas):
    if not ic.is_receding_symmetric():
        raise UsageError("first-step identities need symmetric receding data "
                         "(equal rho and p, opposite velocities)")
    if mesh.n_cells % 2:
        raise UsageError("the receding discontinuity must sit on an interface: use an even cell count")
    u0 = init_fields(mesh, ic, gas)
    disc = Discretization(mesh, flux_ec_roe, gas, "transmissive")
    u1 = step_fe(TimeState(u0), dt, disc).fields
    return u0[mesh.n_cells // 2], u1[mesh.n_cells // 2]


def first_step_s_jump_check(ic, mesh, dt, gas=AIR, order=DEFAULT_QUAD_ORDER):
    """One FE step with the EC Roe flux; returns ``(S^1 - S^0, (1 - gamma) E_FE / rho^1)``
    in the first cell right of the centre."""
    c0, c1 = _receding_first_step(ic, mesh, dt, gas)
    w0, w1 = cons_to_prim(c0, gas), cons_to_prim(c1, gas)
    lhs = float(specific_entropy(w1, gas) - specific_entropy(w0, gas))
    e_fe = entropy_prod_fe(entropy_variables(c0, gas), entropy_variables(c1, gas), gas, order)
    rhs = float((1.0 - gas.gamma) * e_fe / w1[0])
    return lhs, rhs


def density_first_step_check(ic, mesh, dt, gas=AIR):
    """Returns ``(rho^1 - rho^0, -dt/dx rho^0 u^0)`` in the first cell right of the centre."""
    c0, c1 = _receding_first_step(ic, mesh, dt, gas)
    _, (rho0, u0, _) = ic.states()
    return float(c1[0] - c0[0]), float(-(dt / mesh.dx) * rho0 * u0)


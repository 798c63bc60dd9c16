"""Two-point interface fluxes for the 1D Euler equations.

All fluxes take conserved left/right states (arrays with a trailing axis of
3, any leading batch shape) and return a flux array of the same shape.  The
entropy-conservative (EC) fluxes satisfy

    (v_R - v_L) . f = psi_R - psi_L,      psi = rho u,

which :func:`ec_condition_residual` evaluates directly.
"""
from dataclasses import dataclass

import numpy as np

from .euler import (
    AIR,
    InvalidStateError,
    cons_to_prim,
    entropy_variables,
    entropy_vars_to_cons,
    exact_flux,
    potentials,
    sound_speed,
    temporal_jacobian,
)
from .means import arith_mean, log_mean

DEFAULT_TADMOR_ORDER = 8


def _prims(L, R, gas):
    wl = cons_to_prim(L, gas)
    wr = cons_to_prim(R, gas)
    return (wl[..., 0], wl[..., 1], wl[..., 2]), (wr[..., 0], wr[..., 1], wr[..., 2])


def flux_ec_roe(L, R, gas=AIR):
    """Roe's affordable EC flux in the parameter vector
    ``z = (sqrt(rho/p), sqrt(rho/p) u, sqrt(rho p))``."""
    g = gas.gamma
    (rl, ul, pl), (rr, ur, pr) = _prims(L, R, gas)
    z1l, z1r = np.sqrt(rl / pl), np.sqrt(rr / pr)
    z2l, z2r = z1l * ul, z1r * ur
    z3l, z3r = np.sqrt(rl * pl), np.sqrt(rr * pr)

    z1m, z2m, z3m = arith_mean(z1l, z1r), arith_mean(z2l, z2r), arith_mean(z3l, z3r)
    z1ln, z3ln = log_mean(z1l, z1r), log_mean(z3l, z3r)

    f1 = z2m * z3ln
    f2 = (z3m + f1 * z2m) / z1m
    f3 = (-f1 * ((1.0 + g) / (1.0 - g)) / z1ln + f2 * z2m) / (2.0 * z1m)
    return np.stack([f1, f2, f3], axis=-1)


def flux_ec_chandrashekhar(L, R, gas=AIR):
    """Chandrashekhar's kinetic-energy-preserving EC flux, ``z = (rho, u, rho/2p)``."""
    g = gas.gamma
    (rl, ul, pl), (rr, ur, pr) = _prims(L, R, gas)
    bl, br = 0.5 * rl / pl, 0.5 * rr / pr
    um = arith_mean(ul, ur)
    u2m = arith_mean(ul * ul, ur * ur)
    bm = arith_mean(bl, br)

    f1 = log_mean(rl, rr) * um
    f2 = arith_mean(rl, rr) / (2.0 * bm) + um * f1
    f3 = (1.0 / (2.0 * (g - 1.0) * log_mean(bl, br)) - 0.5 * u2m) * f1 + um * f2
    return np.stack([f1, f2, f3], axis=-1)


def flux_ec_kep_pu(L, R, gas=AIR):
    """Kinetic-energy-preserving EC flux built on ``z = (p, u, rho/2p)``.

    Note the ``- mean(p) * mean(u)`` term in the energy component; without
    it the flux is not entropy conservative.
    """
    g = gas.gamma
    (rl, ul, pl), (rr, ur, pr) = _prims(L, R, gas)
    bl, br = 0.5 * rl / pl, 0.5 * rr / pr
    um = arith_mean(ul, ur)
    u2m = arith_mean(ul * ul, ur * ur)
    bm = arith_mean(bl, br)

    f1 = 2.0 * bm * um * log_mean(pl, pr)
    f2 = arith_mean(rl, rr) / (2.0 * bm) + um * f1
    f3 = (f1 * (g / ((g - 1.0) * 2.0 * log_mean(bl, br)) - 0.5 * u2m)
          + f2 * um - arith_mean(pl, pr) * um)
    return np.stack([f1, f2, f3], axis=-1)


def gauss_legendre_unit(order, lo=0.0, hi=1.0):
    """Gauss-Legendre nodes and weights mapped to ``[lo, hi]``."""
    if order < 1:
        raise ValueError(f"quadrature order must be >= 1, got {order}")
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def flux_ec_tadmor_quadrature(L, R, gas=AIR, order=DEFAULT_TADMOR_ORDER):
    """Tadmor's path-integral EC flux ``int_0^1 f(u(v_L + s (v_R - v_L))) ds``.

    Evaluated with ``order`` Gauss-Legendre nodes; exact EC only in the limit.
    The round-off of the ``v -> u`` map at the two end states is subtracted
    (symmetrically), so ``L == R`` returns ``exact_flux(L)`` exactly.
    """
    vl = entropy_variables(L, gas)
    vr = entropy_variables(R, gas)
    dv = vr - vl
    nodes, weights = gauss_legendre_unit(order)
    shape = (order,) + (1,) * dv.ndim
    path = vl + nodes.reshape(shape) * dv
    try:
        f = exact_flux(entropy_vars_to_cons(path, gas), gas)
        bias_l = exact_flux(L, gas) - exact_flux(entropy_vars_to_cons(vl, gas), gas)
        bias_r = exact_flux(R, gas) - exact_flux(entropy_vars_to_cons(vr, gas), gas)
    except InvalidStateError as exc:
        raise InvalidStateError(f"quadrature path left the admissible set: {exc}",
                                exc.value, exc.index) from exc
    return np.tensordot(weights, f, axes=1) + 0.5 * (bias_l + bias_r)


def flux_roe_classic(L, R, gas=AIR, entropy_fix=0.0):
    """Roe's approximate Riemann solver flux.

    ``entropy_fix > 0`` enables Harten's fix with threshold
    ``entropy_fix * a_roe`` on every wave; the default leaves it off.
    """
    g = gas.gamma
    L = np.asarray(L, dtype=float)
    R = np.asarray(R, dtype=float)
    (rl, ul, pl), (rr, ur, pr) = _prims(L, R, gas)
    hl = (L[..., 2] + pl) / rl
    hr = (R[..., 2] + pr) / rr
    sl, sr = np.sqrt(rl), np.sqrt(rr)
    rt = sl * sr
    ut = (sl * ul + sr * ur) / (sl + sr)
    ht = (sl * hl + sr * hr) / (sl + sr)
    a2 = (g - 1.0) * (ht - 0.5 * ut * ut)
    if np.any(~(a2 > 0.0)):
        raise InvalidStateError("Roe-averaged sound speed is not real", float(np.min(a2)))
    at = np.sqrt(a2)

    drho, du, dp = rr - rl, ur - ul, pr - pl
    alpha1 = (dp - rt * at * du) / (2.0 * a2)
    alpha2 = drho - dp / a2
    alpha3 = (dp + rt * at * du) / (2.0 * a2)

    lam = np.stack([np.abs(ut - at), np.abs(ut), np.abs(ut + at)])
    if entropy_fix > 0.0:
        delta = entropy_fix * at
        lam = np.where(lam < delta, 0.5 * (lam * lam + delta * delta) / delta, lam)

    ones = np.ones_like(ut)
    r1 = np.stack([ones, ut - at, ht - ut * at], axis=-1)
    r2 = np.stack([ones, ut, 0.5 * ut * ut], axis=-1)
    r3 = np.stack([ones, ut + at, ht + ut * at], axis=-1)
    diss = ((lam[0] * alpha1)[..., None] * r1 + (lam[1] * alpha2)[..., None] * r2
            + (lam[2] * alpha3)[..., None] * r3)
    return 0.5 * (exact_flux(L, gas) + exact_flux(R, gas)) - 0.5 * diss


@dataclass(frozen=True)
class DissipationSpec:
    """Entropy-stabilising matrix ``Q`` for :func:`flux_es`.

    ``kind`` is ``"none"``, ``"scaled-identity"`` (``Q = alpha I``) or
    ``"scaled-temporal-jacobian"`` (``Q = alpha H(mean v)``), with
    ``alpha = coefficient * max(|u| + a)`` over the two states.
    """

    kind: str = "scaled-temporal-jacobian"
    coefficient: float = 0.5

    KINDS = ("none", "scaled-identity", "scaled-temporal-jacobian")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown dissipation kind {self.kind!r}; expected one of {self.KINDS}")
        if not self.coefficient >= 0.0:
            raise ValueError(f"dissipation coefficient must be >= 0, got {self.coefficient!r}")

    def matrix(self, L, R, gas=AIR):
        wl = cons_to_prim(L, gas)
        wr = cons_to_prim(R, gas)
        smax = np.maximum(np.abs(wl[..., 1]) + sound_speed(wl, gas),
                          np.abs(wr[..., 1]) + sound_speed(wr, gas))
        alpha = self.coefficient * smax
        if self.kind == "none" or self.coefficient == 0.0:
            return np.zeros(smax.shape + (3, 3))
        if self.kind == "scaled-identity":
            return alpha[..., None, None] * np.eye(3)
        vbar = arith_mean(entropy_variables(L, gas), entropy_variables(R, gas))
        return alpha[..., None, None] * temporal_jacobian(entropy_vars_to_cons(vbar, gas), gas)


def flux_es(L, R, gas=AIR, ec=flux_ec_roe, dissipation=DissipationSpec()):
    """Entropy-stable flux ``f_EC - Q (v_R - v_L)``."""
    f = ec(L, R, gas)
    if dissipation.kind == "none" or dissipation.coefficient == 0.0:
        return f
    dv = entropy_variables(R, gas) - entropy_variables(L, gas)
    Q = dissipation.matrix(L, R, gas)
    return f - np.einsum("...ij,...j->...i", Q, dv)


def interface_entropy_flux(L, R, f, gas=AIR):
    """``F = (v_L + v_R) . f / 2 - (psi_L + psi_R) / 2``."""
    vl = entropy_variables(L, gas)
    vr = entropy_variables(R, gas)
    psil = potentials(L, gas)[1]
    psir = potentials(R, gas)[1]
    return 0.5 * np.sum((vl + vr) * f, axis=-1) - 0.5 * (psil + psir)


def ec_condition_residual(L, R, f, gas=AIR):
    """``(v_R - v_L) . f - (psi_R - psi_L)``; zero for an EC flux."""
    dv = entropy_variables(R, gas) - entropy_variables(L, gas)
    dpsi = potentials(R, gas)[1] - potentials(L, gas)[1]
    return np.sum(dv * f, axis=-1) - dpsi


def kep_pressure(L, R, f):
    """Pressure part ``f2 - mean(u) f1`` of a momentum flux."""
    L = np.asarray(L, dtype=float)
    R = np.asarray(R, dtype=float)
    um = arith_mean(L[..., 1] / L[..., 0], R[..., 1] / R[..., 0])
    f = np.asarray(f, dtype=float)
    return f[..., 1] - um * f[..., 0]


FLUX_NAMES = ("roe", "ec-roe", "ec-chandrashekhar", "ec-kep", "ec-tadmor", "es")

EC_FLUXES = {
    "ec-roe": flux_ec_roe,
    "ec-chandrashekhar": flux_ec_chandrashekhar,
    "ec-kep": flux_ec_kep_pu,
}


def make_flux(name, *, tadmor_order=DEFAULT_TADMOR_ORDER, dissipation=None,
              es_base="ec-roe", entropy_fix=0.0):
    """Return ``flux(L, R, gas)`` for a registry name in :data:`FLUX_NAMES`."""
    if name in EC_FLUXES:
        return EC_FLUXES[name]
    if name == "roe":
        if entropy_fix > 0.0:
            return lambda L, R, gas=AIR: flux_roe_classic(L, R, gas, entropy_fix)
        return flux_roe_classic
    if name == "ec-tadmor":
        return lambda L, R, gas=AIR: flux_ec_tadmor_quadrature(L, R, gas, tadmor_order)
    if name == "es":
        base = EC_FLUXES[es_base]
        spec = dissipation if dissipation is not None else DissipationSpec()
        return lambda L, R, gas=AIR: flux_es(L, R, gas, base, spec)
    raise ValueError(f"unknown flux {name!r}; valid names: {', '.join(FLUX_NAMES)}")

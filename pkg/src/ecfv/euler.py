"""Thermodynamics and entropy-variable algebra for the 1D Euler equations.

Every state is a float64 array whose last axis has length 3:

* conserved: ``(rho, rho*u, rho*E)``
* primitive: ``(rho, u, p)``
* entropy variables: ``(v1, v2, v3)``

Leading axes are batch axes, so a whole mesh (``(n_cells, 3)``) or a stack of
quadrature nodes goes through the same call.  The entropy pair is

    U = -rho*S/(gamma - 1),   F = -rho*u*S/(gamma - 1),   S = ln p - gamma ln rho

whose potentials are ``phi = rho`` and ``psi = rho*u``.
"""
from dataclasses import dataclass

import numpy as np


class InvalidStateError(ValueError):
    """A state left the admissible set (rho <= 0, p <= 0, v3 >= 0, non-finite).

    ``value`` is the offending number and ``index`` its position in the batch
    (a tuple of indices into the leading axes), when known.
    """

    def __init__(self, message, value=None, index=None):
        super().__init__(message)
        self.value = value
        self.index = index


@dataclass(frozen=True)
class GasModel:
    """Calorically perfect gas."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma!r}")


AIR = GasModel()


def _first_bad(mask):
    idx = np.argwhere(mask)[0]
    return tuple(int(i) for i in idx)


def require_positive(x, name):
    """Raise :class:`InvalidStateError` unless every entry of ``x`` is > 0."""
    x = np.asarray(x)
    bad = ~(x > 0.0)
    if np.any(bad):
        where = _first_bad(bad)
        value = float(x[where])
        raise InvalidStateError(f"non-positive {name} {value!r} at index {where}", value, where)


def _split(q):
    q = np.asarray(q, dtype=float)
    if q.shape[-1:] != (3,):
        raise ValueError(f"state arrays need a trailing axis of length 3, got shape {q.shape}")
    return q[..., 0], q[..., 1], q[..., 2]


def cons_to_prim(c, gas=AIR):
    """Conserved ``(rho, m, E)`` to primitive ``(rho, u, p)``; rejects rho <= 0 or p <= 0."""
    rho, mom, ene = _split(c)
    require_positive(rho, "density")
    u = mom / rho
    p = (gas.gamma - 1.0) * (ene - 0.5 * mom * u)
    require_positive(p, "pressure")
    return np.stack([rho, u, p], axis=-1)


def prim_to_cons(w, gas=AIR):
    rho, u, p = _split(w)
    require_positive(rho, "density")
    require_positive(p, "pressure")
    mom = rho * u
    ene = p / (gas.gamma - 1.0) + 0.5 * mom * u
    return np.stack([rho, mom, ene], axis=-1)


def sound_speed(w, gas=AIR):
    rho, _, p = _split(w)
    return np.sqrt(gas.gamma * p / rho)


def exact_flux(c, gas=AIR):
    """Physical flux ``(rho u, rho u^2 + p, rho u H)``."""
    rho, mom, ene = _split(c)
    w = cons_to_prim(c, gas)
    u, p = w[..., 1], w[..., 2]
    return np.stack([mom, mom * u + p, u * (ene + p)], axis=-1)


def specific_entropy(w, gas=AIR):
    """``S = ln p - gamma ln rho`` from a primitive state."""
    rho, _, p = _split(w)
    require_positive(rho, "density")
    require_positive(p, "pressure")
    return np.log(p) - gas.gamma * np.log(rho)


def math_entropy_pair(c, gas=AIR):
    """Return ``(U, F)`` for conserved state(s) ``c``."""
    w = cons_to_prim(c, gas)
    s = specific_entropy(w, gas)
    U = -w[..., 0] * s / (gas.gamma - 1.0)
    return U, w[..., 1] * U


def entropy_variables(c, gas=AIR):
    """``v = dU/dc = ((gamma - S)/(gamma - 1) - rho u^2/(2p), rho u/p, -rho/p)``."""
    g = gas.gamma
    w = cons_to_prim(c, gas)
    rho, u, p = w[..., 0], w[..., 1], w[..., 2]
    s = np.log(p) - g * np.log(rho)
    r = rho / p
    return np.stack([(g - s) / (g - 1.0) - 0.5 * r * u * u, r * u, -r], axis=-1)


def entropy_vars_to_cons(v, gas=AIR):
    """Closed-form inverse of :func:`entropy_variables`.

    ``rho/p = -v3`` and ``u = -v2/v3``; ``v1`` then fixes S, and S with rho/p
    fixes p.  Any ``v`` with ``v3 < 0`` maps to an admissible state.
    """
    g = gas.gamma
    v1, v2, v3 = _split(v)
    bad = ~(v3 < 0.0)
    if np.any(bad):
        where = _first_bad(bad)
        value = float(v3[where])
        raise InvalidStateError(f"entropy variable v3 must be negative, got {value!r}", value, where)
    r = -v3
    u = v2 / r
    s = g - (g - 1.0) * (v1 + 0.5 * r * u * u)
    p = np.exp((s + g * np.log(r)) / (1.0 - g))
    rho = r * p
    require_positive(rho, "density")
    require_positive(p, "pressure")
    mom = rho * u
    return np.stack([rho, mom, p / (g - 1.0) + 0.5 * mom * u], axis=-1)


def potentials(c, gas=AIR):
    """Potentials ``(phi, psi) = (rho, rho u)`` of the entropy pair."""
    rho, mom, _ = _split(c)
    cons_to_prim(c, gas)
    return rho.copy(), mom.copy()


def temporal_jacobian(c, gas=AIR):
    """``H = du/dv`` as a full symmetric ``(..., 3, 3)`` array."""
    g = gas.gamma
    rho, mom, ene = _split(c)
    w = cons_to_prim(c, gas)
    u, p = w[..., 1], w[..., 2]
    h = (ene + p) / rho
    a2 = g * p / rho
    H = np.empty(rho.shape + (3, 3))
    H[..., 0, 0] = rho
    H[..., 0, 1] = H[..., 1, 0] = mom
    H[..., 0, 2] = H[..., 2, 0] = ene
    H[..., 1, 1] = mom * u + p
    H[..., 1, 2] = H[..., 2, 1] = mom * h
    H[..., 2, 2] = rho * h * h - a2 * p / (g - 1.0)
    return H

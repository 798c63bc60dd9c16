"""Initial conditions: two-state Riemann data, the receding flow, a smooth density wave."""
from dataclasses import dataclass

import numpy as np

from .euler import AIR, InvalidStateError, prim_to_cons
from .mesh import ConfigError


@dataclass(frozen=True)
class RiemannIC:
    """Two primitive states ``(rho, u, p)`` separated at the domain midpoint."""

    left: tuple
    right: tuple

    def states(self):
        return np.array(self.left, dtype=float), np.array(self.right, dtype=float)

    def is_receding_symmetric(self):
        (rl, ul, pl), (rr, ur, pr) = self.left, self.right
        return rl == rr and pl == pr and ul == -ur

    def spec(self):
        l, r = self.left, self.right
        return "riemann:" + ",".join(map(repr, map(float, l))) + ";" + ",".join(map(repr, map(float, r)))


@dataclass(frozen=True)
class RecedingIC:
    """Symmetric receding flow: ``(rho0, -u0, p0)`` on the left, ``(rho0, +u0, p0)`` on the right.

    The defaults give a subsonic recession (Mach ~0.85) for which every
    scheme of the study runs to t = 0.18 on 100 cells.
    """

    rho0: float = 1.0
    p0: float = 1.0
    u0: float = 1.0

    def __post_init__(self):
        if not self.rho0 > 0.0:
            raise ConfigError(f"receding rho0 must be > 0, got {self.rho0!r}", "ic")
        if not self.p0 > 0.0:
            raise ConfigError(f"receding p0 must be > 0, got {self.p0!r}", "ic")
        if not self.u0 >= 0.0:
            raise ConfigError(f"receding u0 must be >= 0, got {self.u0!r}", "ic")

    @property
    def left(self):
        return (self.rho0, -self.u0, self.p0)

    @property
    def right(self):
        return (self.rho0, self.u0, self.p0)

    def states(self):
        return np.array(self.left, dtype=float), np.array(self.right, dtype=float)

    def is_receding_symmetric(self):
        return True

    def spec(self):
        return f"receding:{float(self.rho0)!r},{float(self.p0)!r},{float(self.u0)!r}"


def init_riemann(mesh, left, right, gas=AIR):
    """Cells with centres left of the midpoint get ``left``, the rest ``right``."""
    try:
        cl = prim_to_cons(np.asarray(left, dtype=float), gas)
        cr = prim_to_cons(np.asarray(right, dtype=float), gas)
    except InvalidStateError as exc:
        raise ConfigError(f"invalid Riemann state: {exc}", "ic") from exc
    on_left = mesh.centers < mesh.midpoint
    return np.where(on_left[:, None], cl, cr)


def init_fields(mesh, ic, gas=AIR):
    left, right = ic.states()
    return init_riemann(mesh, left, right, gas)


def density_wave(mesh, t=0.0, amplitude=0.2, velocity=1.0, pressure=1.0, gas=AIR):
    """Cell-centre samples of ``rho = 1 + A sin(2 pi (x - u t) / L)`` at uniform u, p.

    An exact smooth solution of the Euler equations on a periodic domain.
    """
    length = mesh.x_max - mesh.x_min
    x = mesh.centers
    rho = 1.0 + amplitude * np.sin(2.0 * np.pi * (x - velocity * t - mesh.x_min) / length)
    w = np.stack([rho, np.full_like(rho, velocity), np.full_like(rho, pressure)], axis=-1)
    return prim_to_cons(w, gas)

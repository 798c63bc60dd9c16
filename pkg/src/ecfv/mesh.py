"""Uniform 1D meshes and ghost-cell boundary conditions."""
from dataclasses import dataclass

import numpy as np


class ConfigError(ValueError):
    """Invalid run or mesh configuration.  ``key`` names the offending setting."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


@dataclass(frozen=True)
class Mesh1D:
    x_min: float
    x_max: float
    n_cells: int

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self):
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def interfaces(self):
        return self.x_min + np.arange(self.n_cells + 1) * self.dx

    @property
    def midpoint(self):
        return 0.5 * (self.x_min + self.x_max)


def build_mesh(x_min, x_max, n_cells):
    if not float(x_max) > float(x_min):
        raise ConfigError(f"x_max ({x_max}) must exceed x_min ({x_min})", "xmax")
    if int(n_cells) != n_cells or n_cells < 2:
        raise ConfigError(f"n_cells must be an integer >= 2, got {n_cells!r}", "cells")
    return Mesh1D(float(x_min), float(x_max), int(n_cells))


def apply_transmissive_bc(fields):
    """Pad ``(n, 3)`` cell values with one zero-gradient ghost per side."""
    fields = np.asarray(fields, dtype=float)
    return np.concatenate([fields[:1], fields, fields[-1:]], axis=0)


def apply_periodic_bc(fields):
    fields = np.asarray(fields, dtype=float)
    return np.concatenate([fields[-1:], fields, fields[:1]], axis=0)


BOUNDARY_CONDITIONS = {
    "transmissive": apply_transmissive_bc,
    "periodic": apply_periodic_bc,
}

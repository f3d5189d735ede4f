"""One simulation step of dissipative collisionless dynamics for the template."""

from dataclasses import dataclass

import numpy as np

from ._kernels import gpe_kernel
from .bhtree import BHTree, bh_forces
from .core import PointCloud
from .errors import InvalidParam, LengthMismatch


@dataclass
class SwarmState:
    """Current template particle state: positions, velocities, masses (M x D)."""

    positions: np.ndarray
    velocities: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        self.positions = np.ascontiguousarray(np.asarray(self.positions, dtype=np.float64))
        self.velocities = np.ascontiguousarray(np.asarray(self.velocities, dtype=np.float64))
        self.masses = np.ascontiguousarray(np.asarray(self.masses, dtype=np.float64))
        m = len(self.positions)
        if self.velocities.shape != self.positions.shape or self.masses.shape != (m,):
            raise LengthMismatch("positions, velocities and masses must agree in length")
        if np.any(self.masses <= 0):
            raise InvalidParam("masses", "must be strictly positive")

    @classmethod
    def at_rest(cls, positions, masses):
        positions = np.asarray(positions, dtype=np.float64)
        return cls(positions, np.zeros_like(positions), masses)


def total_force(state: SwarmState, tree: BHTree, params):
    """Gravitational pull via the tree plus velocity-proportional dissipation."""
    grav = bh_forces(tree, state.positions, state.masses, params)
    return grav - params.eta * state.velocities


def step(state: SwarmState, forces, params):
    """Velocity-first (Euler-Cromer) update; displacement uses the new velocity."""
    new_velocities = state.velocities + params.dt * forces / state.masses[:, None]
    displacements = params.dt * new_velocities
    return new_velocities, displacements


def gpe(template: SwarmState, reference: PointCloud, ref_masses, params):
    """Exact pairwise gravitational potential energy diagnostic (O(MN))."""
    return float(
        gpe_kernel(
            template.positions,
            template.masses,
            reference.points,
            np.ascontiguousarray(np.asarray(ref_masses, dtype=np.float64)),
            params.G,
            params.epsilon,
        )
    )


def kinetic_energy(state: SwarmState):
    return 0.5 * float((state.masses * (state.velocities**2).sum(axis=1)).sum())

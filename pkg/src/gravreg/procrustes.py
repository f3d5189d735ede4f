"""Closed-form rigid projection of a displaced swarm state (Kabsch with
reflection guard)."""

import numpy as np

from .core import RigidTransform

# singular values below this fraction of the largest flag an ambiguous axis
_DEGENERATE_REL_TOL = 1e-12


def solve_rotation(y, y_d):
    """Best proper rotation mapping the centered previous state onto the
    centered displaced state.

    Returns (rotation, degenerate). ``degenerate`` is set when the covariance
    has rank < D-1, leaving the rotation ambiguous about an axis; the SVD then
    yields one minimizer with identity action on the ambiguous axes.
    """
    y = np.asarray(y, dtype=np.float64)
    y_d = np.asarray(y_d, dtype=np.float64)
    yc = y - y.mean(axis=0)
    yd_c = y_d - y_d.mean(axis=0)

    cov = yd_c.T @ yc
    u, s, vt = np.linalg.svd(cov)
    d = cov.shape[0]
    sign = np.sign(np.linalg.det(u @ vt))
    if sign == 0:
        sign = 1.0
    diag = np.ones(d)
    diag[-1] = sign
    rotation = u @ np.diag(diag) @ vt
    degenerate = bool(np.sum(s > _DEGENERATE_REL_TOL * max(s[0], 1e-300)) < d - 1)
    return rotation, degenerate


def solve_translation(y, y_d, rotation):
    """Translation pairing the rotation: t = mean(y_d) - R mean(y)."""
    y = np.asarray(y, dtype=np.float64)
    y_d = np.asarray(y_d, dtype=np.float64)
    return y_d.mean(axis=0) - rotation @ y.mean(axis=0)


def solve_rigid(y, y_d):
    """Full rigid projection; returns (RigidTransform, degenerate flag)."""
    rotation, degenerate = solve_rotation(y, y_d)
    translation = solve_translation(y, y_d, rotation)
    return RigidTransform(rotation, translation), degenerate

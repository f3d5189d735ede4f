"""Per-point mass fields: RBF landmark interpolation, NIV density measure, SPM.

A mass field is a positive, finite float64 array with one entry per point.
All producers floor their output at MASS_FLOOR so downstream velocity updates
never divide by zero.
"""

from dataclasses import dataclass

import numpy as np

from .core import PointCloud
from .errors import InvalidParam, LengthMismatch, NonFiniteWeight, SingularCollocation
from .normalize import NormalizationContext

MASS_FLOOR = 1e-6


@dataclass(frozen=True)
class LandmarkSet:
    """One-to-one prior correspondences as (template_index, reference_index) pairs."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        tpl = [p[0] for p in pairs]
        ref = [p[1] for p in pairs]
        if len(set(tpl)) != len(tpl) or len(set(ref)) != len(ref):
            raise InvalidParam("pairs", "duplicate landmark index")
        if any(i < 0 for i in tpl + ref):
            raise InvalidParam("pairs", "negative index")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)

    def template_indices(self):
        return [p[0] for p in self.pairs]

    def reference_indices(self):
        return [p[1] for p in self.pairs]

    def check_bounds(self, n_template, n_reference):
        if any(i >= n_template for i in self.template_indices()):
            raise InvalidParam("pairs", "template index out of range")
        if any(i >= n_reference for i in self.reference_indices()):
            raise InvalidParam("pairs", "reference index out of range")


def _gauss_kernel(dist, sigma):
    return np.exp(-(dist * dist) / (sigma * sigma))


def rbf_masses(cloud: PointCloud, anchors, sigma: float):
    """Radially interpolated masses peaking at the anchor points.

    Coefficients are found by collocation forcing the field to 1.0 at every
    anchor; with no anchors the field is uniformly 1.0.
    """
    if sigma <= 0:
        raise InvalidParam("sigma", sigma)
    pts = cloud.points
    anchors = list(anchors)
    if not anchors:
        return np.ones(len(pts))

    centers = pts[anchors]
    m = len(centers)
    dmat = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=-1)
    K = _gauss_kernel(dmat, sigma)
    try:
        cond = np.linalg.cond(K)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise SingularCollocation(str(exc)) from exc
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularCollocation(f"kernel matrix condition {cond:.3g}")
    lam = np.linalg.solve(K, np.ones(m))

    deval = np.linalg.norm(pts[:, None, :] - centers[None, :, :], axis=-1)
    values = _gauss_kernel(deval, sigma) @ lam
    return np.maximum(values, MASS_FLOOR)


def niv_masses(cloud: PointCloud, rho: int, ctx: NormalizationContext, max_depth: int):
    """Normalized intrinsic volume measure over a rho^D lattice on [a, b]^D.

    Each point contributes a ball of radius (b-a)/(2*max_depth*rho); a cell's
    union volume is approximated as min(count * ball, cell). Points in denser
    cells receive smaller values.
    """
    if rho < 2:
        raise InvalidParam("rho", rho)
    pts = cloud.points
    n, d = pts.shape
    a, b = ctx.a, ctx.b
    extent = b - a

    cell_edge = extent / rho
    cell_vol = cell_edge**d
    r_ball = extent / (2.0 * max_depth * rho)
    ball_vol = np.pi * r_ball**2 if d == 2 else (4.0 / 3.0) * np.pi * r_ball**3

    idx = np.floor((pts - a) / cell_edge).astype(np.int64)
    np.clip(idx, 0, rho - 1, out=idx)
    flat = idx[:, 0]
    for k in range(1, d):
        flat = flat * rho + idx[:, k]
    counts = np.bincount(flat, minlength=rho**d)

    total_vol = np.count_nonzero(counts) * cell_vol
    union = np.minimum(counts * ball_vol, cell_vol)
    with np.errstate(divide="ignore"):
        cell_value = np.where(counts > 0, total_vol * cell_vol / np.where(union > 0, union, 1.0), 0.0)
    values = cell_value[flat]
    return np.maximum(values, MASS_FLOOR)


def spm(niv, rbf):
    """Hadamard product of the two mass fields."""
    niv = np.asarray(niv, dtype=np.float64)
    rbf = np.asarray(rbf, dtype=np.float64)
    if niv.shape != rbf.shape:
        raise LengthMismatch(f"{niv.shape} vs {rbf.shape}")
    return niv * rbf


def external_masses(cloud: PointCloud, weights):
    """Adopt externally computed per-point feature weights as masses."""
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(cloud),):
        raise LengthMismatch(f"weights {w.shape} vs points {len(cloud)}")
    if not np.all(np.isfinite(w)):
        raise NonFiniteWeight("weights must be finite")
    return np.maximum(w, MASS_FLOOR)

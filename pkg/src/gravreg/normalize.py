"""Joint normalization of a cloud pair into [a, b] and translation denormalization.

Both clouds are centered at their own means, then scaled by a single shared
factor derived from the joint min/max of all centered coordinates. The scalar
l/r convention preserves aspect ratio, which rigid registration requires.
"""

from dataclasses import dataclass

import numpy as np

from .core import PointCloud, RigidTransform
from .errors import DegenerateExtent, EmptyCloud


@dataclass(frozen=True)
class NormalizationContext:
    mean_x: np.ndarray
    mean_y: np.ndarray
    l: float
    r: float
    a: float
    b: float

    @property
    def scale(self):
        """Factor mapping original distances to normalized distances."""
        return (self.b - self.a) / (self.r - self.l)

    @classmethod
    def identity(cls, dim):
        z = np.zeros(dim)
        return cls(mean_x=z, mean_y=z.copy(), l=0.0, r=1.0, a=0.0, b=1.0)


def normalize_pair(x: PointCloud, y: PointCloud, a: float, b: float):
    """Map both clouds into [a, b]^D with a shared scale.

    Returns (x_norm, y_norm, context). Raises DegenerateExtent when every
    point of both clouds coincides with its cloud centroid.
    """
    x.require_nonempty()
    y.require_nonempty()
    if x.dim != y.dim:
        raise EmptyCloud(f"dimension mismatch: {x.dim} vs {y.dim}")

    mean_x = x.points.mean(axis=0)
    mean_y = y.points.mean(axis=0)
    cx = x.points - mean_x
    cy = y.points - mean_y
    l = min(cx.min(), cy.min())
    r = max(cx.max(), cy.max())
    if r <= l:
        raise DegenerateExtent("all centered coordinates coincide")

    s = (b - a) / (r - l)
    xn = (cx - l) * s + a
    yn = (cy - l) * s + a
    ctx = NormalizationContext(mean_x=mean_x, mean_y=mean_y, l=float(l), r=float(r), a=a, b=b)
    return PointCloud(xn), PointCloud(yn), ctx


def denormalize_translation(t_norm: RigidTransform, ctx: NormalizationContext):
    """Re-express a normalized-frame transform in the original data frame.

    The rotation is unchanged. The translation inverts the affine
    normalization map around the recovered rotation and then restores the
    centroid offset removed by the per-cloud centering. The centroid term is
    +(mean_x - mean_y): with that sign, applying the returned transform to
    the original template reproduces the normalized-frame alignment (checked
    by the frame-consistency oracle in the tests).
    """
    d = t_norm.dim
    R = t_norm.rotation
    t = t_norm.translation
    ones = np.ones(d)
    inv_scale = (ctx.r - ctx.l) / (ctx.b - ctx.a)
    t_orig = (
        -R @ (ctx.mean_y + ctx.l * ones)
        + inv_scale * (R @ (ctx.a * ones) + t - ctx.a * ones)
        + ctx.mean_x
        + ctx.l * ones
    )
    return RigidTransform(R, t_orig)

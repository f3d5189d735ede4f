"""Built-in desk-scale synthetic shapes and disturbance generators.

Shapes are unit-scale (extent ~1, centered at the origin) so the absolute
disturbance magnitudes (Gaussian sigma 0.02, uniform range [-0.5, 0.5])
apply directly.
"""

import numpy as np

from .core import PointCloud, RigidTransform


def rng_from_seed(seed):
    return np.random.Generator(np.random.PCG64(seed))


def cube_shell(n, rng, jitter=0.0):
    """Points sampled on the surface of the unit cube [-0.5, 0.5]^3."""
    face = rng.integers(0, 6, size=n)
    uv = rng.uniform(-0.5, 0.5, size=(n, 2))
    pts = np.empty((n, 3))
    axis = face % 3
    sign = np.where(face < 3, 0.5, -0.5)
    for i in range(n):
        k = axis[i]
        rest = [j for j in range(3) if j != k]
        pts[i, k] = sign[i]
        pts[i, rest[0]] = uv[i, 0]
        pts[i, rest[1]] = uv[i, 1]
    if jitter > 0:
        pts += rng.normal(0.0, jitter, size=pts.shape)
    return PointCloud(pts)


def sphere_shell(n, rng, radius=0.5):
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return PointCloud(v * radius)


def room_corner(n, rng):
    """Two orthogonal half-planes meeting along an edge (a wall corner)."""
    half = n // 2
    u = rng.uniform(0.0, 1.0, size=(n, 2))
    pts = np.empty((n, 3))
    pts[:half, 0] = u[:half, 0] - 0.5
    pts[:half, 1] = 0.0
    pts[:half, 2] = u[:half, 1] - 0.5
    pts[half:, 0] = 0.0
    pts[half:, 1] = u[half:, 0] - 0.5
    pts[half:, 2] = u[half:, 1] - 0.5
    return PointCloud(pts)


def blob(n, rng, k=6):
    """Mixture of k anisotropic Gaussian clusters; rotationally asymmetric, so
    a registration problem on it has a unique optimum."""
    centers = rng.uniform(-0.5, 0.5, size=(k, 3))
    scales = rng.uniform(0.10, 0.18, size=(k, 3))
    which = rng.integers(0, k, size=n)
    return PointCloud(centers[which] + rng.normal(size=(n, 3)) * scales[which])


def bumped_box(n, rng):
    """Near-symmetric cuboid shell with one off-center bump patch. The bump
    makes the optimum unique while leaving flipped poses almost as good, which
    is the regime where landmark correspondences matter."""
    half = np.array([0.5, 0.35, 0.25])
    face = rng.integers(0, 6, size=n)
    uv = rng.uniform(-1.0, 1.0, size=(n, 2))
    axis = face % 3
    sign = np.where(face < 3, 1.0, -1.0)
    pts = np.empty((n, 3))
    for k in range(3):
        on_k = axis == k
        rest = [j for j in range(3) if j != k]
        pts[on_k, k] = sign[on_k] * half[k]
        pts[on_k, rest[0]] = uv[on_k, 0] * half[rest[0]]
        pts[on_k, rest[1]] = uv[on_k, 1] * half[rest[1]]
    on_bump = (np.abs(pts[:, 0] - half[0]) < 1e-9) & (
        np.linalg.norm(pts[:, 1:] - np.array([0.15, 0.08]), axis=1) < 0.12
    )
    pts[on_bump, 0] += 0.1
    return PointCloud(pts)


SHAPES = {
    "cube": cube_shell,
    "sphere": sphere_shell,
    "corner": room_corner,
    "blob": blob,
    "box": bumped_box,
}


def make_shape(name, n, rng):
    if name not in SHAPES:
        raise KeyError(f"unknown shape {name!r}; choose from {sorted(SHAPES)}")
    return SHAPES[name](n, rng)


def random_rotation(rng, max_angle_rad, dim=3):
    """Rotation about a uniform random axis with angle drawn in [0, max]."""
    angle = rng.uniform(0.0, max_angle_rad)
    if dim == 2:
        c, s = np.cos(angle), np.sin(angle)
        return np.array([[c, -s], [s, c]])
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    return axis_angle(axis, angle)


def euler_rotation(rng, max_angle_rad):
    """Per-axis Euler rotation with each angle drawn in U(0, max)."""
    rx, ry, rz = rng.uniform(0.0, max_angle_rad, size=3)
    return (
        axis_angle(np.array([0.0, 0.0, 1.0]), rz)
        @ axis_angle(np.array([0.0, 1.0, 0.0]), ry)
        @ axis_angle(np.array([1.0, 0.0, 0.0]), rx)
    )


def axis_angle(axis, angle):
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)
    k = np.array([
        [0.0, -axis[2], axis[1]],
        [axis[2], 0.0, -axis[0]],
        [-axis[1], axis[0], 0.0],
    ])
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)


def random_rigid(rng, max_angle_rad, max_translation, dim=3, euler=False):
    rot = euler_rotation(rng, max_angle_rad) if euler and dim == 3 else random_rotation(rng, max_angle_rad, dim)
    direction = rng.normal(size=dim)
    direction /= np.linalg.norm(direction)
    trans = direction * rng.uniform(0.0, max_translation)
    return RigidTransform(rot, trans)


def misalign(cloud: PointCloud, transform_gt: RigidTransform):
    """Produce the template whose registration ground truth is transform_gt:
    y = T_gt^{-1}(x), so that T_gt maps y back onto x."""
    return PointCloud(transform_gt.inverse().apply(cloud.points))


def add_gaussian_noise(cloud: PointCloud, fraction, rng, sigma=0.02):
    """Append fraction*n jittered copies of random cloud points."""
    n_extra = int(round(fraction * len(cloud)))
    if n_extra == 0:
        return cloud
    picks = rng.integers(0, len(cloud), size=n_extra)
    extra = cloud.points[picks] + rng.normal(0.0, sigma, size=(n_extra, cloud.dim))
    return PointCloud(np.vstack([cloud.points, extra]))


def add_uniform_noise(cloud: PointCloud, fraction, rng, low=-0.5, high=0.5):
    """Append fraction*n uniform outlier points in [low, high]^D."""
    n_extra = int(round(fraction * len(cloud)))
    if n_extra == 0:
        return cloud
    extra = rng.uniform(low, high, size=(n_extra, cloud.dim))
    return PointCloud(np.vstack([cloud.points, extra]))


def crop_chunk(cloud: PointCloud, fraction, rng):
    """Remove a contiguous chunk: the given fraction of nearest neighbors of a
    random seed point."""
    n_remove = int(round(fraction * len(cloud)))
    if n_remove == 0:
        return cloud
    seed_pt = cloud.points[rng.integers(0, len(cloud))]
    dist = np.linalg.norm(cloud.points - seed_pt, axis=1)
    keep = np.argsort(dist)[n_remove:]
    return PointCloud(cloud.points[np.sort(keep)])


def voxel_subsample(cloud: PointCloud, voxel_size):
    """Keep the first point encountered per occupied voxel."""
    idx = np.floor(cloud.points / voxel_size).astype(np.int64)
    _, first = np.unique(idx, axis=0, return_index=True)
    return PointCloud(cloud.points[np.sort(first)])

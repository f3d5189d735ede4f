"""Core domain types: point clouds, rigid transforms, solver parameters."""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EmptyCloud, InvalidParam, LengthMismatch

ORTHO_TOL = 1e-9


@dataclass(frozen=True)
class PointCloud:
    """Ordered set of D-dimensional points with optional per-point masses.

    ``points`` is an (n, D) float64 array with D in {2, 3}. Instances are
    immutable; the backing arrays are marked read-only on construction.
    """

    points: np.ndarray
    masses: np.ndarray | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise InvalidParam("points", pts.shape)
        if not np.all(np.isfinite(pts)):
            raise InvalidParam("points", "non-finite coordinate")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.masses is not None:
            m = np.ascontiguousarray(np.asarray(self.masses, dtype=np.float64))
            if m.shape != (len(pts),):
                raise LengthMismatch(f"masses {m.shape} vs points {pts.shape}")
            if not np.all(np.isfinite(m)) or np.any(m <= 0):
                raise InvalidParam("masses", "must be positive and finite")
            m.setflags(write=False)
            object.__setattr__(self, "masses", m)

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return len(self.points)

    def require_nonempty(self):
        if len(self) == 0:
            raise EmptyCloud("registration requires a non-empty cloud")
        return self


@dataclass(frozen=True)
class RigidTransform:
    """Rotation matrix plus translation vector, acting as p -> R p + t."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        r = np.ascontiguousarray(np.asarray(self.rotation, dtype=np.float64))
        t = np.ascontiguousarray(np.asarray(self.translation, dtype=np.float64))
        d = t.shape[0]
        if r.shape != (d, d) or d not in (2, 3):
            raise InvalidParam("rotation", r.shape)
        if np.linalg.norm(r.T @ r - np.eye(d)) > 1e-6:
            raise InvalidParam("rotation", "not orthonormal")
        if abs(np.linalg.det(r) - 1.0) > 1e-6:
            raise InvalidParam("rotation", "det != +1")
        r.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim), np.zeros(dim))

    @property
    def dim(self):
        return self.translation.shape[0]

    def apply(self, points):
        points = np.asarray(points, dtype=np.float64)
        return points @ self.rotation.T + self.translation

    def compose(self, other):
        """Return self after other: (self.compose(other))(p) == self(other(p))."""
        return RigidTransform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def inverse(self):
        rinv = self.rotation.T
        return RigidTransform(rinv, -rinv @ self.translation)

    def as_matrix(self):
        """D x (D+1) matrix [R | t]."""
        return np.hstack([self.rotation, self.translation[:, None]])


@dataclass(frozen=True)
class FgaParams:
    """Simulation and solver parameters."""

    G: float = 66.7
    epsilon: float = 0.2
    eta: float = 0.2
    dt: float = 0.1
    theta: float = 0.6
    sigma: float = 0.03
    rho: int = 16
    max_depth: int = 20
    norm_range: tuple[float, float] = (-5.0, 5.0)
    conv_tol: float = 1e-4
    max_iters: int = 100

    def replace(self, **kwargs):
        return replace(self, **kwargs)


def default_params():
    return FgaParams()


def validate(params):
    """Raise InvalidParam on the first field violating its range constraint."""
    if not params.G > 0:
        raise InvalidParam("G", params.G)
    if not params.epsilon >= 0:
        raise InvalidParam("epsilon", params.epsilon)
    if not (0 <= params.eta < 1):
        raise InvalidParam("eta", params.eta)
    if not params.dt > 0:
        raise InvalidParam("dt", params.dt)
    if not (0 <= params.theta <= 1):
        raise InvalidParam("theta", params.theta)
    if not params.sigma > 0:
        raise InvalidParam("sigma", params.sigma)
    if not params.rho >= 2:
        raise InvalidParam("rho", params.rho)
    if not params.max_depth >= 1:
        raise InvalidParam("max_depth", params.max_depth)
    a, b = params.norm_range
    if not a < b:
        raise InvalidParam("norm_range", params.norm_range)
    if not params.conv_tol > 0:
        raise InvalidParam("conv_tol", params.conv_tol)
    if not params.max_iters >= 1:
        raise InvalidParam("max_iters", params.max_iters)


@dataclass
class IterationRecord:
    index: int
    transform_delta: float
    gpe: float | None = None
    rmse_to_ref: float | None = None


@dataclass
class RegistrationResult:
    """Outcome of one registration run, transform in the original frame."""

    transform: RigidTransform
    iterations: int
    gpe_trace: list[float]
    converged: bool
    gpe_initial: float | None = None
    gpe_final: float | None = None
    records: list[IterationRecord] = field(default_factory=list)

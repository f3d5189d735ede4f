"""Rigid point-set registration via a softened gravitational particle
simulation with a Barnes-Hut style spatial tree."""

from .core import (
    FgaParams,
    IterationRecord,
    PointCloud,
    RegistrationResult,
    RigidTransform,
    default_params,
    validate,
)
from .errors import (
    DegenerateExtent,
    EmptyCloud,
    GravregError,
    InvalidParam,
    LengthMismatch,
    NonFiniteWeight,
    ParseError,
    SingularCollocation,
    UnsupportedFormat,
)
from .masses import LandmarkSet, external_masses, niv_masses, rbf_masses, spm
from .metrics import EvalReport, angular_deviation, rmse, total_error
from .normalize import NormalizationContext, denormalize_translation, normalize_pair
from .registration import (
    RegisterOptions,
    SequenceResult,
    register,
    register_sequence,
)

__all__ = [
    "FgaParams",
    "IterationRecord",
    "PointCloud",
    "RegistrationResult",
    "RigidTransform",
    "default_params",
    "validate",
    "GravregError",
    "InvalidParam",
    "EmptyCloud",
    "DegenerateExtent",
    "SingularCollocation",
    "LengthMismatch",
    "NonFiniteWeight",
    "ParseError",
    "UnsupportedFormat",
    "LandmarkSet",
    "rbf_masses",
    "niv_masses",
    "spm",
    "external_masses",
    "EvalReport",
    "rmse",
    "angular_deviation",
    "total_error",
    "NormalizationContext",
    "normalize_pair",
    "denormalize_translation",
    "RegisterOptions",
    "SequenceResult",
    "register",
    "register_sequence",
]

__version__ = "0.1.0"

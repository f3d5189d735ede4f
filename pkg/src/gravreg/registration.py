"""The registration driver: normalization, masses, tree build, simulation loop
with per-iteration rigid projection, convergence and denormalization."""

from dataclasses import dataclass, field

import numpy as np

from . import bhtree, dynamics, masses as massmod, procrustes
from .core import (
    FgaParams,
    IterationRecord,
    PointCloud,
    RegistrationResult,
    RigidTransform,
    default_params,
    validate,
)
from .errors import EmptyCloud, GravregError
from .normalize import NormalizationContext, denormalize_translation, normalize_pair


@dataclass
class RegisterOptions:
    """Trace and behavior flags for a registration run."""

    trace_gpe: bool = False
    normalize: bool = True
    # external per-point feature weights replacing the SPM field
    x_weights: np.ndarray | None = None
    y_weights: np.ndarray | None = None
    record_iterations: bool = False


# Total reference mass after rescaling, for a cloud of FIELD_MASS_POINTS
# points. Together with G this sets the field strength; chosen so a misaligned
# swarm settles well inside the iteration cap while per-particle wells stay
# integrable at the default time step. The budget grows as sqrt(N): the force
# ripple a settled swarm feels is an rms over N per-point contributions, so a
# sqrt(N) budget keeps the residual pose jitter at the convergence tolerance
# independent of cloud size.
FIELD_MASS = 16.0
FIELD_MASS_POINTS = 2000

# Per-point ceiling on the rescaled reference field. For small clouds the
# fixed total mass concentrates on few points and a single attractor's well
# becomes too stiff for the default time step; clipping heavy points keeps
# per-iteration displacements inside the well while leaving the rest of the
# field untouched.
REFERENCE_POINT_CAP = 0.022

# Peak template mass after rescaling. Small template masses make the velocity
# damping near-deadbeat, which keeps the pose from oscillating through the
# convergence test.
TEMPLATE_PEAK_MASS = 0.1


# Dissipation divides by per-point mass; a template mass below dt*eta would
# make the damping term overshoot and oscillate, so the rescaled template
# field is floored there.
def _damping_floor(params):
    return max(massmod.MASS_FLOOR, params.dt * params.eta)


def _mass_fields(x, y, landmarks, params, ctx, options):
    """SPM (or external) mass fields, rescaled to stable magnitudes.

    The reference field is scaled to a fixed total mass so the induced force
    field strength is independent of point count; the template field is
    scaled to a fixed maximum (its absolute scale cancels in the gravitational
    velocity update and only modulates per-point dissipation).
    """
    if options.x_weights is not None:
        sx = massmod.external_masses(x, options.x_weights)
    else:
        sx = massmod.niv_masses(x, params.rho, ctx, params.max_depth)
        if landmarks is not None and len(landmarks) > 0:
            sx = massmod.spm(sx, massmod.rbf_masses(x, landmarks.reference_indices(), params.sigma))
    if options.y_weights is not None:
        sy = massmod.external_masses(y, options.y_weights)
    else:
        sy = massmod.niv_masses(y, params.rho, ctx, params.max_depth)
        if landmarks is not None and len(landmarks) > 0:
            sy = massmod.spm(sy, massmod.rbf_masses(y, landmarks.template_indices(), params.sigma))

    budget = FIELD_MASS * np.sqrt(len(sx) / FIELD_MASS_POINTS)
    sx = np.minimum(budget * sx / sx.sum(), REFERENCE_POINT_CAP)
    sy = np.maximum(TEMPLATE_PEAK_MASS * sy / sy.max(), _damping_floor(params))
    return sx, sy


def register(x: PointCloud, y: PointCloud, landmarks=None, params: FgaParams | None = None,
             options: RegisterOptions | None = None) -> RegistrationResult:
    """Align template ``y`` to reference ``x``; the returned transform is
    expressed in the original (unnormalized) frame."""
    params = params or default_params()
    options = options or RegisterOptions()
    validate(params)
    x.require_nonempty()
    y.require_nonempty()
    if x.dim != y.dim:
        raise EmptyCloud(f"dimension mismatch: {x.dim} vs {y.dim}")
    if landmarks is not None:
        landmarks.check_bounds(len(y), len(x))

    a, b = params.norm_range
    if options.normalize:
        xn, yn, ctx = normalize_pair(x, y, a, b)
    else:
        # raw-frame mode assumes the inputs already live in the working range;
        # this context spans [a, b] for the density lattice and is an identity
        # for the final translation mapping
        z = np.zeros(x.dim)
        xn, yn, ctx = x, y, NormalizationContext(mean_x=z, mean_y=z.copy(), l=a, r=b, a=a, b=b)

    mass_x, mass_y = _mass_fields(xn, yn, landmarks, params, ctx, options)
    tree = bhtree.build(xn, mass_x, params.max_depth)

    dim = x.dim
    state = dynamics.SwarmState.at_rest(yn.points.copy(), mass_y)
    r_acc = np.eye(dim)
    t_acc = np.zeros(dim)
    t_prev = np.hstack([r_acc, t_acc[:, None]])

    gpe_initial = dynamics.gpe(state, xn, mass_x, params)
    gpe_trace = []
    records = []
    converged = False
    iterations = 0

    for it in range(params.max_iters):
        forces = dynamics.total_force(state, tree, params)
        velocities, displacements = dynamics.step(state, forces, params)
        step_tf, _ = procrustes.solve_rigid(state.positions, state.positions + displacements)

        state.positions = state.positions @ step_tf.rotation.T + step_tf.translation
        state.velocities = velocities @ step_tf.rotation.T
        r_acc = step_tf.rotation @ r_acc
        t_acc = step_tf.translation + step_tf.rotation @ t_acc

        t_curr = np.hstack([r_acc, t_acc[:, None]])
        delta = float(((t_curr - t_prev) ** 2).sum())
        t_prev = t_curr
        iterations = it + 1

        gpe_value = None
        if options.trace_gpe:
            gpe_value = dynamics.gpe(state, xn, mass_x, params)
            gpe_trace.append(gpe_value)
        if options.record_iterations:
            records.append(IterationRecord(index=it, transform_delta=delta, gpe=gpe_value))

        if delta < params.conv_tol:
            converged = True
            break

    gpe_final = dynamics.gpe(state, xn, mass_x, params)
    transform = denormalize_translation(RigidTransform(r_acc, t_acc), ctx)
    return RegistrationResult(
        transform=transform,
        iterations=iterations,
        gpe_trace=gpe_trace,
        converged=converged,
        gpe_initial=gpe_initial,
        gpe_final=gpe_final,
        records=records,
    )


@dataclass
class SequenceResult:
    """Pairwise frame transforms plus composed absolute poses (frame-0 coords)."""

    pairwise: list[RigidTransform]
    trajectory: list[RigidTransform]
    failed: list[bool] = field(default_factory=list)


def register_sequence(frames, params: FgaParams | None = None,
                      options: RegisterOptions | None = None) -> SequenceResult:
    """Register frame i (template) onto frame i+1 (reference), pairwise.

    A failed pair is recorded with an identity transform so the composed
    trajectory stays computable.
    """
    frames = list(frames)
    if len(frames) < 2:
        raise EmptyCloud("sequence registration needs at least 2 frames")
    params = params or default_params()

    pairwise = []
    failed = []
    for i in range(len(frames) - 1):
        try:
            # template is frame i, reference is frame i+1
            result = register(x=frames[i + 1], y=frames[i], params=params, options=options)
            pairwise.append(result.transform)
            failed.append(False)
        except GravregError:
            pairwise.append(RigidTransform.identity(frames[i].dim))
            failed.append(True)

    trajectory = [RigidTransform.identity(frames[0].dim)]
    for tf in pairwise:
        # pose_k maps frame-k coordinates into frame-0 coordinates
        trajectory.append(trajectory[-1].compose(tf.inverse()))
    return SequenceResult(pairwise=pairwise, trajectory=trajectory, failed=failed)

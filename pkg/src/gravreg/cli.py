"""Command-line surface: register, benchmark, odometry, masses-dump,
tree-dump, metrics.

Options can come from a flat "key value" config file (--config); command-line
flags win over config values. All randomness flows from a single --seed.
Exit codes: 0 success, 1 error, 2 registration did not converge.
"""

import argparse
import sys
import time

import numpy as np

from . import bhtree, io, masses as massmod, metrics, synth
from .core import PointCloud, RigidTransform, default_params
from .errors import GravregError
from .normalize import normalize_pair
from .registration import RegisterOptions, register, register_sequence

PARAM_KEYS = (
    "G", "epsilon", "eta", "dt", "theta", "sigma", "rho",
    "max_depth", "norm_a", "norm_b", "conv_tol", "max_iters",
)
INT_KEYS = {"rho", "max_depth", "max_iters"}


def add_param_flags(parser):
    for key in PARAM_KEYS:
        parser.add_argument("--" + key.replace("_", "-"), type=str, default=None)
    parser.add_argument("--config", type=str, default=None,
                        help="flat 'key value' config file; flags win")
    parser.add_argument("--seed", type=str, default=None)
    parser.add_argument("--jobs", type=str, default=None,
                        help="parallelism degree for the force map (advisory)")


def resolve_options(args):
    """Merge config file values and flags (flags win); returns (params, extras)."""
    merged = {}
    if args.config:
        merged.update(io.parse_config_file(args.config))
    for key in PARAM_KEYS + ("seed", "jobs"):
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag

    params = default_params()
    updates = {}
    a, b = params.norm_range
    for key, raw in merged.items():
        if key in ("norm_a", "norm_b"):
            if key == "norm_a":
                a = float(raw)
            else:
                b = float(raw)
        elif key in INT_KEYS:
            updates[key] = int(raw)
        elif key in PARAM_KEYS:
            updates[key] = float(raw)
    updates["norm_range"] = (a, b)
    params = params.replace(**updates)
    seed = int(merged.get("seed", 0))
    return params, seed


def _load_landmarks(path, y, x):
    landmarks = io.load_landmarks(path)
    landmarks.check_bounds(len(y), len(x))
    return landmarks


def cmd_register(args):
    x = io.load_cloud(args.reference)
    y = io.load_cloud(args.template)
    params, _ = resolve_options(args)
    landmarks = _load_landmarks(args.landmarks, y, x) if args.landmarks else None
    options = RegisterOptions(
        trace_gpe=args.trace_gpe or bool(args.plot),
        x_weights=io.load_weights(args.weights_reference) if args.weights_reference else None,
        y_weights=io.load_weights(args.weights_template) if args.weights_template else None,
    )
    t0 = time.perf_counter()
    result = register(x, y, landmarks=landmarks, params=params, options=options)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0

    record = {
        "iterations": result.iterations,
        "converged": int(result.converged),
        "gpe_initial": result.gpe_initial,
        "gpe_final": result.gpe_final,
    }
    io.write_record(args.output, record, result.transform)
    # timing goes to the diagnostic stream so output files stay reproducible
    print(f"time_ms {elapsed_ms:.3f}", file=sys.stderr)
    if args.plot:
        from . import plotting
        plotting.save_gpe_trace(result.gpe_trace, args.plot)
    return 0 if result.converged else 2


def cmd_benchmark(args):
    params, seed = resolve_options(args)
    rng = synth.rng_from_seed(seed)
    max_angle = np.radians(args.max_angle_deg)

    rows = []
    rmses = []
    successes = []
    total_ms = 0.0
    for trial in range(args.trials):
        base = synth.make_shape(args.shape, args.points, rng)
        if args.voxel_size:
            base = synth.voxel_subsample(base, args.voxel_size)
        if args.disturbance == "gaussian":
            base = synth.add_gaussian_noise(base, args.fraction, rng, sigma=args.noise_sigma)
        elif args.disturbance == "uniform":
            base = synth.add_uniform_noise(base, args.fraction, rng)
        elif args.disturbance == "crop":
            base = synth.crop_chunk(base, args.fraction, rng)
        gt = synth.random_rigid(rng, max_angle, args.max_translation,
                                dim=base.dim, euler=args.euler)
        y = synth.misalign(base, gt)
        landmarks = None
        if args.landmark_count > 0:
            picks = rng.choice(len(base), size=args.landmark_count, replace=False)
            landmarks = massmod.LandmarkSet(tuple((int(i), int(i)) for i in picks))

        t0 = time.perf_counter()
        try:
            result = register(base, y, landmarks=landmarks, params=params)
        except GravregError as exc:
            rows.append({"trial": trial, "failed": 1, "reason": str(exc)})
            rmses.append(float("nan"))
            successes.append(False)
            continue
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        total_ms += elapsed_ms

        report = metrics.total_error(
            gt.rotation, gt.translation,
            result.transform.rotation, result.transform.translation, y=y,
        )
        row = {"trial": trial, "failed": 0}
        row.update(report.as_record())
        row["iterations"] = result.iterations
        row["converged"] = int(result.converged)
        rows.append(row)
        rmses.append(report.rmse)
        successes.append(report.rmse < args.success_rmse)

    with open(args.output, "w") as fh:
        for row in rows:
            fh.write(" ".join(f"{k}={v:.17g}" if isinstance(v, float) else f"{k}={v}"
                              for k, v in row.items()) + "\n")
        n_ok = sum(successes)
        fh.write(f"aggregate trials={args.trials} success={n_ok}"
                 f" success_rate={n_ok / args.trials:.17g}\n")
    print(f"mean_time_ms {total_ms / max(args.trials, 1):.3f}", file=sys.stderr)
    if args.plot:
        from . import plotting
        plotting.save_benchmark(np.nan_to_num(np.array(rmses), nan=0.0), successes, args.plot)
    return 0


def cmd_odometry(args):
    frames = [io.load_cloud(p) for p in args.frames]
    params, _ = resolve_options(args)
    result = register_sequence(frames, params=params)

    gt_poses = None
    if args.gt:
        gt_poses = []
        with open(args.gt) as fh:
            for line in fh:
                vals = np.array([float(v) for v in line.split()])
                if len(vals) == 0:
                    continue
                d = 3 if len(vals) == 12 else 2
                mat = vals.reshape(d, d + 1)
                gt_poses.append(RigidTransform(mat[:, :d], mat[:, d]))

    with open(args.output, "w") as fh:
        for i, (tf, failed) in enumerate(zip(result.pairwise, result.failed)):
            flat = " ".join(f"{v:.17g}" for v in tf.as_matrix().ravel())
            fh.write(f"pair {i} failed={int(failed)} {flat}\n")
        cum_phi = 0.0
        for k, pose in enumerate(result.trajectory):
            flat = " ".join(f"{v:.17g}" for v in pose.as_matrix().ravel())
            line = f"pose {k} {flat}"
            if gt_poses is not None and k < len(gt_poses):
                phi = metrics.angular_deviation(gt_poses[k].rotation, pose.rotation)
                dt_err = float(np.linalg.norm(gt_poses[k].translation - pose.translation))
                cum_phi += phi
                line += f" cum_phi={cum_phi:.17g} trans_err={dt_err:.17g}"
            fh.write(line + "\n")
    if args.plot:
        from . import plotting
        plotting.save_trajectory(result.trajectory, args.plot, gt_poses=gt_poses)
    return 0


def cmd_masses_dump(args):
    cloud = io.load_cloud(args.input)
    params, _ = resolve_options(args)
    a, b = params.norm_range
    normed, _, ctx = normalize_pair(cloud, cloud, a, b)
    field = massmod.niv_masses(normed, params.rho, ctx, params.max_depth)
    if args.landmarks:
        landmarks = io.load_landmarks(args.landmarks)
        anchors = (landmarks.reference_indices() if args.role == "reference"
                   else landmarks.template_indices())
        field = massmod.spm(field, massmod.rbf_masses(normed, anchors, params.sigma))
    io.write_weights(args.output, field)
    return 0


def cmd_tree_dump(args):
    cloud = io.load_cloud(args.input)
    params, _ = resolve_options(args)
    weights = (io.load_weights(args.weights) if args.weights
               else np.ones(len(cloud)))
    tree = bhtree.build(cloud, weights, params.max_depth)
    with open(args.output, "w") as fh:
        fh.write(bhtree.dump(tree))
    return 0


def cmd_metrics(args):
    _, est_tf = io.read_record(args.estimate)
    _, gt_tf = io.read_record(args.truth)
    if est_tf is None or gt_tf is None:
        print("metrics: both records need a transform line", file=sys.stderr)
        return 1
    y = io.load_cloud(args.template) if args.template else None
    report = metrics.total_error(
        gt_tf.rotation, gt_tf.translation, est_tf.rotation, est_tf.translation, y=y,
    )
    record = {k: v for k, v in report.as_record().items()}
    if args.output:
        io.write_record(args.output, record)
    else:
        for k, v in record.items():
            print(f"{k} {v:.17g}" if isinstance(v, float) else f"{k} {v}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="gravreg",
                                     description="Gravitational rigid point-set registration")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("register", help="align a template cloud onto a reference cloud")
    p.add_argument("--reference", required=True)
    p.add_argument("--template", required=True)
    p.add_argument("--landmarks")
    p.add_argument("--weights-reference")
    p.add_argument("--weights-template")
    p.add_argument("--output", default="registration.txt")
    p.add_argument("--trace-gpe", action="store_true")
    p.add_argument("--plot", help="write a potential-energy trace figure to this path")
    add_param_flags(p)
    p.set_defaults(func=cmd_register)

    p = sub.add_parser("benchmark", help="seeded synthetic recovery trials")
    p.add_argument("--shape", default="blob", choices=sorted(synth.SHAPES))
    p.add_argument("--points", type=int, default=2000)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--max-angle-deg", type=float, default=60.0)
    p.add_argument("--euler", action="store_true",
                   help="draw per-axis rotations instead of a single axis-angle")
    p.add_argument("--max-translation", type=float, default=0.1)
    p.add_argument("--disturbance", default="none",
                   choices=("none", "gaussian", "uniform", "crop"))
    p.add_argument("--fraction", type=float, default=0.0)
    p.add_argument("--noise-sigma", type=float, default=0.02)
    p.add_argument("--voxel-size", type=float, default=0.0)
    p.add_argument("--landmark-count", type=int, default=0)
    p.add_argument("--success-rmse", type=float, default=0.01)
    p.add_argument("--output", default="benchmark.txt")
    p.add_argument("--plot", help="write a per-trial RMSE figure to this path")
    add_param_flags(p)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("odometry", help="pairwise frame registration and composed trajectory")
    p.add_argument("frames", nargs="+")
    p.add_argument("--gt", help="ground-truth poses, one row-major transform per line")
    p.add_argument("--output", default="odometry.txt")
    p.add_argument("--plot", help="write a trajectory figure to this path")
    add_param_flags(p)
    p.set_defaults(func=cmd_odometry)

    p = sub.add_parser("masses-dump", help="write the per-point mass field")
    p.add_argument("--input", required=True)
    p.add_argument("--landmarks")
    p.add_argument("--role", default="template", choices=("template", "reference"))
    p.add_argument("--output", default="masses.txt")
    add_param_flags(p)
    p.set_defaults(func=cmd_masses_dump)

    p = sub.add_parser("tree-dump", help="write the spatial tree debug text")
    p.add_argument("--input", required=True)
    p.add_argument("--weights")
    p.add_argument("--output", default="tree.txt")
    add_param_flags(p)
    p.set_defaults(func=cmd_tree_dump)

    p = sub.add_parser("metrics", help="compare two transform records")
    p.add_argument("--estimate", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--template", help="optional cloud for the RMSE column")
    p.add_argument("--output")
    add_param_flags(p)
    p.set_defaults(func=cmd_metrics)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GravregError, OSError, ValueError) as exc:
        print(f"gravreg: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

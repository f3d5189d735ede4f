"""End-to-end registration driver and sequence registration."""

import numpy as np
import pytest

from gravreg import (
    EmptyCloud,
    LandmarkSet,
    PointCloud,
    RegisterOptions,
    RigidTransform,
    default_params,
    register,
    register_sequence,
    rmse,
)
from gravreg import synth


def test_identical_clouds_stay_near_identity():
    rng = synth.rng_from_seed(7)
    x = synth.blob(1000, rng)
    result = register(x, x)
    assert result.converged
    # residual sits at the method's accuracy floor, not machine precision
    assert np.linalg.norm(result.transform.rotation - np.eye(3)) < 0.02
    assert np.linalg.norm(result.transform.translation) < 0.02


def test_recovers_synthetic_misalignment():
    rng = synth.rng_from_seed(11)
    x = synth.blob(1000, rng)
    gt = synth.random_rigid(rng, np.deg2rad(30), 0.1)
    y = synth.misalign(x, gt)
    result = register(x, y)
    assert result.converged
    assert result.iterations <= default_params().max_iters
    assert rmse(y, result.transform, gt) < 0.01


def test_result_shape_and_trace():
    rng = synth.rng_from_seed(12)
    x = synth.blob(600, rng)
    gt = synth.random_rigid(rng, np.deg2rad(20), 0.05)
    y = synth.misalign(x, gt)
    result = register(x, y, options=RegisterOptions(trace_gpe=True, record_iterations=True))
    assert len(result.gpe_trace) == result.iterations
    assert len(result.records) == result.iterations
    assert all(rec.transform_delta >= 0 for rec in result.records)
    # returned transform satisfies the rigid invariants by construction
    r = result.transform.rotation
    assert np.linalg.norm(r.T @ r - np.eye(3)) < 1e-9
    assert abs(np.linalg.det(r) - 1.0) < 1e-9


def test_registration_determinism():
    rng = synth.rng_from_seed(13)
    x = synth.blob(800, rng)
    gt = synth.random_rigid(rng, np.deg2rad(25), 0.05)
    y = synth.misalign(x, gt)
    r1 = register(x, y)
    r2 = register(x, y)
    assert np.array_equal(r1.transform.rotation, r2.transform.rotation)
    assert np.array_equal(r1.transform.translation, r2.transform.translation)
    assert r1.iterations == r2.iterations


def test_theta_accuracy_close_to_exact():
    errs_gated, errs_exact = [], []
    for s in range(3):
        rng = synth.rng_from_seed(100 + s)
        x = synth.blob(1500, rng)
        gt = synth.random_rigid(rng, np.deg2rad(45), 0.1)
        y = synth.misalign(x, gt)
        errs_gated.append(rmse(y, register(x, y).transform, gt))
        exact = register(x, y, params=default_params().replace(theta=0.0))
        errs_exact.append(rmse(y, exact.transform, gt))
    assert np.mean(errs_gated) < 2.0 * np.mean(errs_exact)


def test_invalid_inputs():
    x3 = PointCloud(np.random.default_rng(0).normal(size=(10, 3)))
    x2 = PointCloud(np.random.default_rng(0).normal(size=(10, 2)))
    with pytest.raises(EmptyCloud):
        register(x3, x2)
    with pytest.raises(EmptyCloud):
        register(PointCloud(np.zeros((0, 3))), x3)


def test_landmark_bounds_checked():
    rng = synth.rng_from_seed(14)
    x = synth.blob(100, rng)
    lm = LandmarkSet(((0, 150),))
    with pytest.raises(Exception):
        register(x, x, landmarks=lm)


def test_landmark_and_weight_paths_run():
    rng = synth.rng_from_seed(15)
    x = synth.blob(600, rng)
    gt = synth.random_rigid(rng, np.deg2rad(20), 0.05)
    y = synth.misalign(x, gt)
    idx = rng.choice(600, size=3, replace=False)
    lm = LandmarkSet(tuple((int(i), int(i)) for i in idx))
    res = register(x, y, landmarks=lm, params=default_params().replace(sigma=12.0))
    assert rmse(y, res.transform, gt) < 0.05

    w = np.ones(600)
    res_w = register(x, y, options=RegisterOptions(x_weights=w, y_weights=w))
    assert res_w.transform.rotation.shape == (3, 3)


def test_two_dimensional_clouds_run():
    rng = synth.rng_from_seed(16)
    pts = rng.uniform(-0.5, 0.5, size=(400, 2))
    x = PointCloud(pts)
    a = 0.2
    gt = RigidTransform(
        np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]]),
        np.array([0.05, -0.02]),
    )
    y = PointCloud(gt.inverse().apply(pts))
    result = register(x, y)
    assert result.transform.rotation.shape == (2, 2)
    assert abs(np.linalg.det(result.transform.rotation) - 1.0) < 1e-9


def test_sequence_identical_frames():
    rng = synth.rng_from_seed(17)
    x = synth.blob(800, rng)
    result = register_sequence([x, x, x])
    assert len(result.pairwise) == 2
    assert len(result.trajectory) == 3
    assert not any(result.failed)
    for tf in result.pairwise:
        assert np.linalg.norm(tf.translation) < 0.02
    for pose in result.trajectory:
        assert np.linalg.norm(pose.translation) < 0.05


def test_sequence_two_frames_shape():
    rng = synth.rng_from_seed(18)
    x = synth.blob(500, rng)
    y = PointCloud(x.points + np.array([0.01, 0.0, 0.0]))
    result = register_sequence([x, y])
    assert len(result.pairwise) == 1
    assert len(result.trajectory) == 2


def test_sequence_tracks_synthetic_motion():
    rng = synth.rng_from_seed(77)
    base = synth.blob(1200, rng)
    frames = [base]
    gt_poses = [RigidTransform.identity(3)]
    acc = RigidTransform.identity(3)
    path_len = 0.0
    for _ in range(4):
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        inc = RigidTransform(
            synth.random_rotation(rng, np.deg2rad(5)), direction * 0.08
        )
        acc = inc.compose(acc)
        frames.append(PointCloud(acc.apply(base.points)))
        path_len += 0.08
        gt_poses.append(acc.inverse())
    result = register_sequence(frames)
    assert not any(result.failed)
    final_err = np.linalg.norm(
        result.trajectory[-1].translation - gt_poses[-1].translation
    )
    assert final_err < 0.05 * path_len


def test_sequence_needs_two_frames():
    rng = synth.rng_from_seed(19)
    x = synth.blob(100, rng)
    with pytest.raises(EmptyCloud):
        register_sequence([x])

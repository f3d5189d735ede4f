"""Evaluation metrics: RMSE, angular deviation, combined error report."""

import numpy as np

from gravreg import PointCloud, RigidTransform, angular_deviation, rmse, total_error
from gravreg.synth import axis_angle, rng_from_seed


def _random_transform(rng):
    return RigidTransform(axis_angle(rng.normal(size=3), rng.uniform(0, np.pi)),
                          rng.normal(size=3))


def test_rmse_zero_on_equal_transforms():
    rng = rng_from_seed(0)
    y = PointCloud(rng.normal(size=(20, 3)))
    tf = _random_transform(rng)
    assert rmse(y, tf, tf) == 0.0


def test_rmse_uniform_offset():
    rng = rng_from_seed(1)
    y = PointCloud(rng.normal(size=(15, 3)))
    gt = _random_transform(rng)
    delta = 0.37
    est = RigidTransform(gt.rotation, gt.translation + np.array([delta, 0.0, 0.0]))
    assert abs(rmse(y, est, gt) - delta) < 1e-12


def test_rmse_matches_naive_loop():
    rng = rng_from_seed(2)
    y = PointCloud(rng.normal(size=(30, 3)))
    gt = _random_transform(rng)
    est = _random_transform(rng)
    acc = 0.0
    for p in y.points:
        a = gt.rotation @ p + gt.translation
        b = est.rotation @ p + est.translation
        acc += ((a - b) ** 2).sum()
    naive = np.sqrt(acc / len(y))
    assert abs(rmse(y, est, gt) - naive) < 1e-12


def test_angular_deviation_hand_values():
    assert angular_deviation(np.eye(3), np.eye(3)) == 0.0
    rz90 = axis_angle([0, 0, 1], np.pi / 2)
    assert abs(angular_deviation(np.eye(3), rz90) - 90.0) < 1e-9
    rx180 = axis_angle([1, 0, 0], np.pi)
    assert abs(angular_deviation(np.eye(3), rx180) - 180.0) < 1e-9
    # 2D case
    r2 = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert abs(angular_deviation(np.eye(2), r2) - 90.0) < 1e-9


def test_angular_deviation_symmetry_and_invariance():
    rng = rng_from_seed(3)
    a = axis_angle(rng.normal(size=3), 0.7)
    b = axis_angle(rng.normal(size=3), 1.9)
    q = axis_angle(rng.normal(size=3), 2.4)
    assert abs(angular_deviation(a, b) - angular_deviation(b, a)) < 1e-9
    assert abs(angular_deviation(q @ a, q @ b) - angular_deviation(a, b)) < 1e-9


def test_angular_deviation_clamps():
    # a rotation numerically indistinguishable from identity must not NaN
    near = axis_angle([0, 0, 1], 1e-16)
    assert angular_deviation(np.eye(3), near) >= 0.0


def test_total_error_report():
    rng = rng_from_seed(4)
    gt = _random_transform(rng)
    report = total_error(gt.rotation, gt.translation, gt.rotation, gt.translation)
    # arccos near its boundary amplifies rounding into ~1e-6 degrees
    assert report.total_err < 1e-5
    assert all(report.success_at.values())

    rz = axis_angle([0, 0, 1], np.deg2rad(3.0))
    est_r = gt.rotation @ rz
    est_t = gt.translation + np.array([0.5, 0.0, 0.0])
    report = total_error(gt.rotation, gt.translation, est_r, est_t)
    assert abs(report.angular_deg - 3.0) < 1e-9
    assert abs(report.translation_err - 0.5) < 1e-9
    assert abs(report.total_err - (report.angular_deg + report.translation_err)) < 1e-12
    # 3 degrees < 5 but 0.5 is not < 0.2
    assert report.success_at[(5.0, 0.2)] is False


def test_success_threshold_is_strict():
    gt = RigidTransform.identity(3)
    est_t = np.array([0.2, 0.0, 0.0])
    report = total_error(gt.rotation, gt.translation, gt.rotation, est_t,
                         thresholds=((5.0, 0.2),))
    assert report.success_at[(5.0, 0.2)] is False


def test_report_record_keys():
    rng = rng_from_seed(5)
    gt = _random_transform(rng)
    y = PointCloud(rng.normal(size=(10, 3)))
    report = total_error(gt.rotation, gt.translation, gt.rotation, gt.translation, y=y)
    rec = report.as_record()
    assert rec["rmse"] == 0.0
    assert "angular_deg" in rec and "translation_err" in rec and "total_err" in rec
    assert rec["success_phi5_t0.2"] == 1

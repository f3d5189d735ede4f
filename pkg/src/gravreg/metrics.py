"""Evaluation metrics: transform-space RMSE, chordal angular deviation,
translation error and combined total error with success thresholds."""

from dataclasses import dataclass, field

import numpy as np

from .core import PointCloud, RigidTransform


@dataclass
class EvalReport:
    rmse: float | None
    angular_deg: float
    translation_err: float
    total_err: float
    success_at: dict = field(default_factory=dict)

    def as_record(self):
        rec = {}
        if self.rmse is not None:
            rec["rmse"] = self.rmse
        rec["angular_deg"] = self.angular_deg
        rec["translation_err"] = self.translation_err
        rec["total_err"] = self.total_err
        for (phi, trans), ok in self.success_at.items():
            rec[f"success_phi{phi:g}_t{trans:g}"] = int(ok)
        return rec


def rmse(y: PointCloud, transform_est: RigidTransform, transform_gt: RigidTransform):
    """Root mean squared distance between ground-truth-transformed and
    estimated-transformed template points."""
    diff = transform_gt.apply(y.points) - transform_est.apply(y.points)
    return float(np.sqrt((diff**2).sum(axis=1).mean()))


def angular_deviation(r_gt, r_est):
    """Chordal angular deviation in degrees, arccos argument clamped."""
    r_gt = np.asarray(r_gt, dtype=np.float64)
    r_est = np.asarray(r_est, dtype=np.float64)
    d = r_gt.shape[0]
    tr = float(np.trace(r_gt.T @ r_est))
    if d == 3:
        arg = 0.5 * (tr - 1.0)
    else:
        arg = 0.5 * tr
    arg = min(1.0, max(-1.0, arg))
    return float(np.degrees(np.arccos(arg)))


# success thresholds: (angular degrees, translation length), strict less-than
DEFAULT_SUCCESS_THRESHOLDS = ((5.0, 0.2),)


def total_error(r_gt, t_gt, r_est, t_est, y: PointCloud | None = None,
                thresholds=DEFAULT_SUCCESS_THRESHOLDS):
    """Full evaluation report; total error adds degrees and length verbatim."""
    phi = angular_deviation(r_gt, r_est)
    dt = float(np.linalg.norm(np.asarray(t_gt, dtype=np.float64) - np.asarray(t_est, dtype=np.float64)))
    report = EvalReport(
        rmse=None,
        angular_deg=phi,
        translation_err=dt,
        total_err=phi + dt,
        success_at={(p, t): bool(phi < p and dt < t) for p, t in thresholds},
    )
    if y is not None:
        report.rmse = rmse(y, RigidTransform(np.asarray(r_est), np.asarray(t_est)),
                           RigidTransform(np.asarray(r_gt), np.asarray(t_gt)))
    return report

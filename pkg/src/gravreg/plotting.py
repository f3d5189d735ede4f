"""Optional figure rendering for the CLI report paths. Figures are written to
files; nothing is ever displayed."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_gpe_trace(trace, path):
    """Per-iteration gravitational potential energy curve."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.arange(1, len(trace) + 1), trace, marker=".", lw=1)
    ax.set_xlabel("iteration")
    ax.set_ylabel("potential energy")
    ax.set_title("Potential energy per iteration")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_benchmark(rmses, successes, path):
    """Per-trial RMSE bars, colored by success."""
    rmses = np.asarray(rmses, dtype=np.float64)
    colors = ["tab:green" if s else "tab:red" for s in successes]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(np.arange(len(rmses)), rmses, color=colors)
    ax.set_xlabel("trial")
    ax.set_ylabel("RMSE")
    ax.set_title("Benchmark trials (green = success)")
    if np.all(rmses > 0):
        ax.set_yscale("log")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_trajectory(poses, path, gt_poses=None):
    """Top-down (first two axes) plot of composed odometry positions."""
    pts = np.array([p.translation for p in poses])
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(pts[:, 0], pts[:, 1], marker="o", label="estimated")
    if gt_poses is not None:
        gt = np.array([p.translation for p in gt_poses])
        ax.plot(gt[:, 0], gt[:, 1], marker="x", ls="--", label="ground truth")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend()
    ax.set_title("Composed trajectory")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

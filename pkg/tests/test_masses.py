"""Per-point mass fields: RBF anchors, lattice density measure, products."""

import numpy as np
import pytest

from gravreg import (
    InvalidParam,
    LandmarkSet,
    LengthMismatch,
    NonFiniteWeight,
    NormalizationContext,
    PointCloud,
    SingularCollocation,
    external_masses,
    niv_masses,
    rbf_masses,
    spm,
)
from gravreg.masses import MASS_FLOOR
from gravreg.synth import axis_angle, rng_from_seed

CTX = NormalizationContext(
    mean_x=np.zeros(3), mean_y=np.zeros(3), l=-5.0, r=5.0, a=-5.0, b=5.0
)


def test_rbf_no_anchors_is_uniform_one():
    cloud = PointCloud(rng_from_seed(0).normal(size=(10, 3)))
    assert np.array_equal(rbf_masses(cloud, [], 0.03), np.ones(10))


def test_rbf_anchor_evaluates_to_one_at_itself():
    cloud = PointCloud(np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]))
    values = rbf_masses(cloud, [0], 0.03)
    assert abs(values[0] - 1.0) < 1e-12


def test_rbf_single_anchor_kernel_value():
    # one anchor: the field at distance sigma is exp(-1)
    sigma = 0.03
    cloud = PointCloud(np.array([[0.0, 0.0, 0.0], [sigma, 0.0, 0.0]]))
    values = rbf_masses(cloud, [0], sigma)
    assert abs(values[1] - np.exp(-1.0)) < 1e-12


def test_rbf_far_points_floored():
    cloud = PointCloud(np.array([[0.0, 0.0, 0.0], [100.0, 0.0, 0.0]]))
    values = rbf_masses(cloud, [0], 0.03)
    assert values[1] == MASS_FLOOR


def test_rbf_rigid_invariance():
    rng = rng_from_seed(1)
    pts = rng.uniform(-5, 5, size=(60, 3))
    anchors = [3, 17, 40]
    base = rbf_masses(PointCloud(pts), anchors, 2.0)
    rot = axis_angle(rng.normal(size=3), 1.3)
    moved = rbf_masses(PointCloud(pts @ rot.T + np.array([1.0, -2.0, 0.5])), anchors, 2.0)
    assert np.max(np.abs(base - moved)) < 1e-9


def test_rbf_duplicate_anchors_singular():
    pts = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    with pytest.raises(SingularCollocation):
        rbf_masses(PointCloud(pts), [0, 1], 0.03)


def test_rbf_rejects_bad_sigma():
    with pytest.raises(InvalidParam):
        rbf_masses(PointCloud(np.zeros((1, 3))), [0], 0.0)


def test_niv_two_cell_count_ratio():
    # 10 points in one lattice cell, 1 in another: values scale as 1/count
    rho, depth = 16, 20
    edge = 10.0 / rho
    crowded = np.tile(np.array([[-5 + 0.3 * edge, -5 + 0.3 * edge, -5 + 0.3 * edge]]), (10, 1))
    crowded = crowded + np.linspace(0, 0.1 * edge, 10)[:, None]
    lone = np.array([[-5 + 5.5 * edge, -5 + 0.3 * edge, -5 + 0.3 * edge]])
    cloud = PointCloud(np.vstack([crowded, lone]))
    values = niv_masses(cloud, rho, CTX, depth)
    assert np.allclose(values[:10], values[0])
    assert abs(values[0] / values[10] - 0.1) < 1e-12


def test_niv_single_cell_closed_form():
    rho, depth = 16, 20
    edge = 10.0 / rho
    cell_vol = edge**3
    r_ball = 10.0 / (2 * depth * rho)
    ball_vol = 4.0 / 3.0 * np.pi * r_ball**3
    n = 4
    pts = np.full((n, 3), -5 + 0.2 * edge) + np.linspace(0, 0.1 * edge, n)[:, None]
    values = niv_masses(PointCloud(pts), rho, CTX, depth)
    expected = cell_vol * cell_vol / (n * ball_vol)
    assert np.allclose(values, expected, rtol=1e-12)


def test_niv_uniform_lattice_equal_values():
    rho = 4
    edge = 10.0 / rho
    centers = -5 + (np.arange(rho) + 0.5) * edge
    grid = np.stack(np.meshgrid(centers, centers, centers, indexing="ij"), axis=-1)
    pts = grid.reshape(-1, 3)
    values = niv_masses(PointCloud(pts), rho, CTX, 20)
    assert np.allclose(values, values[0])


def test_niv_uniform_cube_low_variation_interior():
    rng = rng_from_seed(2)
    rho = 4
    pts = rng.uniform(-5, 5, size=(200000, 3))
    values = niv_masses(PointCloud(pts), rho, CTX, 20)
    edge = 10.0 / rho
    idx = np.clip(np.floor((pts + 5) / edge).astype(int), 0, rho - 1)
    interior = np.all((idx >= 1) & (idx <= rho - 2), axis=1)
    v = values[interior]
    assert v.std() / v.mean() < 0.05


def test_niv_denser_cells_get_smaller_values():
    rng = rng_from_seed(3)
    sparse = rng.uniform(-5, -2, size=(20, 3))
    dense = rng.uniform(2, 2.2, size=(200, 3))
    values = niv_masses(PointCloud(np.vstack([sparse, dense])), 16, CTX, 20)
    assert values[:20].mean() > values[20:].mean()


def test_niv_rejects_bad_rho():
    with pytest.raises(InvalidParam):
        niv_masses(PointCloud(np.zeros((1, 3))), 1, CTX, 20)


def test_spm_identities_and_commutativity():
    n = np.array([2.0, 3.0])
    b = np.array([0.5, 2.0])
    assert np.array_equal(spm(n, b), np.array([1.0, 6.0]))
    assert np.array_equal(spm(n, np.ones(2)), n)
    assert np.array_equal(spm(n, b), spm(b, n))


def test_spm_length_mismatch():
    with pytest.raises(LengthMismatch):
        spm(np.ones(2), np.ones(3))


def test_external_masses_floor_and_errors():
    cloud = PointCloud(np.zeros((3, 3)) + np.arange(3)[:, None])
    out = external_masses(cloud, [1.0, 0.0, 2.0])
    assert out[1] == MASS_FLOOR and out[0] == 1.0 and out[2] == 2.0
    with pytest.raises(LengthMismatch):
        external_masses(cloud, [1.0, 2.0])
    with pytest.raises(NonFiniteWeight):
        external_masses(cloud, [1.0, np.nan, 2.0])


def test_landmark_set_validation():
    lm = LandmarkSet(((0, 5), (2, 7)))
    assert len(lm) == 2
    assert lm.template_indices() == [0, 2]
    assert lm.reference_indices() == [5, 7]
    with pytest.raises(InvalidParam):
        LandmarkSet(((0, 1), (0, 2)))
    with pytest.raises(InvalidParam):
        LandmarkSet(((-1, 1),))
    with pytest.raises(InvalidParam):
        lm.check_bounds(n_template=2, n_reference=10)
    lm.check_bounds(n_template=3, n_reference=8)

import numpy as np
import pytest
from scipy import stats

from geometry import ProjectionSet, project, sample_sphere
from utils.exceptions import InvalidArgumentError


def test_one_dimensional_directions_are_signs():
    directions = sample_sphere(1, 4, seed=11).directions
    assert directions.shape == (1, 4)
    np.testing.assert_allclose(np.abs(directions), 1.0, atol=1e-12)


def test_directions_have_unit_norm():
    directions = sample_sphere(3, 1000, seed=5).directions
    np.testing.assert_allclose(np.linalg.norm(directions, axis=0), 1.0, atol=1e-9)


def test_planar_angles_are_uniform():
    directions = sample_sphere(2, 100_000, seed=1).directions
    angles = np.mod(np.arctan2(directions[1], directions[0]), 2 * np.pi)
    assert stats.kstest(angles, "uniform", args=(0.0, 2 * np.pi)).pvalue > 0.01


def test_sampling_is_reproducible():
    a = sample_sphere(5, 20, seed=42)
    b = sample_sphere(5, 20, seed=42)
    c = sample_sphere(5, 20, seed=43)
    assert np.array_equal(a.directions, b.directions)
    assert not np.array_equal(a.directions, c.directions)


@pytest.mark.parametrize("d, n_theta", [(0, 3), (3, 0)])
def test_sampling_rejects_empty_shapes(d, n_theta):
    with pytest.raises(InvalidArgumentError):
        sample_sphere(d, n_theta, seed=0)


def test_projection_of_identity_is_identity():
    directions = ProjectionSet(np.eye(2))
    np.testing.assert_array_equal(project(np.eye(2), directions), np.eye(2))


def test_projection_set_rejects_non_unit_columns():
    with pytest.raises(InvalidArgumentError):
        ProjectionSet(np.array([[2.0, 0.0], [0.0, 1.0]]))


def test_projection_matches_double_loop(rng):
    points = rng.standard_normal((5, 3))
    directions = sample_sphere(3, 7, seed=9)
    expected = np.zeros((5, 7))
    for i in range(5):
        for j in range(7):
            expected[i, j] = sum(points[i, k] * directions.directions[k, j] for k in range(3))
    result = project(points, directions)
    np.testing.assert_allclose(result, expected, atol=1e-12)
    assert result.flags.f_contiguous


def test_projection_is_linear_and_bounded(rng):
    x = rng.standard_normal((50, 4))
    y = rng.standard_normal((50, 4))
    directions = sample_sphere(4, 30, seed=2)
    combined = project(2.5 * x - 1.5 * y, directions)
    np.testing.assert_allclose(combined, 2.5 * project(x, directions) - 1.5 * project(y, directions), atol=1e-10)
    assert np.all(np.abs(project(x, directions)) <= np.linalg.norm(x, axis=1)[:, None] + 1e-12)


def test_projection_rejects_dimension_mismatch():
    with pytest.raises(InvalidArgumentError):
        project(np.zeros((4, 3)), sample_sphere(2, 5, seed=0))


def test_subset_keeps_requested_columns():
    directions = sample_sphere(3, 10, seed=4)
    subset = directions.subset([7, 2])
    assert subset.n_theta == 2
    np.testing.assert_array_equal(subset.directions[:, 0], directions.directions[:, 7])

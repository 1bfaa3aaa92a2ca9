import numpy as np
import pytest

from cweno1d.grid import (
    Grid1D,
    fill_ghost,
    ghost_centers,
    ghost_sizes,
    make_random_nonuniform,
    make_uniform,
)


def test_make_uniform_basic():
    g = make_uniform(-1.0, 1.0, 4, "periodic")
    assert np.array_equal(g.edges, [-1.0, -0.5, 0.0, 0.5, 1.0])
    assert np.allclose(g.sizes, 0.5)
    assert g.n_cells == 4
    assert g.uniform


def test_make_uniform_single_cell():
    g = make_uniform(0.0, 1.0, 1, "outflow")
    assert g.n_cells == 1
    assert g.centers[0] == 0.5


def test_make_uniform_sixteen():
    g = make_uniform(0.0, 1.0, 16)
    assert np.allclose(g.sizes, 0.0625)
    assert np.allclose(g.centers, 0.03125 + np.arange(16) * 0.0625)


def test_make_uniform_invalid():
    with pytest.raises(ValueError):
        make_uniform(0.0, 1.0, 0)
    with pytest.raises(ValueError):
        make_uniform(1.0, 0.0, 4)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, np.array([0.0, 0.5, 0.4, 1.0]))
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, np.array([0.1, 0.5, 1.0]))
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, np.array([0.0, 1.0]), bc="nonsense")


def test_random_grid_deterministic():
    g1 = make_random_nonuniform(0.0, 1.0, 64, seed=7, ratio_max=2.0)
    g2 = make_random_nonuniform(0.0, 1.0, 64, seed=7, ratio_max=2.0)
    assert np.array_equal(g1.edges, g2.edges)
    g3 = make_random_nonuniform(0.0, 1.0, 64, seed=8, ratio_max=2.0)
    assert not np.array_equal(g1.edges, g3.edges)


def test_random_grid_ratio_bound():
    for seed in range(20):
        g = make_random_nonuniform(0.0, 1.0, 64, seed=seed, ratio_max=2.0)
        assert g.sizes.max() / g.sizes.min() <= 2.0
        assert abs(g.sizes.sum() - 1.0) <= 8 * np.finfo(float).eps * 64


def test_random_grid_ratio_one_is_uniform():
    g = make_random_nonuniform(0.0, 1.0, 32, seed=3, ratio_max=1.0)
    u = make_uniform(0.0, 1.0, 32)
    assert np.array_equal(g.edges, u.edges)
    assert g.uniform


def test_random_grid_invalid_ratio():
    with pytest.raises(ValueError):
        make_random_nonuniform(0.0, 1.0, 16, seed=0, ratio_max=0.5)


def test_fill_ghost_periodic_wrap():
    g = make_uniform(0.0, 1.0, 5, "periodic")
    u = np.arange(5.0)
    ext = fill_ghost(g, u, 2)
    assert np.array_equal(ext, [3, 4, 0, 1, 2, 3, 4, 0, 1])


def test_fill_ghost_periodic_wide():
    # width larger than N keeps tiling
    g = make_uniform(0.0, 1.0, 2, "periodic")
    ext = fill_ghost(g, np.array([5.0, 6.0]), 3)
    assert np.array_equal(ext, [6, 5, 6, 5, 6, 5, 6, 5])


def test_fill_ghost_outflow_copies():
    g = make_uniform(0.0, 1.0, 4, "outflow")
    ext = fill_ghost(g, np.array([1.0, 2.0, 3.0, 4.0]), 2)
    assert np.array_equal(ext, [1, 1, 1, 2, 3, 4, 4, 4])


def test_fill_ghost_reflective_mirror_and_sign():
    g = make_uniform(0.0, 1.0, 3, "reflective")
    u = np.array([[1.0, 10.0], [2.0, 20.0], [3.0, 30.0]])
    ext = fill_ghost(g, u, 2, odd_mask=np.array([False, True]))
    assert np.array_equal(ext[:, 0], [2, 1, 1, 2, 3, 3, 2])
    assert np.array_equal(ext[:, 1], [-20, -10, 10, 20, 30, -30, -20])


def test_fill_ghost_translation_equivariance():
    g = make_uniform(0.0, 1.0, 8, "periodic")
    rng = np.random.default_rng(0)
    u = rng.normal(size=8)
    k = 3
    ext = fill_ghost(g, u, 2)
    ext_rolled = fill_ghost(g, np.roll(u, k), 2)
    assert np.array_equal(np.roll(ext[2:-2], k), ext_rolled[2:-2])
    # ghost region shifts identically
    assert np.array_equal(ext_rolled, fill_ghost(g, np.roll(u, k), 2))


def test_ghost_sizes_and_centers_periodic():
    g = make_random_nonuniform(0.0, 1.0, 10, seed=1, ratio_max=1.8)
    h = ghost_sizes(g, 3)
    assert np.array_equal(h[:3], g.sizes[-3:])
    assert np.array_equal(h[3:-3], g.sizes)
    c = ghost_centers(g, 3)
    assert np.allclose(c[:3], g.centers[-3:] - 1.0)
    assert np.allclose(c[3:-3], g.centers)
    assert np.allclose(c[-3:], g.centers[:3] + 1.0)


def test_sizes_sum_matches_domain():
    for N in (17, 129):
        g = make_random_nonuniform(-2.0, 3.0, N, seed=5, ratio_max=3.0)
        assert abs(g.sizes.sum() - 5.0) <= 8 * np.finfo(float).eps * N

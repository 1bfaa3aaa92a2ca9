from fractions import Fraction

import numpy as np
import numpy.polynomial.polynomial as npp
import pytest

from cweno1d.cweno import (CwenoConfig, cweno3_disc_ratio,
                           cweno3_disc_ratio_closed_form, cweno_reconstruct,
                           linear_coefficients, reconstruct_windows,
                           weno_optimal_weights, weno_reconstruct_point,
                           window_gamma_tensors)

X0 = 0.3


def sin_averages(g, h, x0=X0):
    lo = x0 + (np.arange(-g, g + 1) - 0.5) * h
    return (np.cos(lo) - np.cos(lo + h)) / h


def poly_averages(coef, centers, h):
    anti = npp.polyint(coef)
    lo = np.asarray(centers) - h / 2
    return (npp.polyval(lo + h, anti) - npp.polyval(lo, anti)) / h


def test_linear_coefficients_frozen_values():
    assert linear_coefficients(2, 0.75) == [0.75, 0.0625, 0.125, 0.0625]
    assert linear_coefficients(1, 0.5) == [0.5, 0.25, 0.25]
    d = linear_coefficients(3, 0.4)
    assert d == pytest.approx([0.4, 0.1, 0.2, 0.2, 0.1], rel=1e-15)
    d = linear_coefficients(4, 0.75)
    assert d == pytest.approx(
        [0.75] + [0.25 * t / 9 for t in (1, 2, 3, 2, 1)], rel=1e-15)
    for g in (1, 2, 3, 4):
        for d0 in (0.1, 0.5, 0.9):
            assert sum(linear_coefficients(g, d0)) == pytest.approx(1.0,
                                                                    abs=1e-15)


def test_linear_coefficients_rejects_bad_arguments():
    for d0 in (0.0, 1.0, -0.3, 1.7):
        with pytest.raises(ValueError):
            linear_coefficients(2, d0)
    with pytest.raises(ValueError):
        linear_coefficients(5, 0.5)


def test_config_validation():
    cfg = CwenoConfig(g=2)
    assert cfg.order == 5
    assert cfg.d == (0.75, 0.0625, 0.125, 0.0625)
    assert cfg.eps(0.5) == 0.25
    assert CwenoConfig(g=1, eps_power=0, eps_hat=3.0).eps(0.01) == 3.0
    explicit = CwenoConfig(g=1, d0=0.2, d=(0.5, 0.25, 0.25))
    assert explicit.d0 == 0.5  # explicit vector wins
    with pytest.raises(ValueError):
        CwenoConfig(g=5)
    with pytest.raises(ValueError):
        CwenoConfig(g=1, d0=1.0)
    with pytest.raises(ValueError):
        CwenoConfig(g=1, eps_hat=0.0)
    with pytest.raises(ValueError):
        CwenoConfig(g=1, eps_power=3)
    with pytest.raises(ValueError):
        CwenoConfig(g=1, t_exp=1)
    with pytest.raises(ValueError):
        CwenoConfig(g=1, d=(0.5, 0.25))
    with pytest.raises(ValueError):
        CwenoConfig(g=1, d=(0.5, 0.3, 0.3))
    with pytest.raises(ValueError):
        CwenoConfig(g=2, d=(0.5, 0.5, 0.0, 0.0))


def test_reconstruct_rejects_bad_stencils():
    cfg = CwenoConfig(g=2)
    with pytest.raises(ValueError):
        cweno_reconstruct(np.zeros(4), 1.0, cfg)
    with pytest.raises(ValueError):
        cweno_reconstruct(np.zeros(5), np.ones(4), cfg)


def test_polynomial_data_reproduced_exactly():
    """Degree <= g data makes every candidate the same polynomial."""
    rng = np.random.default_rng(11)
    for g in (1, 2, 3, 4):
        cfg = CwenoConfig(g=g)
        coef = rng.standard_normal(g + 1)
        h = 0.25
        centers = np.arange(-g, g + 1) * h
        avgs = poly_averages(coef, centers, h)
        res = cweno_reconstruct(avgs, h, cfg)
        x = np.linspace(-h / 2, h / 2, 9)
        assert np.allclose(res.p_rec.eval(x), npp.polyval(x, coef),
                           atol=1e-12)
        for p in res.candidates[1:]:
            assert np.allclose(p.eval(x), npp.polyval(x, coef), atol=1e-12)


def test_reconstruction_conserves_the_central_average():
    rng = np.random.default_rng(12)
    for g in (1, 2, 3, 4):
        cfg = CwenoConfig(g=g)
        u = rng.standard_normal(2 * g + 1)
        res = cweno_reconstruct(u, 0.125, cfg)
        ref = abs(u[g])
        assert abs(res.p_rec.cell_average(-0.0625, 0.0625) - u[g]) \
            <= 1e-13 * max(1.0, ref)
        # the central polynomial inherits the average as well
        assert abs(res.candidates[0].cell_average(-0.0625, 0.0625) - u[g]) \
            <= 1e-12 * max(1.0, ref)


def test_conservation_on_nonuniform_stencils():
    rng = np.random.default_rng(13)
    for g in (1, 2, 3):
        cfg = CwenoConfig(g=g)
        sizes = rng.uniform(0.05, 0.15, 2 * g + 1)
        u = rng.standard_normal(2 * g + 1)
        h = sizes[g]
        res = cweno_reconstruct(u, sizes, cfg, center=0.7)
        got = res.p_rec.cell_average(0.7 - h / 2, 0.7 + h / 2)
        assert got == pytest.approx(u[g], rel=1e-12, abs=1e-13)


def test_weights_sum_to_one_and_are_nonnegative():
    rng = np.random.default_rng(14)
    for g in (1, 2, 3, 4):
        cfg = CwenoConfig(g=g)
        for _ in range(25):
            u = rng.standard_normal(2 * g + 1) * 10.0 ** rng.integers(-3, 4)
            res = cweno_reconstruct(u, 2.0 ** rng.integers(-9, 0), cfg)
            assert abs(res.omegas.sum() - 1.0) <= 1e-14
            assert np.all(res.omegas >= 0.0)


def test_optimal_combination_recovers_p_opt():
    # d0*P_0 + sum d_k P_k telescopes back to the optimal polynomial
    rng = np.random.default_rng(15)
    for g in (1, 2, 3, 4):
        cfg = CwenoConfig(g=g, d0=0.6)
        u = rng.standard_normal(2 * g + 1)
        res = cweno_reconstruct(u, 1.0, cfg)
        acc = res.candidates[0].coeffs * cfg.d[0]
        for dk, p in zip(cfg.d[1:], res.candidates[1:]):
            acc[: g + 1] += dk * p.coeffs
        assert np.allclose(acc, res.p_opt.coeffs, rtol=0,
                           atol=1e-13 * max(1.0, np.abs(u).max()))


def test_selection_is_scale_equivariant():
    """Doubling the data multiplies indicators by four and, with eps = 0,
    leaves the weights bit-for-bit unchanged."""
    rng = np.random.default_rng(16)
    for g in (1, 2, 3, 4):
        cfg = CwenoConfig(g=g)
        u = rng.standard_normal(2 * g + 1)
        r1 = cweno_reconstruct(u, 0.125, cfg, eps=0.0)
        r2 = cweno_reconstruct(2.0 * u, 0.125, cfg, eps=0.0)
        assert np.array_equal(r2.indicators, 4.0 * r1.indicators)
        assert np.array_equal(r2.omegas, r1.omegas)


def test_stencils_crossing_a_jump_lose_their_weight():
    # jump at the outermost interface: the central polynomial and exactly one
    # candidate cross it, everything else sees constant data
    h = 2.0 ** -8
    for g in (1, 2, 3, 4):
        cfg = CwenoConfig(g=g)
        u = np.zeros(2 * g + 1)
        u[0] = 1.0
        res = cweno_reconstruct(u, h, cfg)
        assert res.omegas[0] + res.omegas[1] <= 1e-2
        res = cweno_reconstruct(u[::-1].copy(), h, cfg)
        assert res.omegas[0] + res.omegas[-1] <= 1e-2


@pytest.mark.parametrize("eps_power", [1, 2])
def test_weights_approach_linear_coefficients_at_the_expected_rate(eps_power):
    for g in (1, 2, 3, 4):
        cfg = CwenoConfig(g=g, eps_power=eps_power)
        d = np.asarray(cfg.d)
        hs, dev = [], []
        for k in range(4, 9):
            h = 2.0 ** -k
            res = cweno_reconstruct(sin_averages(g, h), h, cfg, center=X0)
            hs.append(h)
            dev.append(np.abs(res.omegas - d).max())
        slope = np.polyfit(np.log(hs), np.log(dev), 1)[0]
        target = g + 2 - eps_power
        assert abs(slope - target) <= 0.4, (g, eps_power, slope)


def test_force_linear_weights_bypasses_indicators():
    cfg = CwenoConfig(g=2, force_linear_weights=True)
    u = np.array([5.0, -1.0, 2.0, 40.0, 0.25])  # deliberately rough
    res = cweno_reconstruct(u, 0.5, cfg)
    assert np.array_equal(res.omegas, np.asarray(cfg.d))


def test_batch_kernel_matches_single_cell_uniform():
    rng = np.random.default_rng(17)
    for g in (1, 2, 3, 4):
        cfg = CwenoConfig(g=g, d0=0.6, eps_power=1)
        w = rng.standard_normal((7, 3, 2 * g + 1))
        coeffs, omegas, indicators = reconstruct_windows(w, cfg, h=0.25)
        for i in range(7):
            for m in range(3):
                res = cweno_reconstruct(w[i, m], 0.25, cfg)
                assert np.allclose(coeffs[i, m], res.p_rec.coeffs,
                                   rtol=0, atol=1e-13)
                assert np.allclose(omegas[i, m], res.omegas,
                                   rtol=1e-12, atol=1e-15)
                assert np.allclose(indicators[i, m], res.indicators,
                                   rtol=1e-12, atol=1e-15)


def test_batch_kernel_matches_single_cell_nonuniform():
    rng = np.random.default_rng(18)
    for g in (1, 2, 3):
        cfg = CwenoConfig(g=g)
        n = 2 * g + 1
        sizes = rng.uniform(0.05, 0.15, (5, n))
        w = rng.standard_normal((5, 2, n))
        gammas = window_gamma_tensors(sizes, g)
        coeffs, omegas, _ = reconstruct_windows(w, cfg, sizes=sizes,
                                                gammas=gammas)
        for i in range(5):
            for m in range(2):
                res = cweno_reconstruct(w[i, m], sizes[i], cfg)
                scaled = res.p_rec.coeffs * sizes[i, g] ** np.arange(n)
                assert np.allclose(coeffs[i, m], scaled, rtol=1e-9,
                                   atol=1e-13)
                assert np.allclose(omegas[i, m], res.omegas, rtol=1e-9,
                                   atol=1e-13)


def test_batch_kernel_validates_inputs():
    cfg = CwenoConfig(g=1)
    with pytest.raises(ValueError):
        reconstruct_windows(np.zeros((4, 2, 5)), cfg, h=1.0)
    with pytest.raises(ValueError):
        reconstruct_windows(np.zeros((4, 2, 3)), cfg)
    with pytest.raises(ValueError):
        reconstruct_windows(np.zeros((4, 2, 3)), cfg,
                            sizes=np.ones((3, 3)))


def test_weno_edge_weights_match_the_classical_tables():
    assert weno_optimal_weights(1, 0.5) == (Fraction(2, 3), Fraction(1, 3))
    assert weno_optimal_weights(1, -0.5) == (Fraction(1, 3), Fraction(2, 3))
    assert weno_optimal_weights(2, 0.5) == (Fraction(3, 10), Fraction(3, 5),
                                            Fraction(1, 10))
    assert weno_optimal_weights(3, 0.5) == (Fraction(4, 35), Fraction(18, 35),
                                            Fraction(12, 35), Fraction(1, 35))
    assert weno_optimal_weights(4, 0.5) == (
        Fraction(5, 126), Fraction(20, 63), Fraction(10, 21),
        Fraction(10, 63), Fraction(1, 126))
    for g in (1, 2, 3, 4):
        for side in (0.5, -0.5):
            w = weno_optimal_weights(g, side)
            assert sum(w) == 1
            assert all(x > 0 for x in w)
        left = weno_optimal_weights(g, -0.5)
        right = weno_optimal_weights(g, 0.5)
        assert left == right[::-1]


def test_weno_rejects_interior_points():
    for bad in (0.0, 0.25, 1.0):
        with pytest.raises(ValueError):
            weno_optimal_weights(2, bad)
    with pytest.raises(ValueError):
        weno_reconstruct_point(np.zeros(5), 0.0, 2, eps=1e-6)


def test_weno_reproduces_low_degree_polynomials():
    rng = np.random.default_rng(19)
    for g in (1, 2, 3, 4):
        coef = rng.standard_normal(g + 1)
        avgs = poly_averages(coef, np.arange(-g, g + 1, dtype=float), 1.0)
        for side in (-0.5, 0.5):
            v = weno_reconstruct_point(avgs, side, g, eps=1e-6)
            assert v == pytest.approx(npp.polyval(side, coef), rel=1e-12,
                                      abs=1e-12)


def test_weno_boundary_value_converges_at_full_order():
    ladders = {1: range(3, 9), 2: range(3, 8), 3: range(1, 6),
               4: range(1, 5)}
    for g, ks in ladders.items():
        errs, hs = [], []
        for k in ks:
            h = 2.0 ** -k
            v = weno_reconstruct_point(sin_averages(g, h), 0.5, g, eps=h * h)
            errs.append(abs(v - np.sin(X0 + 0.5 * h)))
            hs.append(h)
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        assert abs(slope - (2 * g + 1)) <= 0.3, (g, slope)


def test_weno_sides_with_a_far_jump_stay_one_sided():
    # jump in the last stencil cell; the left boundary only sees smooth
    # candidates, so the value sits within O(h^2) of their common value
    for g in (2, 3, 4):
        for k in (4, 6):
            h = 2.0 ** -k
            u = np.ones(2 * g + 1)
            u[-1] = 0.0
            v = weno_reconstruct_point(u, -0.5, g, eps=h * h)
            assert abs(v - 1.0) <= h * h


def test_step_ratio_matches_its_closed_form():
    for d0 in (0.25, 0.5, 0.75, 1.0):
        got = cweno3_disc_ratio(d0)
        want = cweno3_disc_ratio_closed_form(d0)
        assert abs(got - want) <= 1e-12
        # step on the other side of the cell gives the mirrored picture
        other = cweno3_disc_ratio(d0, averages=(1.0, 1.0, 0.0))
        assert abs(other - want) <= 1e-12
    assert cweno3_disc_ratio(1.0) == pytest.approx(13.0 / 16.0, abs=1e-14)
    with pytest.raises(ValueError):
        cweno3_disc_ratio(0.0)

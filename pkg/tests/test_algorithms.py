import math

import numpy as np
import pytest

from undergrad.algorithms import (
    CONSTANT,
    LINEAR,
    MP_BG,
    MP_LG_DETERMINISTIC,
    MP_LG_STOCHASTIC,
    checkpoint_iterations,
    dual_extrapolation_run,
    fixed_lr_accelerated_run,
    mirror_prox_run,
    undergrad_run,
    unixgrad_run,
)
from undergrad.analysis import h_radius, mp_bounds, rate_slope
from undergrad.errors import ConfigError, InvalidInputError
from undergrad.geometry import entropic_simplex
from undergrad.oracle import OracleHandle, derive_stream
from undergrad.problems import (
    ProblemInstance,
    make_linear_simplex,
    make_quadratic_simplex,
    make_quadratic_unbounded,
)


def fresh_oracle(prob, sigma=0.0, seed=0):
    return OracleHandle(prob.gradient, prob.regularizer, sigma=sigma, rng=derive_stream(seed, 0))


def toy_linear(c):
    c = np.asarray(c, dtype=float)
    star = np.zeros_like(c)
    star[np.argmin(c)] = 1.0
    return ProblemInstance(
        name="toy_linear",
        regularizer=entropic_simplex(c.size),
        objective=lambda x: float(c @ x),
        gradient=lambda x: c,
        G=float(np.max(np.abs(c))),
        L=0.0,
        f_min=float(np.min(c)),
        x_star=star,
    )


def zero_problem(d):
    reg = entropic_simplex(d)
    return ProblemInstance(
        name="zero",
        regularizer=reg,
        objective=lambda x: 0.0,
        gradient=lambda x: np.zeros(d),
        G=0.0,
        L=0.0,
        f_min=0.0,
        x_star=reg.prox_center.copy(),
    )


# ------------------------------------------------------------ adaptive loop


def test_first_learning_rate_equals_h_radius():
    prob = make_quadratic_simplex(10, seed=0)
    traj = undergrad_run(prob, fresh_oracle(prob), 5)
    reg = prob.regularizer
    H = h_radius(reg.K, reg.Omega, reg.Diam)
    assert abs(traj.eta[0] - H) <= 1e-12 * H


def test_constant_gradients_freeze_the_accumulator():
    prob = make_linear_simplex(7, seed=1)
    traj = undergrad_run(prob, fresh_oracle(prob), 60)
    delta_sq = prob.regularizer.K
    assert np.all(traj.S == delta_sq)
    assert np.max(np.abs(traj.eta - traj.eta[0])) == 0.0


def test_converges_to_best_vertex():
    prob = toy_linear([0.0, 1.0, 1.0])
    traj = undergrad_run(prob, fresh_oracle(prob), 200)
    assert traj.gap[199] < traj.gap[99]
    assert np.sum(np.abs(traj.x_out - prob.x_star)) <= 1e-2


def test_averaging_identity_rebuilds_exactly():
    prob = make_quadratic_simplex(6, seed=2)
    traj = undergrad_run(prob, fresh_oracle(prob), 40, keep_iterates=True)
    w = np.zeros(6)
    Gamma = 0.0
    for i in range(40):
        gamma = float(i + 1)
        Gamma += gamma
        assert np.array_equal((gamma * traj.iterates["x"][i] + w) / Gamma, traj.iterates["xbar"][i])
        assert np.array_equal(
            (gamma * traj.iterates["x_half"][i] + w) / Gamma, traj.iterates["xbar_half"][i]
        )
        w = w + gamma * traj.iterates["x_half"][i]
    assert np.array_equal(traj.x_out, traj.iterates["xbar_half"][-1])


def test_constant_weights_supported():
    prob = make_quadratic_simplex(5, seed=3)
    traj = undergrad_run(prob, fresh_oracle(prob), 50, weights=CONSTANT)
    assert traj.params["weights"] == "constant"
    assert traj.gap[-1] < traj.gap[0]


def test_determinism_and_seed_sensitivity():
    prob = make_linear_simplex(6, seed=4)
    a = undergrad_run(prob, fresh_oracle(prob, sigma=0.2, seed=11), 30)
    b = undergrad_run(prob, fresh_oracle(prob, sigma=0.2, seed=11), 30)
    c = undergrad_run(prob, fresh_oracle(prob, sigma=0.2, seed=12), 30)
    assert a.math_equal(b)
    assert not a.math_equal(c)


def test_math_equal_ignores_wall_clock():
    prob = make_linear_simplex(4, seed=5)
    a = undergrad_run(prob, fresh_oracle(prob), 10)
    b = undergrad_run(prob, fresh_oracle(prob), 10)
    b.wall_ns[:] = b.wall_ns + 12345
    assert a.math_equal(b)


def test_unbounded_domain_needs_explicit_theta():
    prob = make_quadratic_unbounded(4, seed=0)
    with pytest.raises(ConfigError, match="theta"):
        undergrad_run(prob, fresh_oracle(prob), 10)
    traj = undergrad_run(prob, fresh_oracle(prob), 10, theta=1.0, delta=1.0)
    assert np.all(np.isfinite(traj.eta))


def test_rejects_bad_horizon():
    prob = make_linear_simplex(4, seed=6)
    for T in (0, -3, 2.5):
        with pytest.raises(InvalidInputError):
            undergrad_run(prob, fresh_oracle(prob), T)


def test_gap_nonnegative_and_queries_counted():
    prob = make_quadratic_simplex(8, seed=7)
    traj = undergrad_run(prob, fresh_oracle(prob), 100)
    assert np.min(traj.gap) >= -1e-9
    assert np.array_equal(traj.queries, 2 * np.arange(1, 101))


def test_monotone_eta_and_accumulator():
    prob = make_quadratic_simplex(8, seed=8)
    traj = undergrad_run(prob, fresh_oracle(prob, sigma=0.1, seed=3), 200)
    assert np.all(np.diff(traj.S) >= 0.0)
    assert np.all(np.diff(traj.eta) <= 1e-15)


def test_oracle_noise_bounded_by_sigma():
    prob = make_linear_simplex(8, seed=2)
    sigma = 0.3
    traj = undergrad_run(prob, fresh_oracle(prob, sigma=sigma, seed=5), 50, keep_iterates=True)
    worst = 0.0
    for xb, g in zip(traj.iterates["xbar"], traj.iterates["g"]):
        worst = max(worst, float(np.max(np.abs(g - prob.gradient(xb)))))
    assert worst <= sigma + 1e-12
    assert worst >= sigma - 1e-12  # coordinate noise sits on the sphere of radius sigma


# ------------------------------------------------------- fixed-rate variant


def test_fixed_rate_matches_adaptive_when_gradients_are_constant():
    prob = make_linear_simplex(9, seed=9)
    adaptive = undergrad_run(prob, fresh_oracle(prob), 80)
    eta = adaptive.eta[0]
    fixed = fixed_lr_accelerated_run(prob, fresh_oracle(prob), 80, eta=eta)
    assert fixed.algorithm == "aeg"
    assert np.array_equal(fixed.gap, adaptive.gap, equal_nan=True)
    assert np.array_equal(fixed.f_value, adaptive.f_value, equal_nan=True)
    assert np.array_equal(fixed.x_out, adaptive.x_out)
    assert np.all(fixed.S == 0.0)


def test_fixed_rate_fast_on_smooth_problem():
    prob = make_quadratic_simplex(10, seed=0)
    eta = prob.regularizer.K / (2.0 * prob.L)
    traj = fixed_lr_accelerated_run(prob, fresh_oracle(prob), 500, eta=eta)
    fit = rate_slope(traj, window=(10, 500))
    assert fit.slope <= -1.9
    assert traj.gap[-1] <= 1e-8


def test_fixed_rate_rejects_bad_eta():
    prob = make_linear_simplex(4, seed=1)
    for eta in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(InvalidInputError):
            fixed_lr_accelerated_run(prob, fresh_oracle(prob), 10, eta=eta)


# ----------------------------------------------------------------- unixgrad


def test_unixgrad_step_schedule_on_constant_gradients():
    prob = make_linear_simplex(5, seed=4)
    traj = unixgrad_run(prob, fresh_oracle(prob), 20, step_scale=0.7)
    # constant gradients never grow the accumulator, so alpha_t = scale * t
    assert np.allclose(traj.eta, 0.7 * np.arange(1, 21), rtol=1e-15)
    assert np.all(traj.S == 1.0)
    flat = unixgrad_run(prob, fresh_oracle(prob), 20, step_scale=0.7, weights=CONSTANT)
    assert np.allclose(flat.eta, 0.7, rtol=1e-15)


def test_unixgrad_first_step_is_step_scale():
    prob = make_quadratic_simplex(6, seed=5)
    traj = unixgrad_run(prob, fresh_oracle(prob), 10, step_scale=1.3)
    assert traj.eta[0] == 1.3
    assert np.all(np.diff(traj.S) >= 0.0)


def test_unixgrad_converges_on_linear():
    prob = make_linear_simplex(10, seed=3)
    reg = prob.regularizer
    traj = unixgrad_run(prob, fresh_oracle(prob), 2000, step_scale=h_radius(reg.K, reg.Omega, reg.Diam))
    assert traj.gap[-1] <= 1e-2
    assert traj.gap[-1] >= -1e-9


def test_unixgrad_rejects_bad_step_scale():
    prob = make_linear_simplex(4, seed=2)
    for s in (0.0, -2.0, math.inf):
        with pytest.raises(InvalidInputError):
            unixgrad_run(prob, fresh_oracle(prob), 10, step_scale=s)


# -------------------------------------------------------------- mirror prox


def test_mirror_prox_lg_deterministic_step():
    prob = make_quadratic_simplex(6, seed=6)
    traj = mirror_prox_run(prob, fresh_oracle(prob), 30, step_mode=MP_LG_DETERMINISTIC, L=2.0)
    assert traj.params["alpha"] == 0.5
    assert np.all(traj.eta == 0.5)


def test_mirror_prox_zero_objective_stays_at_center():
    prob = zero_problem(5)
    traj = mirror_prox_run(prob, fresh_oracle(prob), 25, step_mode=MP_LG_DETERMINISTIC, L=1.0)
    assert np.allclose(traj.x_out, prob.regularizer.prox_center, atol=1e-14)
    assert np.all(traj.gap == 0.0)


def test_mirror_prox_bg_respects_big_o_bound():
    prob = make_linear_simplex(10, seed=1)
    reg = prob.regularizer
    traj = mirror_prox_run(prob, fresh_oracle(prob), 10_000, step_mode=MP_BG)
    bound = mp_bounds(reg.K, reg.Omega, 10_000, G=prob.G, constant=2.0)["bg"]
    assert 0.0 <= traj.gap[-1] <= bound


def test_mirror_prox_mode_validation():
    lin = make_linear_simplex(5, seed=0)
    unb = make_quadratic_unbounded(4, seed=0)
    with pytest.raises(ConfigError):
        mirror_prox_run(lin, fresh_oracle(lin), 10, step_mode="warp")
    with pytest.raises(ConfigError):
        mirror_prox_run(unb, fresh_oracle(unb), 10, step_mode=MP_BG)  # G infinite
    with pytest.raises(ConfigError):
        mirror_prox_run(lin, fresh_oracle(lin), 10, step_mode=MP_LG_DETERMINISTIC)  # L = 0
    with pytest.raises(ConfigError):
        mirror_prox_run(lin, fresh_oracle(lin), 10, step_mode=MP_LG_STOCHASTIC)  # sigma = 0
    with pytest.raises(InvalidInputError):
        mirror_prox_run(lin, fresh_oracle(lin), 10, constant=-1.0)


def test_mirror_prox_lg_stochastic_runs():
    prob = make_quadratic_simplex(5, seed=9)
    traj = mirror_prox_run(
        prob, fresh_oracle(prob, sigma=0.2, seed=7), 100, step_mode=MP_LG_STOCHASTIC
    )
    assert traj.params["alpha"] == 1.0 / (0.2 * math.sqrt(100))
    assert np.all(np.isfinite(traj.eta))


# ------------------------------------------------------- dual extrapolation


def test_dual_extrapolation_starts_at_center():
    prob = make_quadratic_simplex(5, seed=1)
    traj = dual_extrapolation_run(prob, fresh_oracle(prob), 5, alpha=0.1, keep_iterates=True)
    assert np.allclose(traj.iterates["x"][0], prob.regularizer.prox_center, atol=1e-15)


def test_dual_extrapolation_zero_objective_stays_at_center():
    prob = zero_problem(4)
    traj = dual_extrapolation_run(prob, fresh_oracle(prob), 20, alpha=0.5)
    assert np.allclose(traj.x_out, prob.regularizer.prox_center, atol=1e-14)


def test_dual_extrapolation_monotone_tail():
    prob = make_quadratic_simplex(6, seed=3)
    traj = dual_extrapolation_run(prob, fresh_oracle(prob), 300, alpha=0.05)
    assert np.all(np.diff(traj.gap[10:]) <= 1e-12)
    assert traj.gap[-1] <= 0.05


def test_dual_extrapolation_rejects_bad_alpha():
    prob = make_linear_simplex(4, seed=0)
    for a in (0.0, -0.5, math.nan):
        with pytest.raises(InvalidInputError):
            dual_extrapolation_run(prob, fresh_oracle(prob), 10, alpha=a)


# ------------------------------------------------------------- checkpoints


def test_checkpoint_grid_dense_then_geometric():
    assert np.array_equal(checkpoint_iterations(50), np.arange(1, 51))
    grid = checkpoint_iterations(20_000)
    assert grid[0] == 1 and grid[-1] == 20_000
    assert np.all(np.diff(grid) >= 1)
    dense = grid[grid <= 10_000]
    assert np.array_equal(dense, np.arange(1, 10_001))
    tail = grid[grid >= 10_000].astype(float)
    assert np.all(tail[1:] <= np.ceil(tail[:-1] * 1.05))


def test_sparse_checkpoints_leave_nan_gaps():
    prob = toy_linear([0.0, 0.5, 1.0])
    T = 10_050
    traj = undergrad_run(prob, fresh_oracle(prob), T)
    grid = set(checkpoint_iterations(T).tolist())
    on = np.array([t in grid for t in range(1, T + 1)])
    assert np.all(np.isfinite(traj.gap[on]))
    assert np.all(np.isnan(traj.gap[~on]))
    assert np.all(np.isfinite(traj.eta))  # eta and S recorded everywhere

"""Worst-case bound evaluators, slope fits, and executable lemma checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algorithms import Trajectory
from .errors import InsufficientDataError, InvalidInputError
from .geometry import (
    Regularizer,
    fenchel_coupling,
    inner,
    mirror_map,
    range_of,
)

SLOPE_MIN_POINTS = 10


def h_radius(K: float, Omega: float, Diam: float) -> float:
    """sqrt(Omega + K Diam^2), the radius constant of the gap bounds."""
    if not (math.isfinite(K) and K > 0.0):
        raise InvalidInputError("K must be positive and finite")
    if not (math.isfinite(Omega) and Omega >= 0.0 and math.isfinite(Diam) and Diam >= 0.0):
        raise InvalidInputError("Omega and Diam must be finite and nonnegative")
    return math.sqrt(Omega + K * Diam * Diam)


def _check_rate_args(K: float, T: int, sigma: float) -> None:
    if not (math.isfinite(K) and K > 0.0):
        raise InvalidInputError("K must be positive and finite")
    if T < 1:
        raise InvalidInputError("T must be at least 1")
    if not (math.isfinite(sigma) and sigma >= 0.0):
        raise InvalidInputError("sigma must be finite and nonnegative")


def bg_bound(K: float, Omega: float, Diam: float, G: float, sigma: float, T: int) -> float:
    """Gap bound for bounded-gradient objectives under the adaptive method."""
    _check_rate_args(K, T, sigma)
    if not (math.isfinite(G) and G >= 0.0):
        raise InvalidInputError("G must be finite and nonnegative")
    H = h_radius(K, Omega, Diam)
    return 2.0 * H * math.sqrt((K + 8.0 * (G * G + sigma * sigma)) / (K * T))


def lg_bound(K: float, Omega: float, Diam: float, L: float, sigma: float, T: int) -> float:
    """Gap bound for smooth objectives under the adaptive method."""
    _check_rate_args(K, T, sigma)
    if not (math.isfinite(L) and L >= 0.0):
        raise InvalidInputError("L must be finite and nonnegative")
    H = h_radius(K, Omega, Diam)
    return 32.0 * math.sqrt(2.0) * H * H * L / (K * T * T) + 8.0 * math.sqrt(2.0) * H * sigma / math.sqrt(K * T)


def mp_bounds(
    K: float,
    Omega: float,
    T: int,
    G: float = math.inf,
    L: float = math.inf,
    sigma: float = 0.0,
    constant: float = 1.0,
) -> dict[str, float]:
    """Big-O mirror-prox bounds with an explicit absolute constant.

    The initial Bregman divergence is replaced by Omega, valid when the
    method starts at the prox-center. Keys: ``bg`` evaluates
    c sqrt((G^2 + sigma^2) Omega / (K T)); ``lg`` evaluates
    c (L Omega / (K T) + sigma sqrt(Omega / (K T))). An infinite G or L
    propagates to an infinite bound.
    """
    _check_rate_args(K, T, sigma)
    if not (math.isfinite(Omega) and Omega >= 0.0):
        raise InvalidInputError("Omega must be finite and nonnegative")
    if not (math.isfinite(constant) and constant > 0.0):
        raise InvalidInputError("constant must be positive and finite")
    bg = constant * math.sqrt((G * G + sigma * sigma) * Omega / (K * T))
    lg = constant * (L * Omega / (K * T) + sigma * math.sqrt(Omega / (K * T)))
    return {"bg": bg, "lg": lg}


def shape_factor(K: float, G: float, L: float, sigma: float) -> float:
    """Norm-invariant difficulty scale of a problem class."""
    if not (math.isfinite(K) and K > 0.0):
        raise InvalidInputError("K must be positive")
    if not math.isfinite(L):
        return math.sqrt((G * G + sigma * sigma) / K)
    if sigma == 0.0:
        return math.sqrt(L / K)
    return sigma / math.sqrt(K)


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    window: tuple[float, float]
    r_squared: float
    n_points: int


def fit_power_law(t: np.ndarray, gap: np.ndarray, window: tuple[float, float]) -> RateFit:
    """Least squares of log(gap) on log(t) over checkpoints with gap > 0."""
    t_min, t_max = window
    if not t_min < t_max:
        raise InvalidInputError("window must satisfy t_min < t_max")
    t = np.asarray(t, dtype=float)
    gap = np.asarray(gap, dtype=float)
    keep = (t >= t_min) & (t <= t_max) & np.isfinite(gap) & (gap > 0.0)
    if int(np.sum(keep)) < SLOPE_MIN_POINTS:
        raise InsufficientDataError(
            f"need at least {SLOPE_MIN_POINTS} positive-gap checkpoints in the window, got {int(np.sum(keep))}"
        )
    lt = np.log(t[keep])
    lg = np.log(gap[keep])
    slope, intercept = np.polyfit(lt, lg, 1)
    residual = lg - (slope * lt + intercept)
    ss_res = float(np.sum(residual**2))
    ss_tot = float(np.sum((lg - np.mean(lg)) ** 2))
    r_squared = 1.0 if ss_tot <= 1e-300 else max(0.0, 1.0 - ss_res / ss_tot)
    return RateFit(
        slope=float(slope),
        intercept=float(intercept),
        window=(float(t_min), float(t_max)),
        r_squared=r_squared,
        n_points=int(np.sum(keep)),
    )


def rate_slope(traj: Trajectory, window: tuple[float, float] | None = None) -> RateFit:
    """Power-law fit of a trajectory's gap; default window [T/100, T]."""
    if window is None:
        window = (max(1.0, traj.T / 100.0), float(traj.T))
    return fit_power_law(traj.t, traj.gap, window)


def check_sqrt_lemma(delta: float, seq: np.ndarray) -> tuple[bool, float, float]:
    """Two-sided comparison of the inverse-sqrt weighted sum.

    Returns (holds, lower margin, upper margin) for
    sqrt(delta^2 + sum a) <= delta + sum_t a_t / sqrt(delta^2 + sum_{s<=t} a_s)
    <= 2 sqrt(delta^2 + sum a), with 0-valued terms whenever the running
    denominator is still zero (possible only at delta = 0).
    """
    if not (math.isfinite(delta) and delta >= 0.0):
        raise InvalidInputError("delta must be finite and nonnegative")
    seq = np.asarray(seq, dtype=float)
    if seq.size and (np.any(~np.isfinite(seq)) or np.any(seq < 0.0)):
        raise InvalidInputError("sequence entries must be finite and nonnegative")
    partial = delta * delta + np.cumsum(seq)
    total = float(np.sum(seq))
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(partial > 0.0, seq / np.sqrt(partial), 0.0)
    mid = delta + float(np.sum(terms))
    low = math.sqrt(delta * delta + total)
    lower_margin = mid - low
    upper_margin = 2.0 * low - mid
    return (lower_margin >= -1e-12 and upper_margin >= -1e-12, lower_margin, upper_margin)


def check_three_point(reg: Regularizer, p: np.ndarray, y: np.ndarray, y_plus: np.ndarray) -> float:
    """Residual of the coupling decomposition F(p,y+) against its expansion."""
    q = mirror_map(reg, y)
    lhs = fenchel_coupling(reg, p, y_plus)
    rhs = fenchel_coupling(reg, p, y) + fenchel_coupling(reg, q, y_plus) + inner(y_plus - y, q - p)
    return abs(lhs - rhs)


def _trajectory_gammas(traj: Trajectory) -> np.ndarray:
    rule = traj.params.get("weights")
    if rule == "linear":
        return np.arange(1, traj.T + 1, dtype=float)
    if rule == "constant":
        return np.ones(traj.T)
    raise InvalidInputError(f"trajectory has no usable weight rule ({rule!r})")


def _require_iterates(traj: Trajectory, keys: tuple[str, ...]) -> None:
    missing = [k for k in keys if k not in traj.iterates]
    if missing:
        raise InvalidInputError(f"trajectory lacks stored iterates {missing}; rerun with keep_iterates")


def check_template_inequality(traj: Trajectory, reg: Regularizer, x_ref: np.ndarray) -> np.ndarray:
    """Per-checkpoint slack LHS - RHS of the weighted-regret template.

    Applies to deterministic runs of the adaptive method only; each slack
    should be at most 1e-8. The post-update point x_{t+1} = Q(eta_{t+1}
    y_{t+1}) is reconstructed from the stored gradients, using the exact
    range of the regularizer.
    """
    if traj.algorithm != "undergrad":
        raise InvalidInputError("template check applies to adaptive-method trajectories")
    if traj.params.get("sigma", 0.0) != 0.0:
        raise InvalidInputError("template check is restricted to deterministic runs")
    _require_iterates(traj, ("x", "x_half", "g", "g_half"))
    gammas = _trajectory_gammas(traj)
    theta = float(traj.params["theta"])
    K = reg.K
    omega = range_of(reg)
    x = traj.iterates["x"]
    x_half = traj.iterates["x_half"]
    g = traj.iterates["g"]
    g_half = traj.iterates["g_half"]

    slack = np.zeros(traj.T)
    lhs = 0.0
    drift = 0.0
    curvature = 0.0
    y_next = np.zeros_like(traj.x_out)
    for i in range(traj.T):
        gamma = gammas[i]
        y_next = y_next - gamma * g_half[i]
        if i + 1 < traj.T:
            S_next = traj.S[i + 1]
        else:
            dn = reg.norms.dual_norm(g_half[i] - g[i])
            S_next = traj.S[i] + gamma * gamma * dn * dn
        eta_next = theta / math.sqrt(S_next)
        x_next = mirror_map(reg, eta_next * y_next)

        lhs += gamma * inner(g_half[i], x_half[i] - x_ref)
        drift += gamma * inner(g_half[i] - g[i], x_half[i] - x_next)
        a = reg.norms.primal_norm(x_next - x_half[i])
        b = reg.norms.primal_norm(x_half[i] - x[i])
        curvature += (K / (2.0 * traj.eta[i])) * (a * a + b * b)
        slack[i] = lhs - (omega / eta_next + drift - curvature)
    return slack


def check_regret_conversion(traj: Trajectory, x_ref: np.ndarray, f_ref: float) -> float:
    """Slack of the averaged-gap bound by the weighted linearized regret.

    For a deterministic linear-weight run, f(out) - f_ref must not exceed
    (2/T^2) sum_t gamma_t <g_{t+1/2}, x_{t+1/2} - x_ref> by more than 1e-9;
    returns LHS - RHS.
    """
    if traj.params.get("sigma", 0.0) != 0.0:
        raise InvalidInputError("regret conversion check needs a deterministic run")
    if traj.params.get("weights") != "linear":
        raise InvalidInputError("regret conversion check needs linear weights")
    _require_iterates(traj, ("x_half", "g_half"))
    gammas = _trajectory_gammas(traj)
    regret = 0.0
    for i in range(traj.T):
        regret += gammas[i] * inner(traj.iterates["g_half"][i], traj.iterates["x_half"][i] - x_ref)
    lhs = float(traj.f_value[-1]) - f_ref
    return lhs - (2.0 / traj.T**2) * regret

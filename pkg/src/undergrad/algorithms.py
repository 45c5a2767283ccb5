"""Adaptive and baseline first-order methods with shared trajectory plumbing.

Five runners share the recording machinery:

* :func:`undergrad_run`: adaptive dual extrapolation with gradient-variation
  preconditioning and weighted averaging.
* :func:`fixed_lr_accelerated_run`: the same loop with the learning rate
  frozen (labelled ``aeg`` in outputs).
* :func:`unixgrad_run`: optimistic mirror prox with an adaptive step built
  from past gradient variation, queried at the averaged states.
* :func:`mirror_prox_run`: classical mirror prox with a constant,
  regime-tuned step.
* :func:`dual_extrapolation_run`: non-adaptive dual extrapolation.

Each run is strictly sequential; distinct runs are independent and can be
driven concurrently as long as every run owns its oracle.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ConfigError, InvalidInputError, NumericalFailureError
from .geometry import (
    EUCLIDEAN_SET,
    Regularizer,
    mirror_map,
    prox_map,
)
from .oracle import OracleHandle
from .problems import ProblemInstance

DENSE_CHECKPOINT_MAX = 10_000
CHECKPOINT_RATIO = 1.05

MP_BG = "bg"
MP_LG_DETERMINISTIC = "lg-deterministic"
MP_LG_STOCHASTIC = "lg-stochastic"
MP_MODES = (MP_BG, MP_LG_DETERMINISTIC, MP_LG_STOCHASTIC)


@dataclass(frozen=True)
class StepWeights:
    """Averaging weights gamma_t: t under ``linear``, 1 under ``constant``."""

    rule: str

    def __post_init__(self) -> None:
        if self.rule not in ("linear", "constant"):
            raise InvalidInputError(f"unknown weight rule {self.rule!r}")

    def value(self, t: int) -> float:
        return float(t) if self.rule == "linear" else 1.0


LINEAR = StepWeights("linear")
CONSTANT = StepWeights("constant")


def checkpoint_iterations(T: int) -> np.ndarray:
    """Iterations at which the objective is evaluated and rows are emitted.

    Dense up to 10^4, then geometrically spaced with ratio 1.05; the final
    iteration is always included.
    """
    if T <= DENSE_CHECKPOINT_MAX:
        return np.arange(1, T + 1, dtype=np.int64)
    ts = list(range(1, DENSE_CHECKPOINT_MAX + 1))
    t = DENSE_CHECKPOINT_MAX
    while t < T:
        t = min(max(int(math.ceil(t * CHECKPOINT_RATIO)), t + 1), T)
        ts.append(t)
    return np.asarray(ts, dtype=np.int64)


@dataclass(eq=False)
class Trajectory:
    """Per-iteration records of one run plus output point and metadata.

    ``eta`` is the step or learning rate used at iteration t and ``S`` the
    adaptive accumulator read at t (0 for methods without one). ``f_value``
    and ``gap`` are evaluated at the method's output candidate and are NaN
    off the checkpoint grid. ``wall_ns`` is cumulative wall-clock and is
    excluded from the determinism contract.
    """

    algorithm: str
    problem: str
    T: int
    params: dict[str, Any]
    t: np.ndarray
    f_value: np.ndarray
    gap: np.ndarray
    eta: np.ndarray
    S: np.ndarray
    queries: np.ndarray
    wall_ns: np.ndarray
    x_out: np.ndarray
    iterates: dict[str, np.ndarray] = field(default_factory=dict)

    def math_equal(self, other: "Trajectory") -> bool:
        """Equality of everything except wall-clock timing."""
        if (self.algorithm, self.problem, self.T) != (other.algorithm, other.problem, other.T):
            return False
        if self.params != other.params:
            return False
        if not (np.array_equal(self.t, other.t) and np.array_equal(self.queries, other.queries)):
            return False
        for a, b in (
            (self.f_value, other.f_value),
            (self.gap, other.gap),
            (self.eta, other.eta),
            (self.S, other.S),
            (self.x_out, other.x_out),
        ):
            if not np.array_equal(a, b, equal_nan=True):
                return False
        if set(self.iterates) != set(other.iterates):
            return False
        return all(np.array_equal(self.iterates[k], other.iterates[k]) for k in self.iterates)


class _Recorder:
    def __init__(self, problem: ProblemInstance, T: int, keep_iterates: bool) -> None:
        self.problem = problem
        self.T = T
        self.keep = keep_iterates
        self.is_checkpoint = np.zeros(T + 1, dtype=bool)
        self.is_checkpoint[checkpoint_iterations(T)] = True
        self.f_value = np.full(T, np.nan)
        self.gap = np.full(T, np.nan)
        self.eta = np.zeros(T)
        self.S = np.zeros(T)
        self.queries = np.zeros(T, dtype=np.int64)
        self.wall_ns = np.zeros(T, dtype=np.int64)
        self.iterates: dict[str, list[np.ndarray]] = {}
        self.x_out: np.ndarray | None = None
        self._start = time.perf_counter_ns()

    def record(
        self,
        t: int,
        eta: float,
        S: float,
        out_candidate: np.ndarray,
        query_count: int,
        **iterates: np.ndarray,
    ) -> None:
        i = t - 1
        self.eta[i] = eta
        self.S[i] = S
        if self.is_checkpoint[t]:
            f = self.problem.objective(out_candidate)
            self.f_value[i] = f
            self.gap[i] = f - self.problem.f_min
        self.queries[i] = query_count
        self.wall_ns[i] = time.perf_counter_ns() - self._start
        self.x_out = out_candidate
        if self.keep:
            for k, v in iterates.items():
                self.iterates.setdefault(k, []).append(np.array(v))

    def finish(self, algorithm: str, problem_name: str, params: dict[str, Any]) -> Trajectory:
        return Trajectory(
            algorithm=algorithm,
            problem=problem_name,
            T=self.T,
            params=params,
            t=np.arange(1, self.T + 1, dtype=np.int64),
            f_value=self.f_value,
            gap=self.gap,
            eta=self.eta,
            S=self.S,
            queries=self.queries,
            wall_ns=self.wall_ns,
            x_out=self.x_out,
            iterates={k: np.stack(v) for k, v in self.iterates.items()},
        )


def _check_horizon(T: int) -> None:
    if not isinstance(T, (int, np.integer)) or T < 1:
        raise InvalidInputError("T must be a positive integer")


def _check_state(t: int, *arrays: np.ndarray | float) -> None:
    for a in arrays:
        ok = np.all(np.isfinite(a)) if isinstance(a, np.ndarray) else math.isfinite(a)
        if not ok:
            raise NumericalFailureError(f"non-finite state at iteration {t}")


class _ProxState:
    """Base point threaded through repeated prox steps.

    Legendre geometries keep the base in dual coordinates, where the prox
    chain is exact: prox(Q(z), v) = Q(grad h(Q(z)) + v) and grad h(Q(z))
    equals z up to an additive multiple of the kernel the mirror map ignores.
    The projection geometry stays in the primal.
    """

    def __init__(self, reg: Regularizer) -> None:
        self.reg = reg
        self.legendre = reg.geometry != EUCLIDEAN_SET
        self.z = np.zeros_like(reg.prox_center)
        self.x = mirror_map(reg, self.z) if self.legendre else reg.prox_center.copy()

    def peek(self, v: np.ndarray) -> np.ndarray:
        if self.legendre:
            return mirror_map(self.reg, self.z + v)
        return prox_map(self.reg, self.x, v)

    def move(self, v: np.ndarray) -> np.ndarray:
        if self.legendre:
            self.z = self.z + v
            self.x = mirror_map(self.reg, self.z)
        else:
            self.x = prox_map(self.reg, self.x, v)
        return self.x


def _undergrad_defaults(
    reg: Regularizer, theta: float | None, delta: float | None
) -> tuple[float, float]:
    if delta is None:
        delta = math.sqrt(reg.K)
    if theta is None:
        if not (math.isfinite(reg.Omega) and math.isfinite(reg.Diam)):
            raise ConfigError(
                "unbounded domain has no default theta; pass overrides "
                "(the convention theta = delta = sqrt(K) matches the unbounded analysis)"
            )
        theta = math.sqrt(reg.K * (reg.Omega + reg.K * reg.Diam**2))
    if not (math.isfinite(theta) and theta > 0.0 and math.isfinite(delta) and delta > 0.0):
        raise InvalidInputError("theta and delta must be positive and finite")
    return float(theta), float(delta)


def _accelerated_loop(
    problem: ProblemInstance,
    oracle: OracleHandle,
    T: int,
    weights: StepWeights,
    keep_iterates: bool,
    theta: float,
    delta: float,
    fixed_eta: float | None,
) -> _Recorder:
    """Shared loop of the adaptive method and its fixed-rate variant."""
    reg = problem.regularizer
    rec = _Recorder(problem, T, keep_iterates)
    y = np.zeros_like(reg.prox_center)
    w = np.zeros_like(reg.prox_center)
    S = delta * delta
    Gamma = 0.0
    for t in range(1, T + 1):
        gamma = weights.value(t)
        Gamma += gamma
        eta = fixed_eta if fixed_eta is not None else theta / math.sqrt(S)
        x_t = mirror_map(reg, eta * y)
        xbar = (gamma * x_t + w) / Gamma
        _check_state(t, xbar)
        g_t = oracle.query(xbar)
        x_half = mirror_map(reg, eta * (y - gamma * g_t))
        xbar_half = (gamma * x_half + w) / Gamma
        _check_state(t, xbar_half)
        g_half = oracle.query(xbar_half)
        y = y - gamma * g_half
        w = w + gamma * x_half
        rec.record(
            t,
            eta,
            S if fixed_eta is None else 0.0,
            xbar_half,
            oracle.query_count,
            x=x_t,
            x_half=x_half,
            xbar=xbar,
            xbar_half=xbar_half,
            g=g_t,
            g_half=g_half,
        )
        if fixed_eta is None:
            dn = reg.norms.dual_norm(g_half - g_t)
            S = S + gamma * gamma * dn * dn
        _check_state(t, y, g_half, S)
    return rec


def undergrad_run(
    problem: ProblemInstance,
    oracle: OracleHandle,
    T: int,
    weights: StepWeights = LINEAR,
    theta: float | None = None,
    delta: float | None = None,
    keep_iterates: bool = False,
) -> Trajectory:
    """Adaptive run; eta_t = theta / sqrt(S_t) with S_1 = delta^2.

    Defaults: delta = sqrt(K), theta = sqrt(K (Omega + K Diam^2)). Unbounded
    domains have no finite default theta and require explicit overrides.
    """
    _check_horizon(T)
    theta, delta = _undergrad_defaults(problem.regularizer, theta, delta)
    rec = _accelerated_loop(problem, oracle, T, weights, keep_iterates, theta, delta, None)
    params = {
        "weights": weights.rule,
        "theta": theta,
        "delta": delta,
        "sigma": oracle.sigma,
        "noise": oracle.noise.kind,
    }
    return rec.finish("undergrad", problem.name, params)


def fixed_lr_accelerated_run(
    problem: ProblemInstance,
    oracle: OracleHandle,
    T: int,
    eta: float,
    weights: StepWeights = LINEAR,
    keep_iterates: bool = False,
) -> Trajectory:
    """The same accelerated loop with the learning rate frozen at ``eta``."""
    _check_horizon(T)
    if not (math.isfinite(eta) and eta > 0.0):
        raise InvalidInputError("eta must be positive and finite")
    rec = _accelerated_loop(problem, oracle, T, weights, keep_iterates, 1.0, 1.0, float(eta))
    params = {
        "weights": weights.rule,
        "eta": float(eta),
        "sigma": oracle.sigma,
        "noise": oracle.noise.kind,
    }
    return rec.finish("aeg", problem.name, params)


def unixgrad_run(
    problem: ProblemInstance,
    oracle: OracleHandle,
    T: int,
    step_scale: float,
    weights: StepWeights = LINEAR,
    keep_iterates: bool = False,
) -> Trajectory:
    """Optimistic mirror prox with adaptive step, queried at averaged states.

    alpha_t = step_scale * gamma_t / sqrt(1 + sum_{s<t} gamma_s^2
    ||g_{s+1/2} - g_s||_*^2). The Bregman-diameter coefficient of the
    textbook step is replaced by ``step_scale`` because that diameter is
    infinite for the entropic geometry.
    """
    _check_horizon(T)
    if not (math.isfinite(step_scale) and step_scale > 0.0):
        raise InvalidInputError("step_scale must be positive and finite")
    reg = problem.regularizer
    rec = _Recorder(problem, T, keep_iterates)
    base = _ProxState(reg)
    w = np.zeros_like(reg.prox_center)
    accum = 1.0
    Gamma = 0.0
    for t in range(1, T + 1):
        gamma = weights.value(t)
        Gamma += gamma
        alpha = step_scale * gamma / math.sqrt(accum)
        x_t = base.x
        xbar = (gamma * x_t + w) / Gamma
        _check_state(t, xbar)
        g_t = oracle.query(xbar)
        x_half = base.peek(-alpha * g_t)
        xbar_half = (gamma * x_half + w) / Gamma
        _check_state(t, xbar_half)
        g_half = oracle.query(xbar_half)
        base.move(-alpha * g_half)
        w = w + gamma * x_half
        rec.record(
            t,
            alpha,
            accum,
            xbar_half,
            oracle.query_count,
            x=x_t,
            x_half=x_half,
            xbar=xbar,
            xbar_half=xbar_half,
            g=g_t,
            g_half=g_half,
        )
        dn = reg.norms.dual_norm(g_half - g_t)
        accum = accum + gamma * gamma * dn * dn
        _check_state(t, base.x, g_half, accum)
    params = {
        "weights": weights.rule,
        "step_scale": float(step_scale),
        "sigma": oracle.sigma,
        "noise": oracle.noise.kind,
    }
    return rec.finish("unixgrad", problem.name, params)


def mirror_prox_run(
    problem: ProblemInstance,
    oracle: OracleHandle,
    T: int,
    step_mode: str = MP_BG,
    constant: float = 1.0,
    G: float | None = None,
    L: float | None = None,
    sigma: float | None = None,
    keep_iterates: bool = False,
) -> Trajectory:
    """Constant-step mirror prox; output is the step-weighted ergodic average.

    Step per mode: ``bg``: c/sqrt((G^2 + sigma^2) T); ``lg-deterministic``:
    c*K/L; ``lg-stochastic``: c/(sigma sqrt(T)). Constants default to the
    problem's G and L and the oracle's sigma.
    """
    _check_horizon(T)
    if step_mode not in MP_MODES:
        raise ConfigError(f"unknown step mode {step_mode!r}")
    if not (math.isfinite(constant) and constant > 0.0):
        raise InvalidInputError("constant must be positive and finite")
    reg = problem.regularizer
    G = problem.G if G is None else G
    L = problem.L if L is None else L
    sigma = oracle.sigma if sigma is None else sigma
    if step_mode == MP_BG:
        if not math.isfinite(G):
            raise ConfigError("bg mode needs a finite gradient bound G")
        if G * G + sigma * sigma <= 0.0:
            raise ConfigError("bg mode needs G or sigma positive")
        alpha = constant / math.sqrt((G * G + sigma * sigma) * T)
    elif step_mode == MP_LG_DETERMINISTIC:
        if not (math.isfinite(L) and L > 0.0):
            raise ConfigError("lg-deterministic mode needs a finite positive L")
        alpha = constant * reg.K / L
    else:
        if not (math.isfinite(sigma) and sigma > 0.0):
            raise ConfigError("lg-stochastic mode needs a positive sigma")
        alpha = constant / (sigma * math.sqrt(T))
    rec = _Recorder(problem, T, keep_iterates)
    base = _ProxState(reg)
    avg_num = np.zeros_like(reg.prox_center)
    avg_den = 0.0
    for t in range(1, T + 1):
        x_t = base.x
        _check_state(t, x_t)
        g_t = oracle.query(x_t)
        x_half = base.peek(-alpha * g_t)
        _check_state(t, x_half)
        g_half = oracle.query(x_half)
        base.move(-alpha * g_half)
        avg_num = avg_num + alpha * x_half
        avg_den += alpha
        out = avg_num / avg_den
        rec.record(
            t,
            alpha,
            0.0,
            out,
            oracle.query_count,
            x=x_t,
            x_half=x_half,
            g=g_t,
            g_half=g_half,
        )
        _check_state(t, base.x, g_half)
    params = {
        "step_mode": step_mode,
        "constant": float(constant),
        "alpha": float(alpha),
        "G": float(G),
        "L": float(L),
        "sigma": float(sigma),
        "noise": oracle.noise.kind,
    }
    return rec.finish("mirror_prox", problem.name, params)


def dual_extrapolation_run(
    problem: ProblemInstance,
    oracle: OracleHandle,
    T: int,
    alpha: float,
    keep_iterates: bool = False,
) -> Trajectory:
    """Non-adaptive dual extrapolation with constant step ``alpha``."""
    _check_horizon(T)
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise InvalidInputError("alpha must be positive and finite")
    reg = problem.regularizer
    legendre = reg.geometry != EUCLIDEAN_SET
    rec = _Recorder(problem, T, keep_iterates)
    y = np.zeros_like(reg.prox_center)
    avg_num = np.zeros_like(reg.prox_center)
    avg_den = 0.0
    for t in range(1, T + 1):
        x_t = mirror_map(reg, alpha * y)
        _check_state(t, x_t)
        g_t = oracle.query(x_t)
        if legendre:
            x_half = mirror_map(reg, alpha * (y - g_t))
        else:
            x_half = prox_map(reg, x_t, -alpha * g_t)
        _check_state(t, x_half)
        g_half = oracle.query(x_half)
        y = y - g_half
        avg_num = avg_num + alpha * x_half
        avg_den += alpha
        out = avg_num / avg_den
        rec.record(
            t,
            alpha,
            0.0,
            out,
            oracle.query_count,
            x=x_t,
            x_half=x_half,
            g=g_t,
            g_half=g_half,
        )
        _check_state(t, y, g_half)
    params = {"alpha": float(alpha), "sigma": oracle.sigma, "noise": oracle.noise.kind}
    return rec.finish("dual_extrapolation", problem.name, params)

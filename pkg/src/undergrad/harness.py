"""Config-driven experiment runner, CSV emitter, registry, and plot export.

A JSON config describes one experiment: one algorithm, one problem, one
noise level, several seeds. The registry bundles named groups of configs
reproducing the benchmark figures. All CSV output is byte-stable: floats are
serialized with 17 significant digits and the wall-clock column is zeroed
(timings live in RunSummary only), so re-running a config reproduces
identical bytes.
"""

from __future__ import annotations

import csv
import glob
import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analysis
from .algorithms import (
    StepWeights,
    Trajectory,
    checkpoint_iterations,
    dual_extrapolation_run,
    fixed_lr_accelerated_run,
    mirror_prox_run,
    undergrad_run,
    unixgrad_run,
)
from .errors import ConfigError, NumericalFailureError
from .oracle import OracleHandle, derive_stream
from .problems import (
    ProblemInstance,
    make_capacity_spectrahedron,
    make_linear_simplex,
    make_quadratic_simplex,
    make_quadratic_unbounded,
)

CSV_HEADER = ("run_id", "t", "f_value", "gap", "eta", "S", "queries", "wall_ns")

ALGORITHM_NAMES = ("undergrad", "unixgrad", "aeg", "mirror_prox", "dual_extrapolation")

PROBLEM_BUILDERS = {
    "linear_simplex": lambda dim, seed: make_linear_simplex(dim, seed=seed),
    "quadratic_simplex": lambda dim, seed: make_quadratic_simplex(dim, seed=seed),
    "quadratic_simplex_euclidean": lambda dim, seed: make_quadratic_simplex(
        dim, seed=seed, geometry="euclidean"
    ),
    "capacity_spectrahedron": lambda dim, seed: make_capacity_spectrahedron(dim, seed=seed),
    "quadratic_unbounded": lambda dim, seed: make_quadratic_unbounded(dim, seed=seed),
}

OVERRIDE_KEYS = ("theta", "delta", "step_scale", "eta")

MIRROR_PROX_PARAM_KEYS = ("step_mode", "constant")


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    parameters: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    dimension: int
    seed: int


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: AlgorithmSpec
    problem: ProblemSpec
    T: int
    sigma: float
    seeds: tuple[int, ...]
    weights: str
    output_dir: str
    overrides: dict = field(default_factory=dict)


def _require_keys(doc: dict, allowed: tuple[str, ...], required: tuple[str, ...], where: str) -> None:
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown {where} keys {unknown}; allowed: {sorted(allowed)}")
    missing = sorted(set(required) - set(doc))
    if missing:
        raise ConfigError(f"missing {where} keys {missing}")


def config_from_dict(doc: dict) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    _require_keys(
        doc,
        allowed=("algorithm", "problem", "T", "sigma", "seeds", "weights", "overrides", "output_dir"),
        required=("algorithm", "problem", "T", "sigma", "seeds", "weights", "output_dir"),
        where="config",
    )
    algo_doc = doc["algorithm"]
    if not isinstance(algo_doc, dict):
        raise ConfigError("algorithm must be an object with name and parameters")
    _require_keys(algo_doc, allowed=("name", "parameters"), required=("name",), where="algorithm")
    name = algo_doc["name"]
    if name not in ALGORITHM_NAMES:
        raise ConfigError(f"unknown algorithm {name!r}; registered: {sorted(ALGORITHM_NAMES)}")
    parameters = algo_doc.get("parameters", {})
    if not isinstance(parameters, dict):
        raise ConfigError("algorithm parameters must be an object")
    allowed_params = MIRROR_PROX_PARAM_KEYS if name == "mirror_prox" else ()
    _require_keys(parameters, allowed=allowed_params, required=(), where="algorithm parameter")

    prob_doc = doc["problem"]
    if not isinstance(prob_doc, dict):
        raise ConfigError("problem must be an object with name, dimension, seed")
    _require_keys(
        prob_doc, allowed=("name", "dimension", "seed"), required=("name", "dimension", "seed"), where="problem"
    )
    if prob_doc["name"] not in PROBLEM_BUILDERS:
        raise ConfigError(f"unknown problem {prob_doc['name']!r}; registered: {sorted(PROBLEM_BUILDERS)}")

    T = doc["T"]
    if not isinstance(T, int) or T < 1:
        raise ConfigError("T must be an integer >= 1")
    sigma = doc["sigma"]
    if not isinstance(sigma, (int, float)) or not math.isfinite(sigma) or sigma < 0.0:
        raise ConfigError("sigma must be a finite nonnegative number")
    seeds = doc["seeds"]
    if not isinstance(seeds, list) or not seeds or not all(isinstance(s, int) for s in seeds):
        raise ConfigError("seeds must be a non-empty list of integers")
    if len(set(seeds)) != len(seeds):
        raise ConfigError("seeds must be distinct")
    weights = doc["weights"]
    if weights not in ("linear", "constant"):
        raise ConfigError("weights must be 'linear' or 'constant'")
    overrides = doc.get("overrides", {})
    if not isinstance(overrides, dict):
        raise ConfigError("overrides must be an object")
    _require_keys(overrides, allowed=OVERRIDE_KEYS, required=(), where="override")
    for k, v in overrides.items():
        if not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0.0:
            raise ConfigError(f"override {k} must be a positive finite number")
    output_dir = doc["output_dir"]
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError("output_dir must be a non-empty string")

    return ExperimentConfig(
        algorithm=AlgorithmSpec(name=name, parameters=dict(parameters)),
        problem=ProblemSpec(name=prob_doc["name"], dimension=int(prob_doc["dimension"]), seed=int(prob_doc["seed"])),
        T=T,
        sigma=float(sigma),
        seeds=tuple(int(s) for s in seeds),
        weights=weights,
        output_dir=output_dir,
        overrides=dict(overrides),
    )


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(doc)


def config_to_dict(config: ExperimentConfig) -> dict:
    return {
        "algorithm": {"name": config.algorithm.name, "parameters": dict(config.algorithm.parameters)},
        "problem": {
            "name": config.problem.name,
            "dimension": config.problem.dimension,
            "seed": config.problem.seed,
        },
        "T": config.T,
        "sigma": config.sigma,
        "seeds": list(config.seeds),
        "weights": config.weights,
        "overrides": dict(config.overrides),
        "output_dir": config.output_dir,
    }


def config_hash(config: ExperimentConfig) -> str:
    doc = config_to_dict(config)
    doc.pop("output_dir")
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def run_label(config: ExperimentConfig) -> str:
    """Deterministic per-experiment file label, unique inside a registry group."""
    name = config.algorithm.name
    ov = config.overrides
    if name == "unixgrad":
        base = f"unixgrad_ss{ov.get('step_scale', 0.0):.6g}"
    elif name == "aeg":
        base = f"aeg_eta{ov.get('eta', 0.0):.6g}"
    elif name == "mirror_prox":
        base = f"mirror_prox_{config.algorithm.parameters.get('step_mode', 'bg')}"
    elif name == "dual_extrapolation":
        base = f"dual_extrapolation_a{ov.get('eta', 0.0):.6g}"
    else:
        base = "undergrad"
    return f"{base}_sigma{config.sigma:.6g}"


def build_problem(config: ExperimentConfig) -> ProblemInstance:
    return PROBLEM_BUILDERS[config.problem.name](config.problem.dimension, config.problem.seed)


def _run_single_seed(config: ExperimentConfig, problem: ProblemInstance, seed: int) -> Trajectory:
    oracle = OracleHandle(
        problem.gradient,
        problem.regularizer,
        sigma=config.sigma,
        rng=derive_stream(seed, 0),
    )
    weights = StepWeights(config.weights)
    ov = config.overrides
    name = config.algorithm.name
    if name == "undergrad":
        return undergrad_run(
            problem, oracle, config.T, weights, theta=ov.get("theta"), delta=ov.get("delta")
        )
    if name == "aeg":
        if "eta" not in ov:
            raise ConfigError("aeg needs overrides.eta")
        return fixed_lr_accelerated_run(problem, oracle, config.T, eta=ov["eta"], weights=weights)
    if name == "unixgrad":
        if "step_scale" not in ov:
            raise ConfigError("unixgrad needs overrides.step_scale")
        return unixgrad_run(problem, oracle, config.T, step_scale=ov["step_scale"], weights=weights)
    if name == "mirror_prox":
        params = config.algorithm.parameters
        return mirror_prox_run(
            problem,
            oracle,
            config.T,
            step_mode=params.get("step_mode", "bg"),
            constant=float(params.get("constant", 1.0)),
        )
    if name == "dual_extrapolation":
        if "eta" not in ov:
            raise ConfigError("dual_extrapolation needs overrides.eta (its constant step)")
        return dual_extrapolation_run(problem, oracle, config.T, alpha=ov["eta"])
    raise ConfigError(f"unknown algorithm {name!r}")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_rows(path: str, run_id: str, grid: np.ndarray, traj_like: dict[str, np.ndarray]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for t in grid:
            i = int(t) - 1
            writer.writerow(
                (
                    run_id,
                    int(t),
                    _fmt(traj_like["f_value"][i]),
                    _fmt(traj_like["gap"][i]),
                    _fmt(traj_like["eta"][i]),
                    _fmt(traj_like["S"][i]),
                    int(traj_like["queries"][i]),
                    0,
                )
            )


@dataclass(eq=False)
class RunSummary:
    label: str
    config_hash: str
    csv_paths: list[str]
    aggregate_path: str
    checkpoints: np.ndarray
    per_seed_final_gap: list[float]
    mean_gap: np.ndarray
    fit: analysis.RateFit | None
    bounds: dict[str, np.ndarray]
    wall_ns_total: int


def run_experiment(config: ExperimentConfig, threads: int = 1) -> RunSummary:
    """Execute every seed of one experiment and write per-seed plus mean CSVs."""
    problem = build_problem(config)
    label = run_label(config)
    os.makedirs(config.output_dir, exist_ok=True)
    grid = checkpoint_iterations(config.T)

    def task(seed: int) -> Trajectory:
        try:
            return _run_single_seed(config, problem, seed)
        except NumericalFailureError as exc:
            raise NumericalFailureError(f"{label}_seed{seed}: {exc}") from exc

    if threads > 1 and len(config.seeds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trajectories = list(pool.map(task, config.seeds))
    else:
        trajectories = [task(seed) for seed in config.seeds]

    csv_paths = []
    for seed, traj in zip(config.seeds, trajectories):
        run_id = f"{label}_seed{seed}"
        path = os.path.join(config.output_dir, f"{run_id}.csv")
        _write_rows(
            path,
            run_id,
            grid,
            {
                "f_value": traj.f_value,
                "gap": traj.gap,
                "eta": traj.eta,
                "S": traj.S,
                "queries": traj.queries,
            },
        )
        csv_paths.append(path)

    idx = grid - 1
    stack = {
        "f_value": np.mean(np.stack([traj.f_value for traj in trajectories]), axis=0),
        "gap": np.mean(np.stack([traj.gap for traj in trajectories]), axis=0),
        "eta": np.mean(np.stack([traj.eta for traj in trajectories]), axis=0),
        "S": np.mean(np.stack([traj.S for traj in trajectories]), axis=0),
        "queries": trajectories[0].queries,
    }
    aggregate_path = os.path.join(config.output_dir, f"{label}__mean.csv")
    _write_rows(aggregate_path, label, grid, stack)

    mean_gap = stack["gap"][idx]
    try:
        fit = analysis.fit_power_law(grid.astype(float), mean_gap, (max(1.0, config.T / 100.0), float(config.T)))
    except Exception:
        fit = None

    reg = problem.regularizer
    bounds: dict[str, np.ndarray] = {}
    if math.isfinite(reg.Omega) and math.isfinite(reg.Diam):
        if math.isfinite(problem.G):
            bounds["bg"] = np.array(
                [analysis.bg_bound(reg.K, reg.Omega, reg.Diam, problem.G, config.sigma, int(t)) for t in grid]
            )
        if math.isfinite(problem.L):
            bounds["lg"] = np.array(
                [analysis.lg_bound(reg.K, reg.Omega, reg.Diam, problem.L, config.sigma, int(t)) for t in grid]
            )

    return RunSummary(
        label=label,
        config_hash=config_hash(config),
        csv_paths=csv_paths,
        aggregate_path=aggregate_path,
        checkpoints=grid,
        per_seed_final_gap=[float(traj.gap[-1]) for traj in trajectories],
        mean_gap=mean_gap,
        fit=fit,
        bounds=bounds,
        wall_ns_total=int(sum(int(traj.wall_ns[-1]) for traj in trajectories)),
    )


# ------------------------------------------------------------------ registry

REGISTRY_NAMES = ("fig1", "fig3", "fig4")

_BENCH_PROBLEM = {"name": "linear_simplex", "dimension": 100, "seed": 7}
_BENCH_T = 10_000
_NOISY_SEEDS = list(range(20))
_AEG_ETA = 1.0


def _bench_algorithms(H: float) -> list[dict]:
    return [
        {"name": "undergrad", "overrides": {}},
        {"name": "unixgrad", "overrides": {"step_scale": 1e-3 * H}},
        {"name": "unixgrad", "overrides": {"step_scale": H}},
        {"name": "unixgrad", "overrides": {"step_scale": 10.0 * H}},
        {"name": "aeg", "overrides": {"eta": _AEG_ETA}},
    ]


def registry_configs(name: str, output_dir: str | None = None, base_seed: int | None = None) -> list[ExperimentConfig]:
    """Expand a registry entry into its experiment configs.

    ``base_seed`` rebases each config's seed list to consecutive values
    starting there (the UNDERGRAD_SEED hook).
    """
    if name not in REGISTRY_NAMES:
        raise ConfigError(f"unknown registry entry {name!r}; available: {sorted(REGISTRY_NAMES)}")
    out = output_dir if output_dir is not None else os.path.join("results", name)
    H = math.sqrt(math.log(_BENCH_PROBLEM["dimension"]) + 1.0)
    docs = []
    if name == "fig1":
        for algo in _bench_algorithms(H):
            docs.append(
                {
                    "algorithm": {"name": algo["name"]},
                    "problem": dict(_BENCH_PROBLEM),
                    "T": _BENCH_T,
                    "sigma": 0.0,
                    "seeds": [0],
                    "weights": "linear",
                    "overrides": algo["overrides"],
                    "output_dir": out,
                }
            )
    elif name == "fig3":
        for algo in _bench_algorithms(H):
            docs.append(
                {
                    "algorithm": {"name": algo["name"]},
                    "problem": dict(_BENCH_PROBLEM),
                    "T": _BENCH_T,
                    "sigma": 0.1,
                    "seeds": list(_NOISY_SEEDS),
                    "weights": "linear",
                    "overrides": algo["overrides"],
                    "output_dir": out,
                }
            )
    else:
        for sigma in (0.0, 0.01, 0.1, 1.0):
            docs.append(
                {
                    "algorithm": {"name": "undergrad"},
                    "problem": dict(_BENCH_PROBLEM),
                    "T": _BENCH_T,
                    "sigma": sigma,
                    "seeds": [0] if sigma == 0.0 else list(_NOISY_SEEDS),
                    "weights": "linear",
                    "overrides": {},
                    "output_dir": out,
                }
            )
    configs = [config_from_dict(doc) for doc in docs]
    if base_seed is not None:
        configs = [rebase_seeds(c, base_seed) for c in configs]
    return configs


def rebase_seeds(config: ExperimentConfig, base_seed: int) -> ExperimentConfig:
    doc = config_to_dict(config)
    doc["seeds"] = list(range(base_seed, base_seed + len(config.seeds)))
    return config_from_dict(doc)


def run_registry(
    name: str, output_dir: str | None = None, threads: int = 1, base_seed: int | None = None
) -> list[RunSummary]:
    return [run_experiment(c, threads=threads) for c in registry_configs(name, output_dir, base_seed)]


# ---------------------------------------------------------------------- plot

def plot(input_pattern: str, out_dir: str) -> list[str]:
    """Export log-log gap series as text columns plus one SVG overlay."""
    files = sorted(glob.glob(input_pattern))
    if not files:
        raise ConfigError(f"no files match {input_pattern!r}")
    series = []
    for path in files:
        ts: list[float] = []
        gaps: list[float] = []
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or "gap" not in reader.fieldnames or "t" not in reader.fieldnames:
                raise ConfigError(f"{path}: missing t/gap columns")
            for row in reader:
                if row["gap"] == "":
                    continue
                ts.append(float(row["t"]))
                gaps.append(float(row["gap"]))
        finite = [g for g in gaps if math.isfinite(g)]
        if not finite:
            raise ConfigError(f"{path}: empty gap column")
        label = os.path.splitext(os.path.basename(path))[0]
        series.append((label, np.asarray(ts), np.asarray(gaps)))

    os.makedirs(out_dir, exist_ok=True)
    written = []
    for label, ts, gaps in series:
        path = os.path.join(out_dir, f"series_{label}.txt")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# t gap\n")
            for t, g in zip(ts, gaps):
                fh.write(f"{int(t)} {_fmt(g)}\n")
        written.append(path)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for label, ts, gaps in series:
        keep = np.isfinite(gaps) & (gaps > 0.0)
        if np.any(keep):
            ax.loglog(ts[keep], gaps[keep], label=label, linewidth=1.2)
    ax.set_xlabel("T")
    ax.set_ylabel("optimality gap")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    svg_path = os.path.join(out_dir, "gap_vs_t.svg")
    fig.savefig(svg_path, format="svg", bbox_inches="tight")
    plt.close(fig)
    written.append(svg_path)
    return written

"""Named verification batteries shared by the CLI and the test suite.

Each check returns a :class:`CheckResult` carrying measured numbers in its
detail string, so failures are diagnosable from the report alone. Suites:

* ``geometry``: norm duality, mirror-map characterizations, conjugate
  identities, divergence curvature, eigensolver accuracy.
* ``lemmas``: the property sweeps behind the coupling bound, the three-point
  identity, the root-sum comparison, the mirror/prox equivalence, plus the
  trajectory template and regret-conversion checks.
* ``algorithms``: averaging identity, monotonicity, determinism,
  constant-gradient behavior, the fixed-rate equivalence, problem
  self-tests, and CSV byte-identity.
* ``rates``: the A1-A8 battery.
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass

import numpy as np

from . import analysis, geometry, problems, symlinalg
from .algorithms import (
    LINEAR,
    Trajectory,
    fixed_lr_accelerated_run,
    undergrad_run,
    unixgrad_run,
)
from .errors import ConfigError, DomainError
from .oracle import OracleHandle, derive_stream


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def _sweep_regs() -> list[geometry.Regularizer]:
    return [
        geometry.entropic_simplex(5),
        geometry.euclidean_simplex(5),
        geometry.von_neumann_spectrahedron(3),
        geometry.euclidean_unbounded(5),
    ]


def _random_dual(reg: geometry.Regularizer, rng: np.random.Generator, scale: float = 3.0) -> np.ndarray:
    if reg.geometry == geometry.VON_NEUMANN_SPECTRAHEDRON:
        z = rng.standard_normal((reg.side, reg.side)) * scale
        return 0.5 * (z + z.T)
    return rng.standard_normal(reg.dim) * scale


# ---------------------------------------------------------------- geometry

def check_norm_duality() -> CheckResult:
    rng = np.random.default_rng(101)
    worst = -math.inf
    for _ in range(300):
        u = rng.standard_normal(7) * rng.uniform(0.1, 10.0)
        v = rng.standard_normal(7) * rng.uniform(0.1, 10.0)
        for pair in (geometry.L1_LINF, geometry.L2_L2):
            excess = abs(float(u @ v)) - pair.primal_norm(u) * pair.dual_norm(v)
            worst = max(worst, excess)
    for _ in range(150):
        a = rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4))
        a = 0.5 * (a + a.T)
        b = 0.5 * (b + b.T)
        pair = geometry.NUCLEAR_SPECTRAL
        bound = pair.primal_norm(a) * pair.dual_norm(b)
        excess = abs(geometry.inner(a, b)) - bound * (1.0 + 1e-12)
        worst = max(worst, excess)
    return _result("norm-duality", worst <= 1e-9, f"worst pairing excess {worst:.3e}")


def check_mirror_shift_invariance() -> CheckResult:
    rng = np.random.default_rng(102)
    worst = 0.0
    ent = geometry.entropic_simplex(6)
    vn = geometry.von_neumann_spectrahedron(4)
    for _ in range(200):
        c = rng.uniform(-50.0, 50.0)
        y = _random_dual(ent, rng, 5.0)
        worst = max(
            worst,
            float(np.max(np.abs(geometry.mirror_map(ent, y + c) - geometry.mirror_map(ent, y)))),
        )
    for _ in range(100):
        # the spectral analogue shifts by a multiple of the identity,
        # which also rescales the off-simplex mass, so the invariance is
        # only approximate there; check the simplex geometry strictly and
        # the matrix one for finiteness.
        y = _random_dual(vn, rng, 3.0)
        q = geometry.mirror_map(vn, y + 100.0 * np.eye(4))
        if not np.all(np.isfinite(q)):
            return _result("mirror-shift-invariance", False, "non-finite shifted mirror output")
    return _result("mirror-shift-invariance", worst <= 1e-12, f"max simplex drift {worst:.3e}")


def check_mirror_optimality() -> CheckResult:
    rng = np.random.default_rng(103)
    worst = -math.inf
    for reg in _sweep_regs():
        if reg.geometry == geometry.EUCLIDEAN_UNBOUNDED:
            continue
        for _ in range(100):
            y = _random_dual(reg, rng)
            q = geometry.mirror_map(reg, y)
            best = geometry.inner(y, q) - geometry.h_value(reg, q)
            for x in problems.sample_domain(reg, rng, 5):
                trial = geometry.inner(y, x) - geometry.h_value(reg, x)
                worst = max(worst, trial - best)
    return _result("mirror-optimality", worst <= 1e-9, f"max objective excess over Q(y) {worst:.3e}")


def check_conjugate_identities() -> CheckResult:
    rng = np.random.default_rng(104)
    ent = geometry.entropic_simplex(7)
    unb = geometry.euclidean_unbounded(7)
    worst = 0.0
    for _ in range(300):
        y = rng.standard_normal(7) * rng.uniform(0.5, 30.0)
        lse = float(np.log(np.sum(np.exp(y - np.max(y))))) + float(np.max(y))
        worst = max(worst, abs(geometry.conjugate_value(ent, y) - lse))
        worst = max(worst, abs(geometry.conjugate_value(unb, y) - 0.5 * float(y @ y)))
    return _result("conjugate-identities", worst <= 1e-9, f"max conjugate mismatch {worst:.3e}")


def check_bregman_strong_convexity() -> CheckResult:
    rng = np.random.default_rng(105)
    worst = -math.inf
    for reg in _sweep_regs():
        for _ in range(200):
            x = problems.sample_domain(reg, rng, 1)[0]
            p = problems.sample_domain(reg, rng, 1)[0]
            if not geometry.in_prox_domain(reg, x):
                continue
            d = geometry.bregman_div(reg, p, x)
            dist = reg.norms.primal_norm(p - x)
            worst = max(worst, 0.5 * reg.K * dist * dist - d)
    return _result("bregman-strong-convexity", worst <= 1e-9, f"max curvature deficit {worst:.3e}")


def check_prox_guards() -> CheckResult:
    ent = geometry.entropic_simplex(4)
    vn = geometry.von_neumann_spectrahedron(3)
    boundary_vec = np.array([0.5, 0.5, 0.0, 0.0])
    boundary_mat = np.diag([0.5, 0.25, 0.0])
    hits = 0
    for reg, x in ((ent, boundary_vec), (vn, boundary_mat)):
        try:
            geometry.prox_map(reg, x, np.zeros_like(x))
        except DomainError:
            hits += 1
    return _result("prox-domain-guards", hits == 2, f"{hits}/2 boundary base points rejected")


def check_eig_accuracy() -> CheckResult:
    rng = np.random.default_rng(106)
    worst = 0.0
    for n in (2, 3, 5, 8, 16, 32):
        for trial in range(20):
            a = rng.standard_normal((n, n)) * rng.uniform(0.1, 100.0)
            a = 0.5 * (a + a.T)
            if trial % 5 == 0:
                # clustered spectrum stresses the rotations
                v, _ = np.linalg.qr(rng.standard_normal((n, n)))
                lam = np.repeat(rng.standard_normal((n + 1) // 2), 2)[:n]
                a = (v * lam) @ v.T
                a = 0.5 * (a + a.T)
            dec = symlinalg.sym_eig(a)
            V, w = dec.eigenvectors, dec.eigenvalues
            scale = max(1.0, float(np.linalg.norm(a)))
            rec = float(np.linalg.norm(a @ V - V * w)) / scale
            orth = float(np.linalg.norm(V.T @ V - np.eye(n)))
            sorted_ok = bool(np.all(np.diff(w) <= 1e-12))
            worst = max(worst, rec, orth, 0.0 if sorted_ok else 1.0)
    return _result("eig-accuracy", worst <= 1e-10, f"worst residual {worst:.3e} (n up to 32)")


def check_vn_diagonal_sigmoid() -> CheckResult:
    rng = np.random.default_rng(107)
    reg = geometry.von_neumann_spectrahedron(6)
    worst = 0.0
    for _ in range(200):
        lam = rng.standard_normal(6) * rng.uniform(0.5, 20.0)
        q = geometry.mirror_map(reg, np.diag(lam))
        m = float(np.max(lam))
        e = np.exp(lam - m)
        direct = np.diag(e / (math.exp(-m) + float(np.sum(e))))
        worst = max(worst, float(np.max(np.abs(q - direct))))
    return _result("vn-diagonal-sigmoid", worst <= 1e-10, f"max deviation {worst:.3e}")


# ------------------------------------------------------------------ lemmas

SWEEP_TRIALS = 10_000


def check_fenchel_lower_bound() -> CheckResult:
    rng = np.random.default_rng(201)
    regs = _sweep_regs()
    per = SWEEP_TRIALS // len(regs)
    failures = 0
    worst = -math.inf
    for reg in regs:
        ps = problems.sample_domain(reg, rng, per)
        for i in range(per):
            y = _random_dual(reg, rng)
            p = ps[i]
            q = geometry.mirror_map(reg, y)
            dist = reg.norms.primal_norm(q - p)
            deficit = 0.5 * reg.K * dist * dist - geometry.fenchel_coupling(reg, p, y)
            worst = max(worst, deficit)
            if deficit > 1e-9:
                failures += 1
    return _result(
        "fenchel-lower-bound",
        failures == 0,
        f"{failures}/{SWEEP_TRIALS} failures, worst deficit {worst:.3e}",
    )


def check_three_point_sweep() -> CheckResult:
    rng = np.random.default_rng(202)
    regs = _sweep_regs()
    per = SWEEP_TRIALS // len(regs)
    worst = 0.0
    for reg in regs:
        ps = problems.sample_domain(reg, rng, per)
        for i in range(per):
            y = _random_dual(reg, rng)
            y_plus = _random_dual(reg, rng)
            worst = max(worst, analysis.check_three_point(reg, ps[i], y, y_plus))
    return _result("three-point-identity", worst <= 1e-9, f"max residual {worst:.3e} over {SWEEP_TRIALS} trials")


def check_sqrt_lemma_sweep() -> CheckResult:
    rng = np.random.default_rng(203)
    failures = 0
    worst = math.inf
    for trial in range(SWEEP_TRIALS):
        seq = rng.uniform(0.0, 1.0, size=100) * rng.uniform(0.1, 10.0)
        if trial % 7 == 0:
            seq[: rng.integers(1, 50)] = 0.0
        delta = float(rng.uniform(0.0, 3.0))
        ok, lo, hi = analysis.check_sqrt_lemma(delta, seq)
        worst = min(worst, lo, hi)
        if not ok:
            failures += 1
    return _result(
        "sqrt-sum-lemma",
        failures == 0,
        f"{failures}/{SWEEP_TRIALS} failures, smallest margin {worst:.3e}",
    )


def check_mirror_prox_equivalence() -> CheckResult:
    rng = np.random.default_rng(204)
    regs = _sweep_regs()
    per = SWEEP_TRIALS // len(regs)
    worst = 0.0
    for reg in regs:
        center = reg.prox_center
        grad_center = geometry.reg_grad(reg, center)
        for _ in range(per):
            y = _random_dual(reg, rng)
            via_mirror = geometry.mirror_map(reg, y)
            via_prox = geometry.prox_map(reg, center, y - grad_center)
            worst = max(worst, float(np.max(np.abs(via_mirror - via_prox))))
    return _result(
        "mirror-prox-equivalence",
        worst <= 1e-9,
        f"max pointwise gap {worst:.3e} over {SWEEP_TRIALS} trials",
    )


def _template_problems() -> list[problems.ProblemInstance]:
    return [
        problems.make_linear_simplex(20, seed=3),
        problems.make_quadratic_simplex(20, seed=4, geometry="euclidean"),
        problems.make_capacity_spectrahedron(8, seed=5),
    ]


def _deterministic_run(problem: problems.ProblemInstance, T: int, keep: bool = True) -> Trajectory:
    oracle = OracleHandle(problem.gradient, problem.regularizer, sigma=0.0)
    return undergrad_run(problem, oracle, T, weights=LINEAR, keep_iterates=keep)


def check_template_inequality_runs(T: int = 500) -> CheckResult:
    worst = -math.inf
    names = []
    for problem in _template_problems():
        traj = _deterministic_run(problem, T)
        x_ref = problem.x_star
        slack = analysis.check_template_inequality(traj, problem.regularizer, x_ref)
        worst = max(worst, float(np.max(slack)))
        names.append(problem.regularizer.geometry)
    return _result(
        "template-inequality",
        worst <= 1e-8,
        f"max slack {worst:.3e} over T={T} runs on {', '.join(names)}",
    )


def check_regret_conversion_runs(T: int = 500) -> CheckResult:
    worst = -math.inf
    for problem in _template_problems():
        traj = _deterministic_run(problem, T)
        slack = analysis.check_regret_conversion(traj, problem.x_star, problem.f_min)
        worst = max(worst, slack)
    return _result("regret-conversion", worst <= 1e-9, f"max slack {worst:.3e} over T={T} runs")


# -------------------------------------------------------------- algorithms

def check_averaging_identity() -> CheckResult:
    problem = problems.make_quadratic_simplex(10, seed=6)
    traj = _deterministic_run(problem, 300)
    x_half = traj.iterates["x_half"]
    stored = traj.iterates["xbar_half"]
    w = np.zeros_like(x_half[0])
    Gamma = 0.0
    worst = 0.0
    for t in range(300):
        gamma = float(t + 1)
        Gamma += gamma
        rebuilt = (gamma * x_half[t] + w) / Gamma
        worst = max(worst, float(np.max(np.abs(rebuilt - stored[t]))))
        w = w + gamma * x_half[t]
    return _result("averaging-identity", worst == 0.0, f"max rebuild deviation {worst:.3e}")


def check_monotonicity() -> CheckResult:
    problem = problems.make_linear_simplex(20, seed=8)
    oracle = OracleHandle(problem.gradient, problem.regularizer, sigma=0.1, rng=derive_stream(8, 0))
    traj = undergrad_run(problem, oracle, 2000)
    eta_ok = bool(np.all(np.diff(traj.eta) <= 0.0))
    s_ok = bool(np.all(np.diff(traj.S) >= 0.0))
    return _result(
        "eta-S-monotonicity",
        eta_ok and s_ok,
        f"eta nonincreasing: {eta_ok}, S nondecreasing: {s_ok} (noisy run, T=2000)",
    )


def check_determinism() -> CheckResult:
    problem = problems.make_linear_simplex(15, seed=9)

    def run(seed: int) -> Trajectory:
        oracle = OracleHandle(problem.gradient, problem.regularizer, sigma=0.1, rng=derive_stream(seed, 0))
        return undergrad_run(problem, oracle, 500, keep_iterates=True)

    same = run(0).math_equal(run(0))
    different = not np.array_equal(run(0).gap, run(1).gap)
    return _result(
        "run-determinism",
        same and different,
        f"identical seeds agree: {same}, distinct seeds differ: {different}",
    )


def check_constant_gradient() -> CheckResult:
    problem = problems.make_linear_simplex(12, seed=10)
    reg = problem.regularizer
    H = analysis.h_radius(reg.K, reg.Omega, reg.Diam)
    oracle = OracleHandle(problem.gradient, reg, sigma=0.0)
    traj = undergrad_run(problem, oracle, 100)
    s_dev = float(np.max(np.abs(traj.S - reg.K)))
    eta_dev = float(np.max(np.abs(traj.eta - H)))
    oracle2 = OracleHandle(problem.gradient, reg, sigma=0.0)
    unix = unixgrad_run(problem, oracle2, 100, step_scale=H)
    accum_dev = float(np.max(np.abs(unix.S - 1.0)))
    alpha_dev = float(np.max(np.abs(unix.eta - H * np.arange(1, 101))))
    ok = s_dev == 0.0 and eta_dev == 0.0 and accum_dev == 0.0 and alpha_dev == 0.0
    return _result(
        "constant-gradient-steps",
        ok,
        f"S dev {s_dev:.1e}, eta dev {eta_dev:.1e}, unix denominator dev {accum_dev:.1e}, unix step dev {alpha_dev:.1e}",
    )


def check_fixed_rate_equivalence() -> CheckResult:
    problem = problems.make_linear_simplex(12, seed=11)
    reg = problem.regularizer
    H = analysis.h_radius(reg.K, reg.Omega, reg.Diam)
    t1 = undergrad_run(problem, OracleHandle(problem.gradient, reg), 200, keep_iterates=True)
    t2 = fixed_lr_accelerated_run(problem, OracleHandle(problem.gradient, reg), 200, eta=H, keep_iterates=True)
    same = (
        np.array_equal(t1.f_value, t2.f_value)
        and np.array_equal(t1.x_out, t2.x_out)
        and np.array_equal(t1.iterates["x_half"], t2.iterates["x_half"])
    )
    return _result("fixed-rate-equivalence", same, "fixed eta = H reproduces the adaptive run on a linear objective")


def check_weight_sums() -> CheckResult:
    t = np.arange(1, 10_001, dtype=float)
    sums = np.cumsum(t)
    exact = t * (t + 1.0) / 2.0
    dev = float(np.max(np.abs(sums - exact)))
    return _result("linear-weight-sums", dev == 0.0, f"max deviation from t(t+1)/2: {dev:.1e}")


def check_problem_batteries() -> CheckResult:
    rng = np.random.default_rng(300)
    entries: list[tuple[problems.ProblemInstance, int, int]] = [
        (problems.make_linear_simplex(30, seed=1), 100, 10_000),
        (problems.make_quadratic_simplex(30, seed=2), 100, 10_000),
        (problems.make_quadratic_simplex(30, seed=2, geometry="euclidean"), 100, 10_000),
        (problems.make_quadratic_unbounded(20, seed=3), 100, 10_000),
        # reduced counts on the matrix problem to keep the battery quick
        (problems.make_capacity_spectrahedron(8, seed=4), 10, 2000),
    ]
    lines = []
    ok = True
    for problem, n_grad, n_samp in entries:
        r = problems.self_test(problem, rng, n_grad_points=n_grad, n_samples=n_samp)
        good = r["grad_err"] <= 1e-5 and r["min_gap"] >= -1e-9 and r["g_excess"] <= 1e-9 and r["l_excess"] <= 1e-9
        ok = ok and good
        lines.append(f"{problem.name}: grad {r['grad_err']:.1e}, gap {r['min_gap']:.1e}")
    return _result("problem-batteries", ok, "; ".join(lines))


def check_csv_byte_identity() -> CheckResult:
    # imported here to keep the harness dependency one-directional at import time
    from . import harness

    with tempfile.TemporaryDirectory() as tmp:
        first = harness.run_registry("fig1", output_dir=f"{tmp}/a")
        second = harness.run_registry("fig1", output_dir=f"{tmp}/b")
        paths_a = sorted(p for s in first for p in s.csv_paths + [s.aggregate_path])
        paths_b = sorted(p for s in second for p in s.csv_paths + [s.aggregate_path])
        if len(paths_a) != len(paths_b):
            return _result("csv-byte-identity", False, "file sets differ")
        mismatches = 0
        for pa, pb in zip(paths_a, paths_b):
            with open(pa, "rb") as fa, open(pb, "rb") as fb:
                if fa.read() != fb.read():
                    mismatches += 1
        return _result(
            "csv-byte-identity",
            mismatches == 0,
            f"{len(paths_a)} files compared, {mismatches} mismatches",
        )


# -------------------------------------------------------------------- rates

FIG1_DIMENSION = 100
FIG1_PROBLEM_SEED = 7
FIG1_T = 10_000


def _fig1_problem() -> problems.ProblemInstance:
    return problems.make_linear_simplex(FIG1_DIMENSION, seed=FIG1_PROBLEM_SEED)


def check_a1() -> CheckResult:
    problem = _fig1_problem()
    oracle = OracleHandle(problem.gradient, problem.regularizer, sigma=0.0)
    traj = undergrad_run(problem, oracle, FIG1_T)
    fit = analysis.rate_slope(traj, window=(1e2, 1e4))
    wall_s = float(traj.wall_ns[-1]) / 1e9
    ok = -2.3 <= fit.slope <= -1.7 and fit.r_squared >= 0.95 and wall_s <= 10.0
    return _result(
        "A1-deterministic-acceleration",
        ok,
        f"slope {fit.slope:.3f} (target [-2.3, -1.7]), r2 {fit.r_squared:.4f} (>= 0.95), wall {wall_s:.2f}s (<= 10)",
    )


def check_a2() -> CheckResult:
    problem = _fig1_problem()
    reg = problem.regularizer
    gaps = []
    for seed in range(20):
        oracle = OracleHandle(problem.gradient, reg, sigma=0.1, rng=derive_stream(seed, 0))
        gaps.append(undergrad_run(problem, oracle, FIG1_T).gap)
    mean_gap = np.mean(np.stack(gaps), axis=0)
    t = np.arange(1, FIG1_T + 1, dtype=float)
    fit = analysis.fit_power_law(t, mean_gap, (1e2, 1e4))
    slope_ok = -0.70 <= fit.slope <= -0.35
    bound_ok = True
    margins = []
    for horizon in (100, 1000, 10_000):
        bound = analysis.bg_bound(reg.K, reg.Omega, reg.Diam, problem.G, 0.1, horizon)
        margins.append(f"t={horizon}: gap {mean_gap[horizon - 1]:.3e} vs bound {bound:.3e}")
        bound_ok = bound_ok and mean_gap[horizon - 1] <= bound
    return _result(
        "A2-stochastic-rate-and-bound",
        slope_ok and bound_ok,
        f"mean-gap slope {fit.slope:.3f} (target [-0.70, -0.35]); " + "; ".join(margins),
    )


def check_a3() -> CheckResult:
    problem = problems.make_quadratic_simplex(50, seed=0)
    reg = problem.regularizer
    oracle = OracleHandle(problem.gradient, reg, sigma=0.0)
    traj = undergrad_run(problem, oracle, FIG1_T)
    bounds = np.array(
        [analysis.lg_bound(reg.K, reg.Omega, reg.Diam, problem.L, 0.0, int(t)) for t in traj.t]
    )
    excess = traj.gap - bounds
    worst = float(np.nanmax(excess))
    violations = int(np.sum(excess > 0.0))
    return _result(
        "A3-smooth-bound-everywhere",
        violations == 0,
        f"{violations} checkpoint violations, worst gap-minus-bound {worst:.3e}",
    )


def check_a4() -> CheckResult:
    r = check_template_inequality_runs(T=500)
    return _result("A4-template-inequality", r.passed, r.detail)


def check_a5() -> CheckResult:
    parts = [
        check_fenchel_lower_bound(),
        check_three_point_sweep(),
        check_sqrt_lemma_sweep(),
        check_mirror_prox_equivalence(),
    ]
    ok = all(p.passed for p in parts)
    return _result("A5-lemma-sweeps", ok, "; ".join(f"{p.name}: {p.detail}" for p in parts))


def check_a6() -> CheckResult:
    parts = [check_eig_accuracy(), check_vn_diagonal_sigmoid()]
    ok = all(p.passed for p in parts)
    return _result("A6-linear-algebra", ok, "; ".join(f"{p.name}: {p.detail}" for p in parts))


def check_a7() -> CheckResult:
    problem = problems.make_quadratic_unbounded(20, seed=0)
    oracle = OracleHandle(problem.gradient, problem.regularizer, sigma=0.0)
    traj = undergrad_run(problem, oracle, FIG1_T, theta=1.0, delta=1.0)
    fit = analysis.rate_slope(traj, window=(1e2, 1e4))
    eta_final = float(traj.eta[-1])
    ok = -2.3 <= fit.slope <= -1.7 and eta_final >= 1e-3
    return _result(
        "A7-unbounded-acceleration",
        ok,
        (
            f"slope {fit.slope:.3f} (target [-2.3, -1.7]), final eta {eta_final:.4e} (>= 1e-3); "
            "on a strongly convex quadratic the locked learning rate contracts geometrically, "
            "so any run keeping eta above 1e-3 overshoots the slope bracket"
        ),
    )


def check_a8() -> CheckResult:
    problem = _fig1_problem()
    reg = problem.regularizer
    H = analysis.h_radius(reg.K, reg.Omega, reg.Diam)
    slopes = {}
    for label, scale in (("calibrated", H), ("small", 1e-3 * H)):
        oracle = OracleHandle(problem.gradient, reg, sigma=0.0)
        traj = unixgrad_run(problem, oracle, FIG1_T, step_scale=scale)
        slopes[label] = analysis.rate_slope(traj, window=(1e3, 1e4)).slope
    calibrated_ok = slopes["calibrated"] >= -1.5
    small_ok = slopes["small"] <= -1.7
    return _result(
        "A8-step-scale-contrast",
        calibrated_ok and small_ok,
        (
            f"tail slope calibrated {slopes['calibrated']:.3f} (soft target >= -1.5), "
            f"small {slopes['small']:.3f} (target <= -1.7); with exact gradients the "
            f"adaptive denominator never grows, so both scales settle near -2"
        ),
    )


def check_a9() -> CheckResult:
    r = check_csv_byte_identity()
    return _result("A9-registry-determinism", r.passed, r.detail)


# -------------------------------------------------------------------- suites

SUITES = {
    "geometry": (
        check_norm_duality,
        check_mirror_shift_invariance,
        check_mirror_optimality,
        check_conjugate_identities,
        check_bregman_strong_convexity,
        check_prox_guards,
        check_eig_accuracy,
        check_vn_diagonal_sigmoid,
    ),
    "lemmas": (
        check_fenchel_lower_bound,
        check_three_point_sweep,
        check_sqrt_lemma_sweep,
        check_mirror_prox_equivalence,
        check_template_inequality_runs,
        check_regret_conversion_runs,
    ),
    "algorithms": (
        check_averaging_identity,
        check_monotonicity,
        check_determinism,
        check_constant_gradient,
        check_fixed_rate_equivalence,
        check_weight_sums,
        check_problem_batteries,
        check_csv_byte_identity,
    ),
    "rates": (
        check_a1,
        check_a2,
        check_a3,
        check_a4,
        check_a5,
        check_a6,
        check_a7,
        check_a8,
        check_a9,
    ),
}


def run_suite(name: str) -> list[CheckResult]:
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return [fn() for fn in SUITES[name]]

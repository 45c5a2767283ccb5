import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from undergrad.errors import DomainError, InvalidInputError
from undergrad.geometry import (
    Regularizer,
    bregman_div,
    conjugate_value,
    entropic_simplex,
    euclidean_simplex,
    euclidean_unbounded,
    fenchel_coupling,
    h_value,
    inner,
    mirror_map,
    project_simplex,
    prox_map,
    range_of,
    reg_grad,
    validate_point,
    von_neumann_spectrahedron,
)

# ---------------------------------------------------------------- oracles
# Independent reference solvers. Written before the assertions they feed;
# deliberately brute-force so they share no code with the implementation.


def grid_argmax_simplex_2d(fn, steps: int = 20_000):
    """Maximize fn over the 2-simplex by dense line search on x_1."""
    xs = np.linspace(1e-9, 1.0 - 1e-9, steps)
    vals = np.array([fn(np.array([x, 1.0 - x])) for x in xs])
    i = int(np.argmax(vals))
    return np.array([xs[i], 1.0 - xs[i]])


def entropy_h(x):
    x = np.asarray(x)
    pos = x[x > 0]
    return float(np.sum(pos * np.log(pos)))


def vn_diag_argmax_1d(y_diag):
    """Maximize <diag(y), diag(q)> - h over diagonal 2x2 spectrahedron points.

    Coarse 2-D grid followed by two zoom passes around the incumbent.
    """

    def value(q1, q2):
        rest = 1.0 - q1 - q2
        if q1 <= 0.0 or q2 <= 0.0 or rest <= 0.0:
            return -math.inf
        ent = q1 * math.log(q1) + q2 * math.log(q2) + rest * math.log(rest)
        return y_diag[0] * q1 + y_diag[1] * q2 - ent

    lo1, hi1, lo2, hi2 = 1e-6, 1.0, 1e-6, 1.0
    best = (1.0 / 3.0, 1.0 / 3.0)
    for _ in range(3):
        q1s = np.linspace(lo1, hi1, 400)
        q2s = np.linspace(lo2, hi2, 400)
        best_val = -math.inf
        for q1 in q1s:
            for q2 in q2s:
                v = value(q1, q2)
                if v > best_val:
                    best_val, best = v, (q1, q2)
        w1, w2 = (hi1 - lo1) / 50.0, (hi2 - lo2) / 50.0
        lo1, hi1 = max(best[0] - w1, 1e-9), min(best[0] + w1, 1.0)
        lo2, hi2 = max(best[1] - w2, 1e-9), min(best[1] + w2, 1.0)
    return np.array(best)


# ------------------------------------------------------------- mirror map


def test_mirror_entropic_zero_is_uniform():
    reg = entropic_simplex(3)
    assert np.allclose(mirror_map(reg, np.zeros(3)), np.full(3, 1.0 / 3.0), atol=1e-12)


def test_mirror_entropic_log3_frozen_value():
    # reference oracle: grid search of <y,x> - h(x) over the 2-simplex
    reg = entropic_simplex(2)
    y = np.array([math.log(3.0), 0.0])
    ref = grid_argmax_simplex_2d(lambda x: inner(y, x) - entropy_h(x))
    got = mirror_map(reg, y)
    assert np.allclose(got, ref, atol=1e-3)
    assert np.allclose(got, [0.75, 0.25], atol=1e-12)


def test_mirror_vn_zero_matrix():
    reg = von_neumann_spectrahedron(2)
    got = mirror_map(reg, np.zeros((2, 2)))
    # per-eigenvalue formula e^0 / (1 + 2 e^0)
    assert np.allclose(got, np.eye(2) / 3.0, atol=1e-12)


def test_mirror_vn_diagonal_against_numeric_argmax():
    reg = von_neumann_spectrahedron(2)
    y = np.diag([0.7, -0.4])
    ref = vn_diag_argmax_1d(np.array([0.7, -0.4]))
    got = mirror_map(reg, y)
    assert abs(got[0, 0] - ref[0]) <= 1e-4
    assert abs(got[1, 1] - ref[1]) <= 1e-4
    assert abs(got[0, 1]) <= 1e-12


def test_mirror_unbounded_is_identity():
    reg = euclidean_unbounded(5)
    y = np.array([3.0, -1.0, 0.0, 2.5, -7.0])
    assert np.array_equal(mirror_map(reg, y), y)


def test_mirror_euclidean_set_projects():
    reg = euclidean_simplex(3)
    got = mirror_map(reg, np.array([10.0, 0.0, 0.0]))
    assert np.allclose(got, [1.0, 0.0, 0.0], atol=1e-12)


def test_mirror_rejects_nonfinite():
    reg = entropic_simplex(3)
    with pytest.raises(InvalidInputError):
        mirror_map(reg, np.array([np.inf, 0.0, 0.0]))


def test_mirror_entropic_shift_invariance():
    reg = entropic_simplex(4)
    rng = np.random.default_rng(0)
    for _ in range(100):
        y = rng.standard_normal(4) * 10.0
        shifted = mirror_map(reg, y + 123.456)
        assert np.allclose(mirror_map(reg, y), shifted, atol=1e-12)


def test_mirror_extreme_dual_stays_in_domain():
    reg = entropic_simplex(3)
    x = mirror_map(reg, np.array([1e6, 0.0, -1e6]))
    validate_point(reg, x)
    regv = von_neumann_spectrahedron(3)
    X = mirror_map(regv, np.diag([1e4, 0.0, -1e4]))
    validate_point(regv, X)


# --------------------------------------------------------------- prox map


def test_prox_zero_step_is_identity():
    reg = entropic_simplex(2)
    x = np.array([0.5, 0.5])
    assert np.allclose(prox_map(reg, x, np.zeros(2)), x, atol=1e-12)


def test_prox_multiplicative_weights_frozen_value():
    # closed form x_i exp(v_i) / sum, cross-checked by numeric argmin of
    # <v, x - x'> + D(x', x) over the simplex
    reg = entropic_simplex(2)
    x = np.array([0.5, 0.5])
    v = np.array([math.log(3.0), 0.0])
    got = prox_map(reg, x, v)
    assert np.allclose(got, [0.75, 0.25], atol=1e-12)

    def objective(xp):
        return inner(v, x - xp) + bregman_div(reg, xp, x)

    ref = grid_argmax_simplex_2d(lambda xp: -objective(xp))
    assert np.allclose(got, ref, atol=1e-3)


def test_prox_euclidean_set_hits_vertex():
    reg = euclidean_simplex(3)
    center = np.full(3, 1.0 / 3.0)
    got = prox_map(reg, center, np.array([100.0, 0.0, 0.0]))
    assert np.allclose(got, [1.0, 0.0, 0.0], atol=1e-12)


def test_prox_unbounded_translates():
    reg = euclidean_unbounded(3)
    x = np.array([1.0, 2.0, 3.0])
    v = np.array([0.5, -0.5, 0.0])
    assert np.allclose(prox_map(reg, x, v), x + v, atol=1e-15)


def test_prox_boundary_base_rejected():
    reg = entropic_simplex(2)
    with pytest.raises(DomainError):
        prox_map(reg, np.array([1.0, 0.0]), np.zeros(2))
    regv = von_neumann_spectrahedron(2)
    with pytest.raises(DomainError):
        prox_map(regv, np.diag([1.0, 0.0]), np.zeros((2, 2)))


def test_project_simplex_matches_reference():
    # reference via scipy-free bisection on the dual variable
    def ref_proj(v):
        lo, hi = np.min(v) - 1.0, np.max(v)
        for _ in range(200):
            tau = 0.5 * (lo + hi)
            s = np.sum(np.maximum(v - tau, 0.0))
            if s > 1.0:
                lo = tau
            else:
                hi = tau
        return np.maximum(v - 0.5 * (lo + hi), 0.0)

    rng = np.random.default_rng(1)
    for _ in range(50):
        v = rng.standard_normal(6) * rng.uniform(0.1, 10.0)
        got = project_simplex(v)
        assert np.allclose(got, ref_proj(v), atol=1e-9)
        assert abs(np.sum(got) - 1.0) <= 1e-12
        assert np.min(got) >= 0.0


# ------------------------------------------------------ divergence values


def test_bregman_identity_is_zero():
    for reg in (entropic_simplex(3), euclidean_simplex(3), euclidean_unbounded(3)):
        x = np.full(3, 1.0 / 3.0)
        assert abs(bregman_div(reg, x, x)) <= 1e-15


def test_bregman_is_kl_on_simplex():
    reg = entropic_simplex(2)
    val = bregman_div(reg, np.array([1.0, 0.0]), np.array([0.5, 0.5]))
    assert abs(val - math.log(2.0)) <= 1e-12


def test_bregman_blows_up_like_log_eps():
    reg = entropic_simplex(2)
    p = np.array([1.0, 0.0])
    for eps in (1e-2, 1e-4, 1e-8, 1e-12):
        x = np.array([1.0 - eps, eps])
        # KL((1,0) || (1-eps, eps)) = -log(1-eps)
        assert abs(bregman_div(reg, p, x) - (-math.log1p(-eps))) <= 1e-9


def test_bregman_strong_convexity_sample():
    rng = np.random.default_rng(2)
    reg = entropic_simplex(5)
    for _ in range(200):
        p = rng.dirichlet(np.ones(5))
        x = rng.dirichlet(np.ones(5)) + 1e-9
        x = x / np.sum(x)
        lhs = bregman_div(reg, p, x)
        assert lhs >= 0.5 * reg.K * reg.norms.primal_norm(p - x) ** 2 - 1e-12


# ---------------------------------------------------------- conjugate / F


def test_conjugate_entropic_zero():
    reg = entropic_simplex(2)
    assert abs(conjugate_value(reg, np.zeros(2)) - math.log(2.0)) <= 1e-12


def test_conjugate_unbounded_self():
    reg = euclidean_unbounded(4)
    rng = np.random.default_rng(3)
    for _ in range(20):
        y = rng.standard_normal(4) * 3.0
        assert abs(conjugate_value(reg, y) - 0.5 * float(y @ y)) <= 1e-9


def test_conjugate_is_logsumexp():
    reg = entropic_simplex(3)
    rng = np.random.default_rng(4)
    for _ in range(100):
        y = rng.standard_normal(3) * 5.0
        m = np.max(y)
        lse = m + math.log(np.sum(np.exp(y - m)))
        assert abs(conjugate_value(reg, y) - lse) <= 1e-9


def test_fenchel_zero_at_mirror_point():
    rng = np.random.default_rng(5)
    for reg in (entropic_simplex(4), euclidean_unbounded(4)):
        for _ in range(20):
            y = rng.standard_normal(4)
            assert abs(fenchel_coupling(reg, mirror_map(reg, y), y)) <= 1e-9


def test_fenchel_at_zero_dual_is_h_range():
    reg = entropic_simplex(2)
    val = fenchel_coupling(reg, np.array([1.0, 0.0]), np.zeros(2))
    assert abs(val - math.log(2.0)) <= 1e-12


def test_fenchel_lower_bound_sweep():
    reg = entropic_simplex(5)
    rng = np.random.default_rng(6)
    for _ in range(500):
        p = rng.dirichlet(np.ones(5))
        y = rng.standard_normal(5) * 5.0
        q = mirror_map(reg, y)
        f = fenchel_coupling(reg, p, y)
        assert f - 0.5 * float(np.sum(np.abs(q - p))) ** 2 >= -1e-9


def test_fenchel_equals_bregman_at_mirror_base():
    rng = np.random.default_rng(7)
    reg = entropic_simplex(4)
    for _ in range(100):
        p = rng.dirichlet(np.ones(4))
        y = rng.standard_normal(4) * 3.0
        q = mirror_map(reg, y)
        assert abs(fenchel_coupling(reg, p, y) - bregman_div(reg, p, q)) <= 1e-9


# ---------------------------------------------------------------- ∇h and h


def test_reg_grad_euclidean_identity():
    reg = euclidean_unbounded(3)
    x = np.array([1.0, -2.0, 0.5])
    assert np.array_equal(reg_grad(reg, x), x)


def test_reg_grad_entropic_formula():
    reg = entropic_simplex(2)
    got = reg_grad(reg, np.array([0.5, 0.5]))
    assert np.allclose(got, [1.0 - math.log(2.0)] * 2, atol=1e-12)


def test_reg_grad_matches_finite_differences():
    reg = entropic_simplex(4)
    rng = np.random.default_rng(8)
    h = 1e-6
    for _ in range(20):
        x = rng.dirichlet(np.ones(4)) * 0.9 + 0.025
        g = reg_grad(reg, x)
        for i in range(4):
            e = np.zeros(4)
            e[i] = h
            num = (h_value(reg, x + e) - h_value(reg, x - e)) / (2 * h)
            assert abs(num - g[i]) <= 1e-6 * max(1.0, abs(num))


def test_reg_grad_boundary_rejected():
    with pytest.raises(DomainError):
        reg_grad(entropic_simplex(2), np.array([1.0, 0.0]))
    with pytest.raises(DomainError):
        reg_grad(von_neumann_spectrahedron(2), np.diag([0.5, 0.5]))  # trace 1 boundary


def test_vn_reg_grad_roundtrip():
    reg = von_neumann_spectrahedron(3)
    rng = np.random.default_rng(9)
    for _ in range(20):
        lam = rng.dirichlet(np.ones(4))[:3]
        Q, r = np.linalg.qr(rng.standard_normal((3, 3)))
        X = (Q * lam) @ Q.T
        X = 0.5 * (X + X.T)
        back = mirror_map(reg, reg_grad(reg, X))
        assert np.linalg.norm(back - X) <= 1e-9


# ------------------------------------------------------------- constants


def test_regularizer_constants():
    e = entropic_simplex(10)
    assert (e.K, e.Diam) == (1.0, 1.0)
    assert abs(e.Omega - math.log(10.0)) <= 1e-15
    v = von_neumann_spectrahedron(4)
    assert abs(v.Omega - math.log(4.0)) <= 1e-15
    assert abs(range_of(v) - math.log(5.0)) <= 1e-15
    u = euclidean_simplex(10)
    assert abs(u.Omega - 0.5 * (1.0 - 0.1)) <= 1e-15
    assert abs(u.Diam - math.sqrt(2.0)) <= 1e-15
    un = euclidean_unbounded(3)
    assert math.isinf(un.Omega) and math.isinf(un.Diam)
    assert np.array_equal(un.prox_center, np.zeros(3))


def test_prox_center_is_mirror_of_zero():
    for reg in (
        entropic_simplex(6),
        von_neumann_spectrahedron(3),
        euclidean_simplex(6),
        euclidean_unbounded(6),
    ):
        z = np.zeros((reg.side, reg.side)) if reg.geometry == "von-neumann-spectrahedron" else np.zeros(reg.dim)
        assert np.allclose(mirror_map(reg, z), reg.prox_center, atol=1e-12)


def test_h_range_matches_omega():
    reg = entropic_simplex(7)
    lo = h_value(reg, reg.prox_center)
    hi = h_value(reg, np.eye(7)[0])
    assert abs((hi - lo) - reg.Omega) <= 1e-12


def test_invalid_construction():
    with pytest.raises(InvalidInputError):
        entropic_simplex(0)
    with pytest.raises(InvalidInputError):
        von_neumann_spectrahedron(0)


def test_validate_point_tolerances():
    reg = entropic_simplex(3)
    validate_point(reg, np.array([0.5, 0.5, -1e-13]))
    with pytest.raises(DomainError):
        validate_point(reg, np.array([0.6, 0.5, -0.1]))
    regv = von_neumann_spectrahedron(2)
    validate_point(regv, np.diag([0.4, 0.4]))
    with pytest.raises(DomainError):
        validate_point(regv, np.diag([0.9, 0.9]))


# ------------------------------------------------------------- properties


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_property_mirror_optimality(seed):
    """Q(y) maximizes <y,x> - h(x): no sampled point does better."""
    rng = np.random.default_rng(seed)
    reg = entropic_simplex(4)
    y = rng.standard_normal(4) * 4.0
    q = mirror_map(reg, y)
    best = inner(y, q) - h_value(reg, q)
    for _ in range(10):
        x = rng.dirichlet(np.ones(4))
        assert inner(y, x) - h_value(reg, x) <= best + 1e-9


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_property_three_point_identity(seed):
    rng = np.random.default_rng(seed)
    reg = entropic_simplex(3)
    p = rng.dirichlet(np.ones(3))
    y = rng.standard_normal(3) * 3.0
    y_plus = rng.standard_normal(3) * 3.0
    q = mirror_map(reg, y)
    lhs = fenchel_coupling(reg, p, y_plus)
    rhs = fenchel_coupling(reg, p, y) + fenchel_coupling(reg, q, y_plus) + inner(y_plus - y, q - p)
    assert abs(lhs - rhs) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_property_mirror_prox_equivalence(seed):
    """Q(y) = prox(center, y - grad h(center)) for interior prox centers."""
    rng = np.random.default_rng(seed)
    for reg in (entropic_simplex(4), euclidean_simplex(4)):
        y = rng.standard_normal(4) * 3.0
        direct = mirror_map(reg, y)
        via_prox = prox_map(reg, reg.prox_center, y - reg_grad(reg, reg.prox_center))
        assert np.allclose(direct, via_prox, atol=1e-9)

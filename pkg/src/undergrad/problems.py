"""Benchmark objectives with known constants and reference optima.

Each constructor returns a :class:`ProblemInstance` whose gradient bound G,
smoothness modulus L, and optimal value f_min are exact (up to a documented
1e-9 slack on the log-det channel problem, whose optimum comes from a
water-filling closed form). Infinite G or L means "not bounded / not smooth"
in the pairing of the attached geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidInputError
from .geometry import (
    ENTROPIC_SIMPLEX,
    EUCLIDEAN_SET,
    VON_NEUMANN_SPECTRAHEDRON,
    Regularizer,
    entropic_simplex,
    euclidean_simplex,
    euclidean_unbounded,
    von_neumann_spectrahedron,
)
from .symlinalg import matrix_fn, sym_eig, sym_eig_batch, sym_logdet_grad

CAPACITY_FMIN_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    name: str
    regularizer: Regularizer
    objective: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    G: float
    L: float
    f_min: float
    x_star: np.ndarray | None = None
    # Optional vectorized paths over a leading sample axis, used by the
    # statistical self-test to keep large sweeps fast.
    objective_batch: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    gradient_batch: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def gap(self, x: np.ndarray) -> float:
        return self.objective(x) - self.f_min


def make_linear_simplex(d: int, seed: int = 0) -> ProblemInstance:
    """min <c, x> over the simplex, c ~ uniform[0, 1)^d, entropic geometry."""
    if d < 2:
        raise InvalidInputError("need dimension >= 2")
    rng = np.random.default_rng(seed)
    c = rng.uniform(0.0, 1.0, size=d)
    c.setflags(write=False)
    i_star = int(np.argmin(c))
    x_star = np.zeros(d)
    x_star[i_star] = 1.0

    def objective(x: np.ndarray) -> float:
        return float(c @ x)

    def gradient(x: np.ndarray) -> np.ndarray:
        return c

    return ProblemInstance(
        name="linear_simplex",
        regularizer=entropic_simplex(d),
        objective=objective,
        gradient=gradient,
        G=float(np.max(np.abs(c))),
        L=0.0,
        f_min=float(c[i_star]),
        x_star=x_star,
        objective_batch=lambda X: X @ c,
        gradient_batch=lambda X: np.broadcast_to(c, X.shape),
    )


def make_quadratic_simplex(d: int, seed: int = 0, geometry: str = "entropic") -> ProblemInstance:
    """min (1/2)||x - p||_2^2 over the simplex with p an interior point."""
    if d < 2:
        raise InvalidInputError("need dimension >= 2")
    if geometry not in ("entropic", "euclidean"):
        raise InvalidInputError(f"unknown geometry choice {geometry!r}")
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(d))
    p.setflags(write=False)
    if geometry == "entropic":
        reg = entropic_simplex(d)
        G = 1.0  # sup ||x - p||_inf over the simplex, p interior
    else:
        reg = euclidean_simplex(d)
        G = math.sqrt(2.0)  # sup ||x - p||_2 <= simplex diameter

    def objective(x: np.ndarray) -> float:
        r = x - p
        return 0.5 * float(np.vdot(r, r))

    def gradient(x: np.ndarray) -> np.ndarray:
        return x - p

    return ProblemInstance(
        name="quadratic_simplex",
        regularizer=reg,
        objective=objective,
        gradient=gradient,
        G=G,
        L=1.0,
        f_min=0.0,
        x_star=p.copy(),
        objective_batch=lambda X: 0.5 * np.sum((X - p) ** 2, axis=-1),
        gradient_batch=lambda X: X - p,
    )


def water_filling(m: np.ndarray, budget: float = 1.0) -> np.ndarray:
    """Allocation q >= 0, sum q = budget, maximizing sum log(1 + m_i q_i).

    KKT: active coordinates satisfy q_i = 1/nu - 1/m_i with the water level
    nu = k / (budget + sum_{active} 1/m_i) for the top-k modes.
    """
    m = np.asarray(m, dtype=float)
    if np.any(m < -1e-12):
        raise InvalidInputError("negative mode gains")
    m = np.maximum(m, 0.0)
    order = np.argsort(m)[::-1]
    ms = m[order]
    npos = int(np.sum(ms > 0.0))
    q = np.zeros_like(m)
    if npos == 0:
        return q
    inv_cum = np.cumsum(1.0 / ms[:npos])
    for k in range(npos, 0, -1):
        nu = k / (budget + inv_cum[k - 1])
        if ms[k - 1] > nu:
            qs = np.maximum(1.0 / nu - 1.0 / ms[:k], 0.0)
            q[order[:k]] = qs
            return q
    raise InvalidInputError("water-filling failed to find a level")


def make_capacity_spectrahedron(n: int, seed: int = 0) -> ProblemInstance:
    """min -log det(I + M^(1/2) Q M^(1/2)) over the spectrahedron.

    M = H^T H with H entries N(0, 1/n). Since det(I + R Q R) = det(I + Q M),
    the optimum commutes with M and reduces to water-filling over the
    eigenvalues of M; f_min carries a 1e-9 slack so the reported gap stays
    positive under eigensolver roundoff.
    """
    if n < 2:
        raise InvalidInputError("need side >= 2")
    rng = np.random.default_rng(seed)
    H = rng.standard_normal((n, n)) / math.sqrt(n)
    M = H.T @ H
    M = 0.5 * (M + M.T)
    R = matrix_fn(M, lambda w: np.sqrt(np.maximum(w, 0.0)))
    dec = sym_eig(M)
    lam_max = float(dec.eigenvalues[0])

    q_opt = water_filling(np.maximum(dec.eigenvalues, 0.0))
    value_opt = float(np.sum(np.log1p(np.maximum(dec.eigenvalues, 0.0) * q_opt)))
    x_star = (dec.eigenvectors * q_opt) @ dec.eigenvectors.T
    x_star = 0.5 * (x_star + x_star.T)

    eye = np.eye(n)

    def _inner_matrix(x: np.ndarray) -> np.ndarray:
        a = eye + R @ x @ R
        return 0.5 * (a + a.T)

    def objective(x: np.ndarray) -> float:
        w = sym_eig(_inner_matrix(x)).eigenvalues
        if w[-1] <= 0.0:
            raise DomainError("I + R x R is not positive definite")
        return -float(np.sum(np.log(w)))

    def gradient(x: np.ndarray) -> np.ndarray:
        inv = sym_logdet_grad(_inner_matrix(x))
        g = -R @ inv @ R
        return 0.5 * (g + g.T)

    def objective_batch(X: np.ndarray) -> np.ndarray:
        A = np.einsum("ij,mjk,kl->mil", R, X, R)
        A = 0.5 * (A + np.transpose(A, (0, 2, 1))) + eye
        w, _ = sym_eig_batch(A)
        if np.any(w[:, -1] <= 0.0):
            raise DomainError("I + R x R is not positive definite")
        return -np.sum(np.log(w), axis=1)

    def gradient_batch(X: np.ndarray) -> np.ndarray:
        A = np.einsum("ij,mjk,kl->mil", R, X, R)
        A = 0.5 * (A + np.transpose(A, (0, 2, 1))) + eye
        w, V = sym_eig_batch(A)
        if np.any(w[:, -1] <= 0.0):
            raise DomainError("I + R x R is not positive definite")
        inv = (V / w[:, None, :]) @ np.transpose(V, (0, 2, 1))
        G = -np.einsum("ij,mjk,kl->mil", R, inv, R)
        return 0.5 * (G + np.transpose(G, (0, 2, 1)))

    return ProblemInstance(
        name="capacity_spectrahedron",
        regularizer=von_neumann_spectrahedron(n),
        objective=objective,
        gradient=gradient,
        G=lam_max,
        L=lam_max**2,
        f_min=-value_opt - CAPACITY_FMIN_SLACK,
        x_star=x_star,
        objective_batch=objective_batch,
        gradient_batch=gradient_batch,
    )


def make_quadratic_unbounded(d: int, seed: int = 0) -> ProblemInstance:
    """min (1/2)(x - b)^T A (x - b) over R^d, A random SPD with cond <= 10."""
    if d < 1:
        raise InvalidInputError("need dimension >= 1")
    rng = np.random.default_rng(seed)
    lam = 1.0 + 9.0 * rng.uniform(size=d)
    Q, r = np.linalg.qr(rng.standard_normal((d, d)))
    Q = Q * np.where(np.diag(r) >= 0.0, 1.0, -1.0)
    A = (Q * lam) @ Q.T
    A = 0.5 * (A + A.T)
    b = rng.standard_normal(d)
    b.setflags(write=False)

    def objective(x: np.ndarray) -> float:
        r = x - b
        return 0.5 * float(r @ A @ r)

    def gradient(x: np.ndarray) -> np.ndarray:
        return A @ (x - b)

    return ProblemInstance(
        name="quadratic_unbounded",
        regularizer=euclidean_unbounded(d),
        objective=objective,
        gradient=gradient,
        G=math.inf,
        L=float(np.max(lam)),
        f_min=0.0,
        x_star=b.copy(),
        objective_batch=lambda X: 0.5 * np.einsum("mi,ij,mj->m", X - b, A, X - b),
        gradient_batch=lambda X: (X - b) @ A,
    )


def sample_domain(reg: Regularizer, rng: np.random.Generator, count: int) -> np.ndarray:
    """Random points from the regularizer's domain, interior almost surely."""
    if reg.geometry in (ENTROPIC_SIMPLEX, EUCLIDEAN_SET):
        return rng.dirichlet(np.ones(reg.dim), size=count)
    if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
        n = reg.side
        lam = rng.dirichlet(np.ones(n + 1), size=count)[:, :n]
        Z = rng.standard_normal((count, n, n))
        Q, r = np.linalg.qr(Z)
        signs = np.sign(np.einsum("mii->mi", r))
        signs[signs == 0.0] = 1.0
        Q = Q * signs[:, None, :]
        X = np.einsum("mij,mj,mkj->mik", Q, lam, Q)
        return 0.5 * (X + np.transpose(X, (0, 2, 1)))
    return rng.standard_normal((count, reg.dim)) * 3.0


def self_test(
    problem: ProblemInstance,
    rng: np.random.Generator,
    n_grad_points: int = 100,
    n_samples: int = 10_000,
    fd_step: float = 1e-6,
) -> dict[str, float]:
    """Statistical invariant battery; returns worst observed discrepancies.

    Keys: ``grad_err`` (central finite differences along random directions vs
    <grad, direction>, relative), ``min_gap`` (f - f_min over domain samples),
    ``g_excess`` (dual gradient norm minus G), ``l_excess`` (Lipschitz ratio
    minus L on sample pairs). Infinite G or L skips the matching check.
    """
    reg = problem.regularizer
    grad_err = 0.0
    for x in sample_domain(reg, rng, n_grad_points):
        g = problem.gradient(x)
        for _ in range(4):
            direction = rng.standard_normal(x.shape)
            if x.ndim == 2:
                direction = 0.5 * (direction + direction.T)
            direction /= math.sqrt(float(np.vdot(direction, direction)))
            fd = (problem.objective(x + fd_step * direction) - problem.objective(x - fd_step * direction)) / (
                2.0 * fd_step
            )
            ref = float(np.vdot(g, direction))
            grad_err = max(grad_err, abs(fd - ref) / (1.0 + abs(ref)))

    X = sample_domain(reg, rng, n_samples)
    if problem.objective_batch is not None:
        values = np.asarray(problem.objective_batch(X), dtype=float)
    else:
        values = np.array([problem.objective(x) for x in X])
    min_gap = float(np.min(values) - problem.f_min)

    g_excess = -math.inf
    l_excess = -math.inf
    if problem.gradient_batch is not None:
        grads = np.asarray(problem.gradient_batch(X), dtype=float)
    else:
        grads = np.stack([problem.gradient(x) for x in X])
    if math.isfinite(problem.G):
        g_excess = float(np.max(_dual_norms_batch(reg, grads)) - problem.G)
    if math.isfinite(problem.L):
        half = n_samples // 2
        dual = _dual_norms_batch(reg, grads[:half] - grads[half : 2 * half])
        primal = _primal_norms_batch(reg, X[:half] - X[half : 2 * half])
        keep = primal > 1e-12
        if np.any(keep):
            l_excess = float(np.max(dual[keep] / primal[keep]) - problem.L)

    return {"grad_err": grad_err, "min_gap": min_gap, "g_excess": g_excess, "l_excess": l_excess}


def _primal_norms_batch(reg: Regularizer, A: np.ndarray) -> np.ndarray:
    if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
        w, _ = sym_eig_batch(A)
        return np.sum(np.abs(w), axis=1)
    if reg.norms.name == "L1/Linf":
        return np.sum(np.abs(A), axis=1)
    return np.sqrt(np.sum(A * A, axis=1))


def _dual_norms_batch(reg: Regularizer, A: np.ndarray) -> np.ndarray:
    if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
        w, _ = sym_eig_batch(A)
        return np.max(np.abs(w), axis=1)
    if reg.norms.name == "L1/Linf":
        return np.max(np.abs(A), axis=1)
    return np.sqrt(np.sum(A * A, axis=1))

"""Bregman regularizers, mirror maps, prox-mappings, and Fenchel couplings.

Four geometries are supported:

* ``entropic-simplex``: negative entropy over the probability simplex,
  paired norms (L1, Linf).
* ``von-neumann-spectrahedron``: quantum entropy over the set of symmetric
  PSD matrices with trace at most one, paired norms (nuclear, spectral).
* ``euclidean-set``: half squared norm over the simplex with Euclidean
  projection, paired norms (L2, L2).
* ``euclidean-unbounded``: half squared norm over all of R^d.

All operations are pure functions of immutable inputs and safe to share
across worker threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidInputError
from .symlinalg import check_symmetric, sym_eig

ENTROPIC_SIMPLEX = "entropic-simplex"
VON_NEUMANN_SPECTRAHEDRON = "von-neumann-spectrahedron"
EUCLIDEAN_SET = "euclidean-set"
EUCLIDEAN_UNBOUNDED = "euclidean-unbounded"

GEOMETRIES = (
    ENTROPIC_SIMPLEX,
    VON_NEUMANN_SPECTRAHEDRON,
    EUCLIDEAN_SET,
    EUCLIDEAN_UNBOUNDED,
)

# Entropic prox-mappings demand strictly positive base points; below this the
# divergence is numerically meaningless, so we refuse instead of clamping.
PROX_DOMAIN_FLOOR = 1e-300

POINT_TOL = 1e-12
EIGENVALUE_TOL = 1e-10


def inner(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean pairing; doubles as the trace pairing for matrices."""
    return float(np.vdot(a, b))


def _l1(x: np.ndarray) -> float:
    return float(np.sum(np.abs(x)))


def _linf(v: np.ndarray) -> float:
    return float(np.max(np.abs(v)))


def _l2(x: np.ndarray) -> float:
    return float(np.sqrt(np.vdot(x, x)))


def _nuclear(x: np.ndarray) -> float:
    return float(np.sum(np.abs(sym_eig(x).eigenvalues)))


def _spectral(v: np.ndarray) -> float:
    return float(np.max(np.abs(sym_eig(v).eigenvalues)))


@dataclass(frozen=True, eq=False)
class NormPair:
    """A primal norm together with its dual norm."""

    name: str
    primal_norm: Callable[[np.ndarray], float]
    dual_norm: Callable[[np.ndarray], float]


L1_LINF = NormPair("L1/Linf", _l1, _linf)
L2_L2 = NormPair("L2/L2", _l2, _l2)
NUCLEAR_SPECTRAL = NormPair("nuclear/spectral", _nuclear, _spectral)


@dataclass(frozen=True, eq=False)
class Regularizer:
    """A Bregman regularizer bundle.

    ``dim`` is the ambient dimension (n*n for the spectrahedron, whose matrix
    side is kept in ``side``). ``K`` is the strong-convexity modulus, ``Omega``
    the stored range constant, and ``Diam`` the domain diameter in the primal
    norm; the last two may be infinite for unbounded domains.
    """

    geometry: str
    dim: int
    side: int | None
    K: float
    Omega: float
    Diam: float
    norms: NormPair
    prox_center: np.ndarray


def entropic_simplex(d: int) -> Regularizer:
    if d < 2:
        raise InvalidInputError("simplex geometry needs dimension >= 2")
    return Regularizer(
        geometry=ENTROPIC_SIMPLEX,
        dim=d,
        side=None,
        K=1.0,
        Omega=math.log(d),
        Diam=1.0,
        norms=L1_LINF,
        prox_center=np.full(d, 1.0 / d),
    )


def von_neumann_spectrahedron(n: int) -> Regularizer:
    if n < 2:
        raise InvalidInputError("spectrahedron geometry needs side >= 2")
    return Regularizer(
        geometry=VON_NEUMANN_SPECTRAHEDRON,
        dim=n * n,
        side=n,
        # Stored range convention log n; the exact analytic range is
        # log(n + 1), which range_of reports for the inequality checkers.
        K=1.0,
        Omega=math.log(n),
        Diam=1.0,
        norms=NUCLEAR_SPECTRAL,
        prox_center=np.eye(n) / (n + 1.0),
    )


def euclidean_simplex(d: int) -> Regularizer:
    if d < 2:
        raise InvalidInputError("simplex geometry needs dimension >= 2")
    return Regularizer(
        geometry=EUCLIDEAN_SET,
        dim=d,
        side=None,
        K=1.0,
        Omega=0.5 * (1.0 - 1.0 / d),
        Diam=math.sqrt(2.0),
        norms=L2_L2,
        prox_center=np.full(d, 1.0 / d),
    )


def euclidean_unbounded(d: int) -> Regularizer:
    if d < 1:
        raise InvalidInputError("dimension must be positive")
    return Regularizer(
        geometry=EUCLIDEAN_UNBOUNDED,
        dim=d,
        side=None,
        K=1.0,
        Omega=math.inf,
        Diam=math.inf,
        norms=L2_L2,
        prox_center=np.zeros(d),
    )


def range_of(reg: Regularizer) -> float:
    """Exact range max h - min h of the regularizer over its domain."""
    if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
        return math.log(reg.side + 1.0)
    return reg.Omega


def _check_finite(a: np.ndarray, what: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{what} has non-finite entries")
    return a


def validate_dual(reg: Regularizer, y: np.ndarray) -> np.ndarray:
    y = _check_finite(y, "dual vector")
    if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
        return check_symmetric(y)
    if y.shape != (reg.dim,):
        raise InvalidInputError(f"expected shape ({reg.dim},), got {y.shape}")
    return y


def validate_point(reg: Regularizer, x: np.ndarray) -> np.ndarray:
    """Check the domain invariants of a primal point."""
    x = _check_finite(x, "point")
    if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
        x = check_symmetric(x)
        w = sym_eig(x).eigenvalues
        if w[-1] < -EIGENVALUE_TOL:
            raise DomainError("matrix point has a negative eigenvalue")
        if float(np.trace(x)) > 1.0 + POINT_TOL:
            raise DomainError("matrix point exceeds unit trace")
        return x
    if x.shape != (reg.dim,):
        raise InvalidInputError(f"expected shape ({reg.dim},), got {x.shape}")
    if reg.geometry in (ENTROPIC_SIMPLEX, EUCLIDEAN_SET):
        if np.min(x) < -POINT_TOL or abs(float(np.sum(x)) - 1.0) > POINT_TOL:
            raise DomainError("point is not on the probability simplex")
    return x


def _xlogx(w: np.ndarray) -> np.ndarray:
    out = np.zeros_like(w)
    pos = w > 0.0
    out[pos] = w[pos] * np.log(w[pos])
    return out


def _entropy_terms(w: np.ndarray) -> float:
    total = float(np.sum(w))
    rest = 1.0 - total
    value = float(np.sum(_xlogx(w)))
    if rest > 0.0:
        value += rest * math.log(rest)
    return value


def h_value(reg: Regularizer, x: np.ndarray) -> float:
    """Evaluate the regularizer itself (boundary points allowed)."""
    if reg.geometry == ENTROPIC_SIMPLEX:
        if np.min(x) < -POINT_TOL:
            raise DomainError("negative entry")
        return float(np.sum(_xlogx(np.maximum(x, 0.0))))
    if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
        w = sym_eig(x).eigenvalues
        if w[-1] < -EIGENVALUE_TOL:
            raise DomainError("negative eigenvalue")
        return _entropy_terms(np.maximum(w, 0.0))
    return 0.5 * float(np.vdot(x, x))


def project_simplex(y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the unit simplex (sort and threshold)."""
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, y.size + 1)
    rho = np.nonzero(u - css / ks > 0.0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(y - theta, 0.0)


def mirror_map(reg: Regularizer, y: np.ndarray) -> np.ndarray:
    """Maximizer of <y, x> - h(x) over the domain."""
    y = validate_dual(reg, y)
    if reg.geometry == ENTROPIC_SIMPLEX:
        z = np.exp(y - np.max(y))
        return z / np.sum(z)
    if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
        dec = sym_eig(y)
        m = dec.eigenvalues[0]
        if m <= 0.0:
            # exponents already <= 0, no shift needed
            e = np.exp(dec.eigenvalues)
            q = e / (1.0 + np.sum(e))
        else:
            e = np.exp(dec.eigenvalues - m)
            q = e / (math.exp(-m) + np.sum(e))
        V = dec.eigenvectors
        out = (V * q) @ V.T
        return 0.5 * (out + out.T)
    if reg.geometry == EUCLIDEAN_SET:
        return project_simplex(y)
    return y.copy()


def reg_grad(reg: Regularizer, x: np.ndarray) -> np.ndarray:
    """Continuous gradient selection of h at an interior point."""
    x = validate_point(reg, x)
    if reg.geometry == ENTROPIC_SIMPLEX:
        if np.min(x) < PROX_DOMAIN_FLOOR:
            raise DomainError("point is on the boundary of the simplex")
        return 1.0 + np.log(x)
    if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
        dec = sym_eig(x)
        rest = 1.0 - float(np.sum(dec.eigenvalues))
        if dec.eigenvalues[-1] < PROX_DOMAIN_FLOOR or rest < PROX_DOMAIN_FLOOR:
            raise DomainError("matrix point is on the boundary of the spectrahedron")
        V = dec.eigenvectors
        out = (V * np.log(dec.eigenvalues)) @ V.T
        out = 0.5 * (out + out.T)
        return out - math.log(rest) * np.eye(reg.side)
    return x.copy()


def in_prox_domain(reg: Regularizer, x: np.ndarray) -> bool:
    try:
        reg_grad(reg, x)
    except (DomainError, InvalidInputError):
        return False
    return True


def prox_map(reg: Regularizer, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Minimizer of <v, x - x'> + D(x', x) over the domain.

    For the entropic geometry this is the multiplicative-weights update
    x'_i proportional to x_i * exp(v_i), evaluated in log space.
    """
    v = validate_dual(reg, v)
    if reg.geometry == EUCLIDEAN_SET:
        x = validate_point(reg, x)
        return project_simplex(x + v)
    if reg.geometry == EUCLIDEAN_UNBOUNDED:
        x = _check_finite(x, "point")
        return x + v
    # Legendre geometries: walk through the dual space.
    return mirror_map(reg, reg_grad(reg, x) + v)


def bregman_div(reg: Regularizer, p: np.ndarray, x: np.ndarray) -> float:
    """h(p) - h(x) - <grad h(x), p - x>; nonnegative by convexity."""
    g = reg_grad(reg, x)
    p = validate_point(reg, p)
    return h_value(reg, p) - h_value(reg, x) - inner(g, p - x)


def conjugate_value(reg: Regularizer, y: np.ndarray) -> float:
    """h*(y) = <y, Q(y)> - h(Q(y)); finite for every finite y."""
    q = mirror_map(reg, y)
    return inner(y, q) - h_value(reg, q)


def fenchel_coupling(reg: Regularizer, p: np.ndarray, y: np.ndarray) -> float:
    """F(p, y) = h(p) + h*(y) - <y, p>; zero iff p = Q(y)."""
    p = validate_point(reg, p)
    return h_value(reg, p) + conjugate_value(reg, y) - inner(y, p)

"""First-order oracles with hard-bounded, zero-mean noise.

Every noise draw U satisfies ||U||_* <= sigma exactly, where ||.||_* is the
dual norm of the regularizer the oracle is attached to. The supported kinds:

* ``none``: exact gradients.
* ``coordinate_rademacher``: independent +/- sigma signs per coordinate
  (Linf radius sigma).
* ``spherical_uniform``: sigma * r * u with r uniform on [0, 1] and u uniform
  on the unit sphere (L2 radius sigma).
* ``spectral_rademacher``: sigma * R diag(eps) R^T with R Haar-orthogonal and
  eps independent signs (spectral radius exactly sigma).
* ``truncated_normal``: N(0, (sigma/3)^2) entries, radially rescaled onto the
  dual-norm ball of radius sigma when the draw lands outside. Radial clipping
  of a sign-symmetric law keeps the mean at zero.

A single generator drives all draws of a run, so integer and half-integer
queries consume one interleaved stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidInputError
from .geometry import (
    ENTROPIC_SIMPLEX,
    VON_NEUMANN_SPECTRAHEDRON,
    Regularizer,
    validate_point,
)

NOISE_KINDS = (
    "none",
    "coordinate_rademacher",
    "spherical_uniform",
    "spectral_rademacher",
    "truncated_normal",
)


@dataclass(frozen=True)
class NoiseModel:
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in NOISE_KINDS:
            raise InvalidInputError(f"unknown noise kind {self.kind!r}")


def default_noise_model(reg: Regularizer) -> NoiseModel:
    """The natural hard-bounded law for each geometry's dual ball."""
    if reg.geometry == ENTROPIC_SIMPLEX:
        return NoiseModel("coordinate_rademacher")
    if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
        return NoiseModel("spectral_rademacher")
    return NoiseModel("spherical_uniform")


def derive_stream(base_seed: int, run_index: int) -> np.random.Generator:
    """Independent generator for run ``run_index`` of a seed family."""
    return np.random.default_rng(np.random.SeedSequence([base_seed, run_index]))


def _haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * np.where(d >= 0.0, 1.0, -1.0)


def _draw(model: NoiseModel, sigma: float, reg: Regularizer, rng: np.random.Generator) -> np.ndarray:
    if model.kind == "coordinate_rademacher":
        return sigma * (2.0 * rng.integers(0, 2, size=reg.dim) - 1.0)
    if model.kind == "spherical_uniform":
        u = rng.standard_normal(reg.dim)
        nrm = float(np.sqrt(np.vdot(u, u)))
        while nrm == 0.0:
            u = rng.standard_normal(reg.dim)
            nrm = float(np.sqrt(np.vdot(u, u)))
        return (sigma * rng.uniform() / nrm) * u
    if model.kind == "spectral_rademacher":
        n = reg.side
        eps = 2.0 * rng.integers(0, 2, size=n) - 1.0
        R = _haar_orthogonal(n, rng)
        out = (R * (sigma * eps)) @ R.T
        return 0.5 * (out + out.T)
    if model.kind == "truncated_normal":
        if reg.geometry == VON_NEUMANN_SPECTRAHEDRON:
            n = reg.side
            z = rng.standard_normal((n, n)) * (sigma / 3.0)
            u = 0.5 * (z + z.T)
        else:
            u = rng.standard_normal(reg.dim) * (sigma / 3.0)
        nrm = reg.norms.dual_norm(u)
        if nrm > sigma:
            u = u * (sigma / nrm)
        return u
    raise InvalidInputError(f"unknown noise kind {model.kind!r}")


class OracleHandle:
    """Stochastic first-order oracle bound to one run's random stream."""

    def __init__(
        self,
        gradient: Callable[[np.ndarray], np.ndarray],
        regularizer: Regularizer,
        sigma: float = 0.0,
        noise: NoiseModel | None = None,
        rng: np.random.Generator | None = None,
    ) -> None:
        if not np.isfinite(sigma) or sigma < 0.0:
            raise InvalidInputError("sigma must be finite and nonnegative")
        if noise is None:
            noise = NoiseModel("none") if sigma == 0.0 else default_noise_model(regularizer)
        if sigma > 0.0 and noise.kind == "none":
            raise InvalidInputError("positive sigma needs a noise kind")
        self.gradient = gradient
        self.regularizer = regularizer
        self.sigma = float(sigma)
        self.noise = noise
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.query_count = 0

    def query(self, x: np.ndarray) -> np.ndarray:
        x = validate_point(self.regularizer, x)
        g = np.asarray(self.gradient(x), dtype=float)
        if self.sigma > 0.0 and self.noise.kind != "none":
            g = g + _draw(self.noise, self.sigma, self.regularizer, self.rng)
        self.query_count += 1
        return g

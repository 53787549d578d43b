"""Reproducible initial-condition sampling for the three measures of
interest: a fixed base point with a directional law, the phase-space volume
measure on the torus minus the obstacle, and the collision (boundary)
measure weighted by the incidence cosine.

All randomness flows through counter-based Philox streams keyed by
(seed, stream_id): every draw is a pure function of the key and counter, so
fan-out across any number of workers cannot change the sampled values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .asymptotics import sphere_area, vol_ball
from .errors import ConfigError, InvalidBasePointError
from .geometry import LatticeConfig

__all__ = [
    "DEFAULT_XI_CAP",
    "EnsembleKind",
    "EnsembleSpec",
    "RngStream",
    "measure_normalizers",
    "sample_direction_uniform",
    "sample_fixed_point",
    "sample_phase",
    "sample_boundary",
    "draw_queries",
    "default_t_max",
]

DEFAULT_XI_CAP = 100.0

_REJECTION_GUARD = 1_000_000


class EnsembleKind(str, Enum):
    FIXED_POINT = "fixed"
    PHASE = "phase"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class RngStream:
    """One reproducible random stream: Philox keyed by (seed, stream_id).

    The output sequence is a pure function of (seed, stream_id, counter);
    distinct stream_ids give statistically independent streams.
    """

    seed: int
    stream_id: int
    counter: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= value < 2**64:
                raise ConfigError(f"{name} must fit in 64 bits")
        if not 0 <= self.counter < 2**128:
            raise ConfigError("counter must fit in 128 bits")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        counter = np.array(
            [self.counter & (2**64 - 1), self.counter >> 64, 0, 0], dtype=np.uint64
        )
        return np.random.Generator(np.random.Philox(counter=counter, key=key))


def measure_normalizers(config: LatticeConfig):
    """(c_mu, c_nu): normalization constants of the volume measure on the
    punctured phase space and of the cosine-weighted boundary measure,

        c_mu = 1 / ((1 - r^d |B^d|) |S^(d-1)|)
        c_nu = 1 / (r^(d-1) |S^(d-1)| |B^(d-1)|)
    """
    d, r = config.d, config.r
    c_mu = 1.0 / ((1.0 - r**d * vol_ball(d)) * sphere_area(d))
    c_nu = 1.0 / (r ** (d - 1) * sphere_area(d) * vol_ball(d - 1))
    return c_mu, c_nu


@dataclass(frozen=True)
class EnsembleSpec:
    """Which initial-condition measure is sampled.

    ``directional_density`` (fixed-point ensemble only) is a bounded
    continuous density on the unit sphere, supplied together with an upper
    bound used as the rejection envelope; None means the uniform law.
    """

    kind: EnsembleKind
    base_point: Optional[np.ndarray] = None
    directional_density: Optional[Callable[[np.ndarray], np.ndarray]] = None
    density_bound: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind(self.kind))
        if self.kind == EnsembleKind.FIXED_POINT and self.base_point is None:
            raise ConfigError("fixed-point ensemble requires a base point")
        if self.directional_density is not None:
            if self.kind != EnsembleKind.FIXED_POINT:
                raise ConfigError("custom directional laws apply to the fixed-point ensemble")
            if self.density_bound is None or self.density_bound <= 0.0:
                raise ConfigError("a positive sup bound for the density is required")


def default_t_max(config: LatticeConfig, xi_cap: float = DEFAULT_XI_CAP) -> float:
    """Flight cap making the scaled path length xi top out at xi_cap."""
    if config.r <= 0.0:
        raise ConfigError("ensembles need a positive obstacle radius")
    return xi_cap * config.r ** -(config.d - 1)


def _as_generator(rng) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngStream) else rng


def sample_direction_uniform(rng, d: int, n: Optional[int] = None) -> np.ndarray:
    """Uniform directions on the unit sphere in R^d (normalized Gaussians)."""
    if d < 2:
        raise ConfigError("need d >= 2")
    gen = _as_generator(rng)
    count = 1 if n is None else int(n)
    g = gen.normal(size=(count, d))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms < 1e-12):  # astronomically rare; keeps the law exact
        bad = norms < 1e-12
        g[bad] = gen.normal(size=(int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1)
    v = g / norms[:, None]
    return v[0] if n is None else v


def _sample_directions_rejection(gen, d, n, density, bound):
    out = np.empty((n, d))
    filled = 0
    for _ in range(_REJECTION_GUARD):
        if filled >= n:
            break
        need = n - filled
        v = sample_direction_uniform(gen, d, need)
        f = np.asarray(density(v), dtype=np.float64)
        if np.any(f > bound * (1.0 + 1e-12)):
            raise ConfigError("directional density exceeds its declared sup bound")
        u = gen.random(need)
        acc = v[u * bound <= f]
        take = min(acc.shape[0], need)
        out[filled : filled + take] = acc[:take]
        filled += take
    if filled < n:
        raise ConfigError("rejection sampling did not terminate (bound far above density?)")
    return out


def sample_fixed_point(spec: EnsembleSpec, config: LatticeConfig, rng, n: int):
    """(q, v) batch with q fixed at spec.base_point and v drawn from the
    directional law (uniform, or rejection against the supplied density)."""
    if spec.kind != EnsembleKind.FIXED_POINT:
        raise ConfigError("spec.kind must be fixed")
    q0 = np.asarray(spec.base_point, dtype=np.float64).reshape(config.d)
    dist = config.distance_to_obstacle_centers(q0)
    if dist <= config.r:
        raise InvalidBasePointError(
            f"base point at distance {dist} <= r = {config.r} from a lattice point"
        )
    gen = _as_generator(rng)
    if spec.directional_density is None:
        v = sample_direction_uniform(gen, config.d, n)
    else:
        v = _sample_directions_rejection(
            gen, config.d, n, spec.directional_density, float(spec.density_bound)
        )
    q = np.broadcast_to(q0, (n, config.d)).copy()
    return q, v


def sample_phase(config: LatticeConfig, rng, n: int):
    """(q, v) batch from the flow-invariant volume measure: q uniform on the
    fundamental cell minus the obstacle (by rejection), v uniform."""
    gen = _as_generator(rng)
    d = config.d
    cells = np.concatenate([config.window, np.zeros((1, d), dtype=np.int64)])
    q = np.empty((n, d))
    filled = 0
    for _ in range(_REJECTION_GUARD):
        if filled >= n:
            break
        need = n - filled
        x = gen.random((need, d))
        y = x - config.alpha
        base = np.round(y)
        # distance from q to every candidate center around the rounded cell
        disp = (y[:, None, :] - (base[:, None, :] + cells[None, :, :])) @ config.m
        dmin = np.sqrt(np.einsum("ijk,ijk->ij", disp, disp)).min(axis=1)
        acc = x[dmin > config.r]
        take = min(acc.shape[0], need)
        q[filled : filled + take] = acc[:take] @ config.m
        filled += take
    if filled < n:
        raise ConfigError("phase-space rejection did not terminate")
    v = sample_direction_uniform(gen, d, n)
    return q, v


def sample_boundary(config: LatticeConfig, rng, n: int):
    """(q, v) batch from the collision measure on the origin-cell sphere.

    q sits on the sphere around (0 + alpha) M (one representative suffices:
    the measure is translation invariant across cells), nudged outward by
    1e-12 r so origin validity holds deterministically.  v is drawn from the
    cosine-weighted outgoing hemisphere by lifting a uniform point of the
    tangent (d-1)-ball.
    """
    if config.r <= 0.0:
        raise ConfigError("boundary ensemble needs a positive obstacle radius")
    gen = _as_generator(rng)
    d = config.d
    u = sample_direction_uniform(gen, d, n)  # outward normal
    g = gen.normal(size=(n, d))
    g -= np.sum(g * u, axis=1, keepdims=True) * u
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms < 1e-12):
        bad = norms < 1e-12
        gb = gen.normal(size=(int(bad.sum()), d))
        gb -= np.sum(gb * u[bad], axis=1, keepdims=True) * u[bad]
        g[bad] = gb
        norms = np.linalg.norm(g, axis=1)
    tangent = g / norms[:, None]
    s = gen.random(n) ** (1.0 / (d - 1))  # radial law of the uniform (d-1)-ball
    v = tangent * s[:, None] + u * np.sqrt(1.0 - s * s)[:, None]
    q = config.alpha_m + (config.r * (1.0 + 1e-12)) * u
    return q, v


def draw_queries(spec: EnsembleSpec, config: LatticeConfig, rng, n: int):
    """Dispatch to the sampler for spec.kind; returns (q, v) arrays."""
    if spec.kind == EnsembleKind.FIXED_POINT:
        return sample_fixed_point(spec, config, rng, n)
    if spec.kind == EnsembleKind.PHASE:
        return sample_phase(config, rng, n)
    return sample_boundary(config, rng, n)

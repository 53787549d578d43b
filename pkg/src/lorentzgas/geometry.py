"""Scatterer lattice configuration and exact free path computation.

The configuration space is R^d minus spheres of radius r centred on the
points of an affinely shifted unimodular lattice (Z^d + alpha) M.  A ray is
traced to its first sphere intersection either by a windowed lattice march
(production path) or by brute-force enumeration (testing oracle).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import _traversal
from .errors import (
    ConfigError,
    InvalidDirectionError,
    InvalidOriginError,
    ObstacleOverlapError,
    OracleBudgetError,
    UnimodularityError,
    UnsupportedDimensionError,
)

__all__ = [
    "AlphaClass",
    "LatticeConfig",
    "RayQuery",
    "FreePathSample",
    "shortest_vector_bound",
    "free_path",
    "free_path_batch",
    "free_path_bruteforce",
    "free_path_bruteforce_batch",
]

_DET_TOL = 1e-12
_UNIT_TOL = 1e-14
_MAX_DIM = 8
_ORACLE_T_MAX = 1.0e3
_ORACLE_POINT_BUDGET = 40_000_000


class AlphaClass(str, Enum):
    """Arithmetic class of the lattice shift, which governs the finite-r
    convergence rate of the free path law."""

    INTEGER = "integer"
    RATIONAL = "rational"
    IRRATIONAL = "irrational"


def _enumerate_box(d: int, bbox: int) -> np.ndarray:
    """All integer vectors with sup norm <= bbox, chunked so high dimensions
    do not materialize a giant meshgrid at once."""
    side = 2 * bbox + 1
    if side**d > 60_000_000:
        raise ConfigError(f"enumeration box {side}^{d} too large")
    axis = np.arange(-bbox, bbox + 1, dtype=np.int64)
    if d <= 4:
        grids = np.meshgrid(*([axis] * d), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)
    grids = np.meshgrid(*([axis] * 4), indexing="ij")
    tail = np.stack([g.ravel() for g in grids], axis=1)
    chunks = []
    for head in itertools.product(axis.tolist(), repeat=d - 4):
        block = np.empty((tail.shape[0], d), dtype=np.int64)
        block[:, : d - 4] = np.asarray(head, dtype=np.int64)
        block[:, d - 4 :] = tail
        chunks.append(block)
    return np.concatenate(chunks, axis=0)


def _singular_values(m: np.ndarray):
    sv = np.linalg.svd(m, compute_uv=False)
    return float(sv[0]), float(sv[-1])


def _lambda1(m: np.ndarray, d: int):
    """(bound, exact) for the shortest nonzero vector length of Z^d m.

    Exact for d <= 4 by enumerating |z m| over the sup-norm box of radius
    ceil(2 cond(m)); a certified lower bound sigma_min for 5 <= d <= 8.
    """
    if d > _MAX_DIM:
        raise UnsupportedDimensionError(f"shortest vector supported for d <= {_MAX_DIM}")
    smax, smin = _singular_values(m)
    if d > 4:
        return smin, False
    bbox = int(math.ceil(2.0 * smax / smin))
    pts = _enumerate_box(d, bbox)
    pts = pts[np.any(pts != 0, axis=1)]
    norms = np.linalg.norm(pts.astype(np.float64) @ m, axis=1)
    return float(norms.min()), True


@dataclass(frozen=True)
class LatticeConfig:
    """The scatterer array: dimension, unimodular basis, shift, radius.

    Construction validates unimodularity (|det M - 1| <= 1e-12), the
    non-overlap condition 2r < lambda_1, and the declared shift class, then
    precomputes the immutable traversal data (inverse basis, march step,
    neighbour window).  Instances are safe to share across workers.
    """

    d: int
    m: np.ndarray
    alpha: np.ndarray
    alpha_class: AlphaClass = AlphaClass.INTEGER
    r: float = 0.1
    rational_q: Optional[int] = None

    # derived, filled in __post_init__
    minv: np.ndarray = field(init=False, repr=False)
    alpha_m: np.ndarray = field(init=False, repr=False)
    lambda1: float = field(init=False)
    lambda1_exact: bool = field(init=False, repr=False)
    march_step: float = field(init=False, repr=False)
    window: np.ndarray = field(init=False, repr=False)
    is_identity: bool = field(init=False, repr=False)

    def __post_init__(self):
        d = self.d
        if not 2 <= d <= _MAX_DIM:
            raise UnsupportedDimensionError(f"dimension {d} outside [2, {_MAX_DIM}]")
        object.__setattr__(self, "alpha_class", AlphaClass(self.alpha_class))
        m = np.array(self.m, dtype=np.float64)
        if m.shape != (d, d):
            raise ConfigError(f"basis matrix must be {d}x{d}")
        det = float(np.linalg.det(m))
        if abs(det - 1.0) > _DET_TOL:
            raise UnimodularityError(
                f"|det M - 1| = {abs(det - 1.0):.3e} exceeds {_DET_TOL}; "
                "non-unimodular bases are rejected rather than rescaled"
            )
        alpha = np.array(self.alpha, dtype=np.float64).reshape(d)
        if not self.r >= 0.0:
            # r = 0 is a legal degenerate case (point scatterers, measure-zero hits)
            raise ConfigError("radius must be non-negative")
        lam1, exact = _lambda1(m, d)
        if 2.0 * self.r >= lam1:
            raise ObstacleOverlapError(
                f"2r = {2 * self.r} >= lambda_1 bound {lam1}: obstacles overlap"
            )
        self._check_alpha_class(alpha)

        h = min(0.5, lam1 / 2.0 - self.r)
        smax, smin = _singular_values(m)
        rw = self.r + (math.sqrt(d) / 2.0 + h) * smax
        bbox = int(math.ceil(rw / smin))
        pts = _enumerate_box(d, bbox)
        keep = np.linalg.norm(pts.astype(np.float64) @ m, axis=1) <= rw
        window = np.ascontiguousarray(pts[keep])

        ident = bool(np.all(m == np.eye(d)))
        for name, value in (
            ("m", m),
            ("alpha", alpha),
            ("minv", np.linalg.inv(m)),
            ("alpha_m", alpha @ m),
            ("lambda1", lam1),
            ("lambda1_exact", exact),
            ("march_step", h),
            ("window", window),
            ("is_identity", ident),
        ):
            object.__setattr__(self, name, value)
        for arr in (self.m, self.alpha, self.minv, self.alpha_m, self.window):
            arr.setflags(write=False)

    def _check_alpha_class(self, alpha: np.ndarray):
        if self.alpha_class == AlphaClass.INTEGER:
            if not np.all(alpha == np.round(alpha)):
                raise ConfigError("alpha tagged integer but has non-integer entries")
        elif self.alpha_class == AlphaClass.RATIONAL:
            q = self.rational_q
            if q is None or q < 1:
                raise ConfigError("rational alpha requires rational_q >= 1")
            scaled = q * alpha
            if not np.all(scaled == np.round(scaled)):
                raise ConfigError(
                    f"alpha tagged rational with q={q} but q*alpha is not exactly integral"
                )
        # irrational: floats can only emulate irrationality; nothing to check

    @property
    def t_max_for_xi(self):
        """Flight cap corresponding to one unit of scaled path length."""
        return self.r ** -(self.d - 1)

    def distance_to_obstacle_centers(self, q: np.ndarray) -> float:
        """Distance from q to the nearest lattice point of the shifted
        lattice (search window: rounded cell plus the neighbour window)."""
        q = np.asarray(q, dtype=np.float64).reshape(self.d)
        y = q @ self.minv - self.alpha
        base = np.round(y).astype(np.int64)
        cells = np.unique(np.concatenate([self.window + base, base[None, :]]), axis=0)
        centers = (cells + self.alpha) @ self.m
        return float(np.min(np.linalg.norm(centers - q, axis=1)))


def shortest_vector_bound(config: LatticeConfig) -> float:
    """Length of the shortest nonzero lattice vector (exact for d <= 4,
    certified lower bound above)."""
    return config.lambda1


@dataclass(frozen=True)
class RayQuery:
    """A traced ray: origin outside all obstacles, unit direction, flight cap."""

    q: np.ndarray
    v: np.ndarray
    t_max: float

    def __post_init__(self):
        object.__setattr__(self, "q", np.array(self.q, dtype=np.float64))
        object.__setattr__(self, "v", np.array(self.v, dtype=np.float64))
        if not self.t_max > 0.0:
            raise ConfigError("t_max must be positive")
        nv = float(np.linalg.norm(self.v))
        if abs(nv - 1.0) > _UNIT_TOL:
            raise InvalidDirectionError(f"|v| = {nv!r} is not 1 within {_UNIT_TOL}")


@dataclass(frozen=True)
class FreePathSample:
    """Outcome of one traced ray.

    ``tau`` is the flight length, ``xi = r^(d-1) tau`` its scaled value.
    Censored samples carry tau = t_max and no hit metadata; they are counted
    separately downstream, never dropped.
    """

    tau: float
    xi: float
    censored: bool
    hit_lattice_index: Optional[np.ndarray]  # integer z of the struck sphere
    hit_center: Optional[np.ndarray]  # physical center (z + alpha) M
    hit_point: Optional[np.ndarray]  # q + tau v, as evaluated
    incidence_cos: Optional[float]  # <v, -n> at impact, in (0, 1]


def _validate_origin(config: LatticeConfig, query: RayQuery):
    dist = config.distance_to_obstacle_centers(query.q)
    r = config.r
    if dist < r * (1.0 - 1e-12):
        raise InvalidOriginError(
            f"origin at distance {dist} < r = {r} from an obstacle center"
        )
    if dist <= r * (1.0 + 1e-9):
        # on (or within rounding of) the boundary: require an outgoing ray
        y = query.q @ config.minv - config.alpha
        z = np.round(y)
        center = (z + config.alpha) @ config.m
        normal = (query.q - center) / np.linalg.norm(query.q - center)
        if float(np.dot(query.v, normal)) <= 0.0:
            raise InvalidOriginError("boundary origin with non-outgoing direction")


def free_path_batch(config: LatticeConfig, qs, vs, t_max: float):
    """Trace a batch of rays; returns (tau, censored, z, incidence_cos).

    Origins are trusted (the ensemble samplers construct valid ones); use
    :func:`free_path` for validated single queries.
    """
    qs = np.ascontiguousarray(qs, dtype=np.float64)
    vs = np.ascontiguousarray(vs, dtype=np.float64)
    n = qs.shape[0]
    tau = np.empty(n)
    cens = np.empty(n, dtype=np.bool_)
    z = np.empty((n, config.d), dtype=np.int64)
    cos = np.empty(n)
    _traversal.march_batch(
        qs, vs, config.m, config.minv, config.alpha, config.alpha_m,
        config.is_identity, config.r, config.march_step,
        config.window, float(t_max), tau, cens, z, cos,
    )
    return tau, cens, z, cos


def _assemble_sample(config: LatticeConfig, query: RayQuery, tau, cens, z, cos):
    t = float(tau)
    xi = config.r ** (config.d - 1) * t
    if bool(cens):
        return FreePathSample(t, xi, True, None, None, None, None)
    center = (z.astype(np.float64) + config.alpha) @ config.m
    return FreePathSample(
        tau=t,
        xi=xi,
        censored=False,
        hit_lattice_index=z.copy(),
        hit_center=center,
        hit_point=query.q + t * query.v,
        incidence_cos=float(cos),
    )


def free_path(config: LatticeConfig, query: RayQuery) -> FreePathSample:
    """Exact first collision of the ray with the obstacle array.

    Raises InvalidOriginError if q sits strictly inside an obstacle and
    InvalidDirectionError (at RayQuery construction) for non-unit v.
    """
    _validate_origin(config, query)
    tau, cens, z, cos = free_path_batch(
        config, query.q[None, :], query.v[None, :], query.t_max
    )
    return _assemble_sample(config, query, tau[0], cens[0], z[0], cos[0])


def _oracle_candidates(config: LatticeConfig, t_max: float) -> np.ndarray:
    if t_max > _ORACLE_T_MAX:
        raise OracleBudgetError(
            f"oracle t_max {t_max} exceeds the {_ORACLE_T_MAX} budget"
        )
    smax, smin = _singular_values(config.m)
    bbox = int(math.ceil(t_max * smax / smin)) + 2
    if (2 * bbox + 1) ** config.d > _ORACLE_POINT_BUDGET:
        raise OracleBudgetError(
            f"oracle box (2*{bbox}+1)^{config.d} exceeds the point budget"
        )
    return _enumerate_box(config.d, bbox)


def free_path_bruteforce_batch(config: LatticeConfig, qs, vs, t_max: float):
    """Oracle twin of :func:`free_path_batch`: scans every lattice point in
    a box large enough to contain all spheres reachable within t_max from an
    origin in the central cell.  O(t_max^d); testing only."""
    cand = _oracle_candidates(config, t_max)
    qs = np.ascontiguousarray(qs, dtype=np.float64)
    vs = np.ascontiguousarray(vs, dtype=np.float64)
    n = qs.shape[0]
    tau = np.empty(n)
    cens = np.empty(n, dtype=np.bool_)
    z = np.empty((n, config.d), dtype=np.int64)
    cos = np.empty(n)
    _traversal.brute_batch(
        qs, vs, config.m, config.alpha_m, config.is_identity,
        config.r, float(t_max), cand, tau, cens, z, cos,
    )
    return tau, cens, z, cos


def free_path_bruteforce(config: LatticeConfig, query: RayQuery) -> FreePathSample:
    """Single-query brute-force oracle, bit-for-bit comparable to
    :func:`free_path` on the same inputs."""
    _validate_origin(config, query)
    tau, cens, z, cos = free_path_bruteforce_batch(
        config, query.q[None, :], query.v[None, :], query.t_max
    )
    return _assemble_sample(config, query, tau[0], cens[0], z[0], cos[0])

"""Torus distance, the approximation-speed function zeta(b, T), and
exponent probes classifying shift vectors by rational-approximability.

zeta(b, T) is the least N >= 1 such that some integer multiple q*b with
1 <= q <= N comes within N^2/T of the integer lattice in sup norm.  It is
non-decreasing and unbounded in T, plateaus at the denominator for rational
b, and grows like T^(1/(kappa+1)) for vectors of approximation type kappa.

Multiples q*b are reduced to the torus with an error-free transformation
(Dekker two-product plus exact integer subtraction), so the scan stays
trustworthy for q well beyond the point where naive float products drift.
All claims are capped at T <= 2^53: float shift vectors only emulate exact
arithmetic below that resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numba as nb
import numpy as np

from .errors import ZetaCapExceeded

__all__ = [
    "T_TRUST_BOUND",
    "torus_distance",
    "DiophantineQuery",
    "ZetaValue",
    "zeta_fn",
    "zeta_fn_oracle",
    "ExponentProbe",
    "diophantine_exponent_probe",
]

T_TRUST_BOUND = float(2**53)

_SPLITTER = 134217729.0  # 2^27 + 1, Dekker mantissa splitter


def torus_distance(x) -> float:
    """Sup-norm distance from x to the integer lattice on the torus.

    For a vector this is max_i min(frac(x_i), 1 - frac(x_i)); a scalar is
    treated as a 1-vector.
    """
    arr = np.asarray(x, dtype=np.float64)
    f = arr - np.floor(arr)
    per_coord = np.minimum(f, 1.0 - f)
    return float(np.max(per_coord))


@nb.njit(cache=True)
def _qb_dist_sup(q: float, b: np.ndarray) -> float:
    """Exact-reduction sup distance of q*b from Z^d.

    q*b is formed as an exact double-double (hi, lo); hi minus its nearest
    integer is exact, so the final fold onto [-1/2, 1/2] carries at most one
    rounding of ~2^-53 regardless of the size of q.
    """
    dmax = 0.0
    for i in range(b.shape[0]):
        bi = b[i]
        hi = q * bi
        # Dekker two-product: hi + lo == q * bi exactly
        qh = (q * _SPLITTER) - ((q * _SPLITTER) - q)
        ql = q - qh
        bh = (bi * _SPLITTER) - ((bi * _SPLITTER) - bi)
        bl = bi - bh
        lo = ((qh * bh - hi) + qh * bl + ql * bh) + ql * bl
        k = round(hi)
        frac = (hi - k) + lo
        d = abs(frac)
        if d > 0.5:
            d = 1.0 - d
        if d > dmax:
            dmax = d
    return dmax


@nb.njit(cache=True)
def _zeta_scan(b: np.ndarray, t: float, n_cap: int):
    running_min = 1.0
    for n in range(1, n_cap + 1):
        d = _qb_dist_sup(float(n), b)
        if d < running_min:
            running_min = d
        if running_min <= (float(n) * float(n)) / t:
            return n, False
    return n_cap, True


class ZetaValue(NamedTuple):
    """Result of a zeta scan; ``capped`` means the N cap was hit and the
    value is only a lower bound, never to be read as exact."""

    value: int
    capped: bool


@dataclass(frozen=True)
class DiophantineQuery:
    """A (b, T) query with its scan cutoff.

    b is interpreted mod 1 and stored reduced; T must be positive and at
    most 2^53 (the float trust bound).
    """

    b: np.ndarray
    t: float
    n_cap: int = 10_000_000

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.b, dtype=np.float64))
        object.__setattr__(self, "b", arr - np.floor(arr))
        if not self.t > 0.0:
            raise ValueError("T must be positive")
        if self.t > T_TRUST_BOUND:
            raise ValueError("T exceeds the 2^53 float trust bound")
        if self.n_cap < 1:
            raise ValueError("n_cap must be >= 1")

    def zeta(self) -> ZetaValue:
        return zeta_fn(self.b, self.t, self.n_cap)


def zeta_fn(b, t: float, n_cap: int = 10_000_000) -> ZetaValue:
    """Least N <= n_cap with min_{1<=q<=N} |q*b|_Z <= N^2/T.

    Only positive q are scanned: |(-q)b|_Z = |qb|_Z, so the two-sided range
    of the definition halves exactly.  Returns a capped marker when no N
    within the cap satisfies the threshold.
    """
    query = b if isinstance(b, DiophantineQuery) else DiophantineQuery(b, t, n_cap)
    n, capped = _zeta_scan(query.b, query.t, query.n_cap)
    return ZetaValue(int(n), bool(capped))


def _qb_dist_sup_table(b: np.ndarray, n_cap: int) -> np.ndarray:
    """Vectorized |q*b|_Z for q = 1..n_cap, same error-free reduction as the
    scalar scan but built as one table with no incremental state."""
    q = np.arange(1.0, n_cap + 1.0)[:, None]
    bi = b[None, :]
    hi = q * bi
    qc = q * _SPLITTER
    qh = qc - (qc - q)
    ql = q - qh
    bc = bi * _SPLITTER
    bh = bc - (bc - bi)
    bl = bi - bh
    lo = ((qh * bh - hi) + qh * bl + ql * bh) + ql * bl
    k = np.round(hi)
    frac = (hi - k) + lo
    d = np.abs(frac)
    d = np.where(d > 0.5, 1.0 - d, d)
    return d.max(axis=1)


def zeta_fn_oracle(b, t: float, n_cap: int = 100_000) -> ZetaValue:
    """Tabulated re-implementation of :func:`zeta_fn` for testing.

    Builds the full table of |q*b|_Z, prefix-minimizes it, and reads off the
    first admissible N.  Restricted to n_cap <= 1e5.
    """
    query = b if isinstance(b, DiophantineQuery) else DiophantineQuery(b, t, n_cap)
    if query.n_cap > 100_000:
        raise ValueError("oracle is limited to n_cap <= 1e5")
    dists = _qb_dist_sup_table(query.b, query.n_cap)
    prefix_min = np.minimum.accumulate(dists)
    n = np.arange(1.0, query.n_cap + 1.0)
    ok = prefix_min <= (n * n) / query.t
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return ZetaValue(query.n_cap, True)
    return ZetaValue(int(hits[0]) + 1, False)


@dataclass(frozen=True)
class ExponentProbe:
    """Least-squares growth exponent of zeta along a T grid."""

    slope: float
    intercept: float
    t_grid: np.ndarray
    zeta_values: np.ndarray = field(repr=False)


def diophantine_exponent_probe(b, t_grid, n_cap: int = 10_000_000) -> ExponentProbe:
    """Fit ln zeta(b, T) against ln T over a log-spaced grid.

    For a vector of approximation type kappa the theoretical lower growth
    rate is T^(1/(kappa+1)); the probe reports the empirical slope with the
    per-point values attached.  Any capped zeta value aborts the probe.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.size < 2:
        raise ValueError("need at least two T values")
    values = np.empty(t_grid.size)
    for i, t in enumerate(t_grid):
        z = zeta_fn(b, float(t), n_cap)
        if z.capped:
            raise ZetaCapExceeded(
                f"zeta(b, T={t}) hit the cap {n_cap}; probe aborted"
            )
        values[i] = z.value
    slope, intercept = np.polyfit(np.log(t_grid), np.log(values), 1)
    return ExponentProbe(
        slope=float(slope),
        intercept=float(intercept),
        t_grid=t_grid,
        zeta_values=values,
    )

"""Empirical distribution machinery for the scaled free path length.

Covers complementary CDFs with distribution-free confidence bands, central
finite-difference density estimates, log-log tail exponent fits, the
log-mean-minus-mean-log entropy functional, and the cross-ensemble identity
linking the volume-measure density to the collision-measure CCDF.

Censored flights (capped at xi_cap) are first-class citizens: they enter
every CCDF numerator below the cap, are excluded from moment estimators
with explicit bias bounds, and are never silently dropped.
"""

from __future__ import annotations

import csv
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .asymptotics import vol_ball
from .errors import (
    CensoredRegionError,
    CorruptSampleError,
    LowCountError,
    UnreliableTailError,
)

__all__ = [
    "dkw_band",
    "EmpiricalDistribution",
    "CcdfValue",
    "ccdf",
    "DensityEstimate",
    "density_fd",
    "TailFit",
    "tail_fit",
    "EntropyEstimate",
    "entropy_constant",
    "CrossCheckRow",
    "cross_ensemble_check",
    "write_ccdf_csv",
]

DEFAULT_DELTA = 1e-3
_CURVED_R2_THRESHOLD = 0.98
_ENTROPY_BATCHES = 32


def dkw_band(n: int, delta: float = DEFAULT_DELTA) -> float:
    """Two-sided distribution-free CDF band half-width sqrt(ln(2/delta)/(2n))."""
    if n < 1:
        raise ValueError("need n >= 1")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must be in (0, 1)")
    return math.sqrt(math.log(2.0 / delta) / (2.0 * n))


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Sample set of scaled free path lengths with censoring bookkeeping.

    ``xi_sorted`` holds the non-censored values ascending; ``xi_ordered``
    keeps arrival order (used for batch-means standard errors).  All
    non-censored values lie strictly below ``xi_cap``.
    """

    xi_sorted: np.ndarray = field(repr=False)
    xi_ordered: np.ndarray = field(repr=False)
    n_total: int
    n_censored: int
    xi_cap: float
    ensemble: str
    d: int
    r: float
    alpha_class: str = "integer"

    @classmethod
    def from_samples(cls, xi, censored, xi_cap, ensemble, d, r, alpha_class="integer"):
        xi = np.asarray(xi, dtype=np.float64)
        censored = np.asarray(censored, dtype=bool)
        if xi.shape != censored.shape:
            raise ValueError("xi and censored must have the same shape")
        # a hit exactly at the cap is indistinguishable from a censored
        # flight downstream; fold it into the censored count
        censored = censored | (xi >= xi_cap)
        keep = xi[~censored]
        if keep.size and np.any(keep <= 0.0):
            raise CorruptSampleError("non-censored xi values must be positive")
        return cls(
            xi_sorted=np.sort(keep),
            xi_ordered=keep,
            n_total=int(xi.size),
            n_censored=int(censored.sum()),
            xi_cap=float(xi_cap),
            ensemble=str(ensemble),
            d=int(d),
            r=float(r),
            alpha_class=str(alpha_class),
        )

    @property
    def n_observed(self) -> int:
        return self.n_total - self.n_censored

    @property
    def censored_fraction(self) -> float:
        return self.n_censored / self.n_total

    def count_above(self, a: float) -> int:
        """Number of samples known to exceed a (censored ones included)."""
        idx = np.searchsorted(self.xi_sorted, a, side="right")
        return int(self.xi_sorted.size - idx) + self.n_censored


@dataclass(frozen=True)
class CcdfValue:
    a: float
    value: float
    band: float  # DKW half-width

    @property
    def lo(self):
        return max(0.0, self.value - self.band)

    @property
    def hi(self):
        return min(1.0, self.value + self.band)


def ccdf(dist: EmpiricalDistribution, a: float, delta: float = DEFAULT_DELTA) -> CcdfValue:
    """Empirical P(xi > a) with its distribution-free confidence band.

    Censored samples are known to exceed any a below the cap, so they enter
    the numerator; at or beyond the cap the CCDF is not identified.
    """
    if a < 0.0:
        raise ValueError("a must be >= 0")
    if a >= dist.xi_cap:
        raise CensoredRegionError(
            f"a = {a} >= xi_cap = {dist.xi_cap}: CCDF not identified there"
        )
    return CcdfValue(
        a=float(a),
        value=dist.count_above(a) / dist.n_total,
        band=dkw_band(dist.n_total, delta),
    )


@dataclass(frozen=True)
class DensityEstimate:
    a: float
    h: float
    value: float
    bound: float  # propagated DKW-based error bound (band / h)
    window_count: int
    low_count: bool


def default_bandwidth(n: int) -> float:
    """Bias-variance default for a C^1 density: max(0.02, 2 n^(-1/5))."""
    return max(0.02, 2.0 * n ** (-0.2))


def density_fd(
    dist: EmpiricalDistribution,
    a: float,
    h: Optional[float] = None,
    delta: float = DEFAULT_DELTA,
) -> DensityEstimate:
    """Central finite-difference estimate -(CCDF(a+h) - CCDF(a-h)) / (2h)
    of the density at a, with the DKW band propagated through the
    difference.  Windows holding fewer than 100 samples set ``low_count``.
    """
    if h is None:
        h = default_bandwidth(dist.n_total)
    if not 0.0 < h < a:
        raise ValueError(f"need 0 < h < a (got h={h}, a={a})")
    if a >= dist.xi_cap - h:
        raise CensoredRegionError(
            f"window [{a - h}, {a + h}] touches the censored region"
        )
    upper = ccdf(dist, a + h, delta)
    lower = ccdf(dist, a - h, delta)
    count = dist.count_above(a - h) - dist.count_above(a + h)
    return DensityEstimate(
        a=float(a),
        h=float(h),
        value=(lower.value - upper.value) / (2.0 * h),
        bound=dkw_band(dist.n_total, delta) / h,
        window_count=count,
        low_count=count < 100,
    )


@dataclass(frozen=True)
class TailFit:
    exponent: float
    amplitude: float
    r_squared: float
    curved: bool  # poor straight-line fit on log-log axes
    a_grid: np.ndarray = field(repr=False)
    ccdf_values: np.ndarray = field(repr=False)


def tail_fit(
    dist: EmpiricalDistribution,
    a_lo: float,
    a_hi: float,
    n_grid: int = 16,
    min_samples: int = 1000,
) -> TailFit:
    """Least-squares slope of ln CCDF against ln a over a log-spaced grid.

    For a CCDF decaying like a^-k the fitted exponent is -k.  The fit is
    rejected when more than 10% of the mass above a_lo is censored (the
    censored flights carry unknown tail positions), and flagged ``curved``
    when the log-log residuals say the tail is not a power law.
    """
    if not 0.0 < a_lo < a_hi:
        raise ValueError("need 0 < a_lo < a_hi")
    if a_hi > dist.xi_cap / 2.0:
        raise ValueError(f"a_hi = {a_hi} exceeds xi_cap/2 = {dist.xi_cap / 2.0}")
    above = dist.count_above(a_lo)
    if above - dist.n_censored < min_samples:
        raise LowCountError(
            f"only {above - dist.n_censored} observed samples above a_lo = {a_lo}"
        )
    if above > 0 and dist.n_censored / above > 0.10:
        raise UnreliableTailError(
            f"censored mass {dist.n_censored / above:.1%} above a_lo exceeds 10%"
        )
    grid = np.geomspace(a_lo, a_hi, n_grid)
    values = np.array([dist.count_above(a) / dist.n_total for a in grid])
    if np.any(values <= 0.0):
        raise LowCountError("empty CCDF inside the fit window")
    x = np.log(grid)
    y = np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return TailFit(
        exponent=float(slope),
        amplitude=float(math.exp(intercept)),
        r_squared=r2,
        curved=r2 < _CURVED_R2_THRESHOLD,
        a_grid=grid,
        ccdf_values=values,
    )


@dataclass(frozen=True)
class EntropyEstimate:
    """ln E[xi] - E[ln xi] over collision-measure samples, with the pieces.

    The r^(d-1) scaling cancels between the two terms, so this equals the
    same functional of the raw flight lengths.  ``c0_proxy`` is
    -E[ln xi] - ln |B^(d-1)|, the small-radius limit candidate.
    Censoring biases carry explicit bounds (quadratic-tail model):
    the censored contribution to E[xi] is between cap*f and 2*cap*f for
    censored fraction f.
    """

    c_r: float
    mean_xi: float
    mean_log_xi: float
    c0_proxy: float
    se_c_r: float
    se_mean_xi: float
    se_mean_log_xi: float
    n_observed: int
    censored_fraction: float
    censor_bias_mean_bound: float
    censor_bias_log_bound: float


def entropy_constant(dist: EmpiricalDistribution, n_batches: int = _ENTROPY_BATCHES):
    """Entropy functional of a boundary-ensemble sample set.

    Standard errors come from batch means over ``n_batches`` contiguous
    arrival-order blocks (deterministic given the stream layout).
    """
    if dist.ensemble != "boundary":
        raise ValueError("entropy constant is defined for the boundary ensemble")
    if dist.censored_fraction >= 0.01:
        raise CensoredRegionError(
            f"censored fraction {dist.censored_fraction:.2%} >= 1%: log-moments unreliable"
        )
    x = dist.xi_ordered
    if x.size == 0:
        raise CorruptSampleError("no observed samples")
    if np.any(x <= 0.0):
        raise CorruptSampleError("xi <= 0 encountered")
    logs = np.log(x)
    mean_xi = float(np.mean(x))
    mean_log = float(np.mean(logs))
    c_r = math.log(mean_xi) - mean_log
    if c_r < 0.0:
        # Jensen guarantees c_r >= 0; only rounding can push it below
        if c_r < -1e-12:
            raise CorruptSampleError(f"Jensen violation beyond rounding: c_r = {c_r}")
        c_r = 0.0

    nb = min(n_batches, x.size)
    bounds = np.linspace(0, x.size, nb + 1, dtype=int)
    bx = np.array([np.mean(x[lo:hi]) for lo, hi in zip(bounds[:-1], bounds[1:])])
    bl = np.array([np.mean(logs[lo:hi]) for lo, hi in zip(bounds[:-1], bounds[1:])])
    bc = np.log(bx) - bl
    se_mean_xi = float(np.std(bx, ddof=1) / math.sqrt(nb)) if nb > 1 else math.nan
    se_mean_log = float(np.std(bl, ddof=1) / math.sqrt(nb)) if nb > 1 else math.nan
    se_c_r = float(np.std(bc, ddof=1) / math.sqrt(nb)) if nb > 1 else math.nan

    f_cens = dist.censored_fraction
    return EntropyEstimate(
        c_r=c_r,
        mean_xi=mean_xi,
        mean_log_xi=mean_log,
        c0_proxy=-mean_log - math.log(vol_ball(dist.d - 1)),
        se_c_r=se_c_r,
        se_mean_xi=se_mean_xi,
        se_mean_log_xi=se_mean_log,
        n_observed=int(x.size),
        censored_fraction=f_cens,
        censor_bias_mean_bound=2.0 * dist.xi_cap * f_cens,
        censor_bias_log_bound=2.0 * abs(math.log(dist.xi_cap)) * f_cens,
    )


@dataclass(frozen=True)
class CrossCheckRow:
    """One grid point of the volume/collision consistency identity.

    The collision-measure CCDF at a should equal the volume-measure density
    at a divided by |B^(d-1)|.  ``combined_bound`` is 3 sigma plus an h^2
    curvature allowance for the finite-difference bias.
    """

    a: float
    nu_ccdf: float
    phi_density_scaled: float
    residual: float
    sigma: float
    bias_allowance: float
    combined_bound: float
    low_count: bool

    @property
    def within_bound(self) -> bool:
        return abs(self.residual) <= self.combined_bound


def cross_ensemble_check(
    mu_dist: EmpiricalDistribution,
    nu_dist: EmpiricalDistribution,
    a_grid: Sequence[float],
    h: Optional[float] = None,
):
    """Compare nu-CCDF(a) against the finite-difference mu-density at a
    scaled by 1/|B^(d-1)| over a grid, with combined uncertainty.

    Statistical sigma combines the binomial error of the nu-CCDF with the
    binomial error of the mu window mass; the deterministic h^2 allowance
    covers finite-difference curvature bias (|second derivative| up to
    6 |B^(d-1)| inside the window).
    """
    if (mu_dist.d, mu_dist.r) != (nu_dist.d, nu_dist.r):
        raise ValueError("distributions must share (d, r)")
    vol = vol_ball(mu_dist.d - 1)
    if h is None:
        h = default_bandwidth(mu_dist.n_total) / 2.0
    rows = []
    for a in a_grid:
        nu_c = ccdf(nu_dist, a)
        fd = density_fd(mu_dist, a, h)
        p = nu_c.value
        sigma_nu = math.sqrt(max(p * (1.0 - p), 1e-300) / nu_dist.n_total)
        w = fd.window_count / mu_dist.n_total
        sigma_fd = math.sqrt(max(w * (1.0 - w), 1e-300) / mu_dist.n_total) / (2.0 * h)
        sigma = math.hypot(sigma_nu, sigma_fd / vol)
        allowance = h * h
        rows.append(
            CrossCheckRow(
                a=float(a),
                nu_ccdf=p,
                phi_density_scaled=fd.value / vol,
                residual=p - fd.value / vol,
                sigma=sigma,
                bias_allowance=allowance,
                combined_bound=3.0 * sigma + allowance,
                low_count=fd.low_count,
            )
        )
    return rows


def write_ccdf_csv(
    dist: EmpiricalDistribution,
    a_grid: Sequence[float],
    path,
    delta: float = DEFAULT_DELTA,
):
    """Export (a, ccdf, band_lo, band_hi, n_effective) rows; written to a
    temporary file and atomically renamed so no partial file survives."""
    path = os.fspath(path)
    rows = []
    for a in a_grid:
        c = ccdf(dist, a, delta)
        rows.append((a, c.value, c.lo, c.hi, dist.count_above(a)))
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["a", "ccdf", "band_lo", "band_hi", "n_effective"])
            for row in rows:
                writer.writerow([f"{row[0]:.17g}", f"{row[1]:.17g}",
                                 f"{row[2]:.17g}", f"{row[3]:.17g}", row[4]])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

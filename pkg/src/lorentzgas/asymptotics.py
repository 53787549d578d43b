"""Exact dimension-dependent constants and closed-form asymptotics.

Everything in this module is analytic: unit-ball volumes, sphere areas,
Riemann zeta values, the two-sided asymptotics of the limiting free path
density, the exact mean free path on the unit-covolume torus, and the
leading terms of the billiard-map entropy expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedDimensionError

__all__ = [
    "vol_ball",
    "sphere_area",
    "riemann_zeta",
    "tail_constant",
    "near_zero_slope",
    "AsymptoticConstants",
    "constants_for_dimension",
    "phi_near_zero",
    "phi_tail",
    "MeanFreePath",
    "mean_free_path_exact",
    "EntropyExpansion",
    "entropy_expansion",
    "boca_zaharescu_bridge",
]

# Bernoulli numbers B_2, B_4, ..., B_12 for the Euler-Maclaurin tail.
_BERNOULLI_EVEN = (1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730)


def vol_ball(k: int) -> float:
    """Volume of the unit ball in R^k, i.e. pi^(k/2) / Gamma(k/2 + 1).

    vol_ball(0) = 1, vol_ball(1) = 2, vol_ball(2) = pi, vol_ball(3) = 4*pi/3.
    """
    if k < 0:
        raise ValueError("ball dimension must be >= 0")
    return math.pi ** (k / 2.0) / math.gamma(k / 2.0 + 1.0)


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d, i.e. 2*pi^(d/2) / Gamma(d/2)."""
    if d < 1:
        raise ValueError("ambient dimension must be >= 1")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def riemann_zeta(s: float, n_direct: int = 24) -> float:
    """Riemann zeta(s) for real s > 1 by direct summation plus an
    Euler-Maclaurin tail correction.

    With ``n_direct`` around 20 the result is accurate to ~1e-15 for s >= 2,
    which covers every dimension this package supports.
    """
    if s <= 1.0:
        raise ValueError("zeta(s) implemented for s > 1 only")
    n = int(n_direct)
    total = sum(k ** (-s) for k in range(1, n))
    # integral + half-term + Bernoulli corrections for the tail sum_{k>=n}
    total += n ** (1.0 - s) / (s - 1.0) + 0.5 * n ** (-s)
    fact = s
    power = n ** (-s - 1.0)
    for j, b2j in enumerate(_BERNOULLI_EVEN, start=1):
        total += b2j / math.factorial(2 * j) * fact * power
        # extend s(s+1)...(s+2j) and n^-(s+2j+1) for the next term
        fact *= (s + 2 * j - 1) * (s + 2 * j)
        power /= n * n
    return total


def tail_constant(d: int) -> float:
    """Coefficient c_d of the xi^-2 tail of the limiting density,
    pi^((d-1)/2) / (2^d * d * zeta(d) * Gamma((d+3)/2))."""
    return math.pi ** ((d - 1) / 2.0) / (
        2.0**d * d * riemann_zeta(d) * math.gamma((d + 3) / 2.0)
    )


def near_zero_slope(d: int) -> float:
    """Slope |B^(d-1)|^2 / zeta(d) of the limiting density near zero."""
    return vol_ball(d - 1) ** 2 / riemann_zeta(d)


@dataclass(frozen=True)
class AsymptoticConstants:
    """Bundle of the exact d-dependent constants used throughout."""

    d: int
    vol_ball_dm1: float  # |B^(d-1)|
    vol_ball_d: float  # |B^d|
    sphere_area_dm1: float  # |S^(d-1)|, boundary of the unit ball in R^d
    riemann_zeta_d: float
    tail_c: float
    near_zero_slope: float


def constants_for_dimension(d: int) -> AsymptoticConstants:
    if not 2 <= d <= 8:
        raise UnsupportedDimensionError(f"dimension {d} outside supported range [2, 8]")
    return AsymptoticConstants(
        d=d,
        vol_ball_dm1=vol_ball(d - 1),
        vol_ball_d=vol_ball(d),
        sphere_area_dm1=sphere_area(d),
        riemann_zeta_d=riemann_zeta(d),
        tail_c=tail_constant(d),
        near_zero_slope=near_zero_slope(d),
    )


def phi_near_zero(d: int, xi: float, *, allow_d2: bool = False) -> float:
    """Two-term small-xi value of the limiting density:
    |B^(d-1)| - (|B^(d-1)|^2 / zeta(d)) * xi.

    Valid for d >= 3; the d = 2 evaluation is advisory only and must be
    requested explicitly with ``allow_d2``.  The trust region is
    0 <= xi <= 0.2; outside it the quadratic remainder is not controlled.
    """
    if d < 2:
        raise UnsupportedDimensionError("need d >= 2")
    if d == 2 and not allow_d2:
        raise UnsupportedDimensionError(
            "near-zero expansion is stated for d >= 3; pass allow_d2=True "
            "to evaluate it advisorily in d = 2"
        )
    if not 0.0 <= xi <= 0.2:
        raise ValueError(f"xi={xi} outside trust region [0, 0.2]")
    return vol_ball(d - 1) - near_zero_slope(d) * xi


def phi_tail(d: int, xi: float, *, allow_d2: bool = False) -> float:
    """Leading large-xi value c_d * xi^-2 of the limiting density.

    Valid for d >= 3 (d = 2 advisory); trust region xi >= 2.
    """
    if d < 2:
        raise UnsupportedDimensionError("need d >= 2")
    if d == 2 and not allow_d2:
        raise UnsupportedDimensionError(
            "tail expansion is stated for d >= 3; pass allow_d2=True "
            "to evaluate it advisorily in d = 2"
        )
    if xi < 2.0:
        raise ValueError(f"xi={xi} below trust region [2, inf)")
    return tail_constant(d) * xi**-2.0


class MeanFreePath:
    """Exact mean free path between collisions and its scaled form."""

    __slots__ = ("mfp", "scaled")

    def __init__(self, mfp: float, scaled: float):
        self.mfp = mfp
        self.scaled = scaled

    def __repr__(self):
        return f"MeanFreePath(mfp={self.mfp!r}, scaled={self.scaled!r})"


def mean_free_path_exact(d: int, r: float) -> MeanFreePath:
    """Exact mean of the free path length under the collision measure:

        (1 - r^d |B^d|) / (r^(d-1) |B^(d-1)|)

    valid for any obstacle radius 0 < r < 1/2 on the unit-covolume torus.
    ``scaled`` is r^(d-1) times the mean, i.e. (1 - r^d |B^d|) / |B^(d-1)|,
    which tends to 1/|B^(d-1)| as r -> 0.
    """
    if not 0.0 < r < 0.5:
        raise ValueError(f"radius r={r} outside (0, 1/2)")
    scaled = (1.0 - r**d * vol_ball(d)) / vol_ball(d - 1)
    return MeanFreePath(mfp=scaled / r ** (d - 1), scaled=scaled)


@dataclass(frozen=True)
class EntropyExpansion:
    """Partial expansion of the billiard-map KS entropy in the radius.

    ``partial_sum`` collects the -d(d-1) ln r leading term plus
    (d-1) times the log-moment of the limiting collision-law density.
    The remaining bounded term (a dimension constant in the r -> 0 limit)
    is cited to external work and deliberately NOT computed here;
    ``delta_r_note`` records that.
    """

    d: int
    r: float
    leading: float
    psi_log_moment: float
    psi_log_moment_se: float
    partial_sum: float
    delta_r_note: str = (
        "remainder Delta_r (bounded, converging to a d-dependent constant) "
        "is not computed by this package"
    )


def entropy_expansion(
    d: int, r: float, psi_log_moment: float, psi_log_moment_se: float = math.nan
) -> EntropyExpansion:
    """Assemble -d(d-1) ln r + (d-1) * psi_log_moment.

    ``psi_log_moment`` is an estimate of the mean of ln(xi) under the
    limiting collision law (obtained from boundary-ensemble runs at small r).
    """
    if not 0.0 < r < 1.0:
        raise ValueError("need 0 < r < 1")
    if not math.isfinite(psi_log_moment):
        raise ValueError("psi_log_moment must be finite")
    leading = -d * (d - 1) * math.log(r)
    return EntropyExpansion(
        d=d,
        r=r,
        leading=leading,
        psi_log_moment=psi_log_moment,
        psi_log_moment_se=psi_log_moment_se,
        partial_sum=leading + (d - 1) * psi_log_moment,
    )


def boca_zaharescu_bridge(xi, d: int = 2):
    """Evaluate the d = 2 entropy constant two algebraically equal ways.

    Given boundary-ensemble samples of the scaled free path xi = r * tau,
    returns the pair

        (-mean(ln xi) - ln 2,  -mean(ln(2 xi)))

    The first is the direct form of the limiting entropy constant; the
    second comes from the half-argument change of variables u = 2 xi used
    in the planar literature.  The two must agree to rounding error; the
    pair exists purely as a regression guard on that substitution.
    """
    if d != 2:
        raise UnsupportedDimensionError("bridge identity is specific to d = 2")
    x = np.asarray(xi, dtype=np.float64)
    if x.size == 0:
        raise ValueError("need at least one sample")
    if np.any(x <= 0.0):
        raise ValueError("xi samples must be positive")
    ln2 = math.log(2.0)
    direct = -float(np.mean(np.log(x))) - ln2
    via_doubling = -float(np.mean(np.log(2.0 * x)))
    return direct, via_doubling

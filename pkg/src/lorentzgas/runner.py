"""Run orchestration: stream fan-out, canonical aggregation, persistent
CSV/JSON outputs, and the cross-radius convergence report.

Samples are partitioned into fixed-size per-stream chunks keyed by
(seed, stream_id); the partition depends only on the configuration, never
on the worker count, so every output byte is a function of (config, seed).
Files are written to temporary paths and atomically renamed.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .asymptotics import (
    constants_for_dimension,
    entropy_expansion,
    mean_free_path_exact,
    near_zero_slope,
    vol_ball,
)
from .diophantine import zeta_fn
from .ensembles import (
    DEFAULT_XI_CAP,
    EnsembleKind,
    EnsembleSpec,
    RngStream,
    draw_queries,
    measure_normalizers,
)
from .errors import ConfigError, LorentzGasError, SchemaError
from .geometry import AlphaClass, LatticeConfig, free_path_batch
from .stats import EmpiricalDistribution, ccdf, dkw_band, entropy_constant, tail_fit

__all__ = [
    "RunConfig",
    "SimulationResult",
    "run_simulation",
    "simulate_to_files",
    "write_samples_csv",
    "read_samples_csv",
    "analyze_samples",
    "converge_report",
    "constants_report",
    "dumps_json",
    "write_json",
    "CSV_HEADER",
    "DEFAULT_XI_GRID",
]

CSV_HEADER = ["stream_id", "counter", "ensemble", "d", "r", "tau", "xi", "censored", "cos_in"]
DEFAULT_XI_GRID = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0)
_NEAR_ZERO_PROBES = (0.02, 0.05)
_TAIL_WINDOW = (3.0, 20.0)


@dataclass(frozen=True)
class RunConfig:
    """Everything one simulation needs; validated before any work starts."""

    lattice: LatticeConfig
    ensemble: EnsembleSpec
    n_samples: int
    seed: int
    workers: int = 1
    xi_cap: float = DEFAULT_XI_CAP
    stream_chunk: int = 65536
    out_samples: Optional[str] = None
    out_summary: Optional[str] = None
    radius_ladder: Optional[tuple] = None

    def __post_init__(self):
        if self.n_samples < 1:
            raise ConfigError("n_samples must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.stream_chunk < 1:
            raise ConfigError("stream_chunk must be >= 1")
        if not self.xi_cap > 0:
            raise ConfigError("xi_cap must be positive")
        if not self.lattice.r > 0:
            raise ConfigError("simulation runs need a positive obstacle radius")
        if self.radius_ladder is not None:
            ladder = tuple(float(r) for r in self.radius_ladder)
            if any(b >= a for a, b in zip(ladder, ladder[1:])):
                raise ConfigError("radius_ladder must be strictly decreasing")
            object.__setattr__(self, "radius_ladder", ladder)
        for path in (self.out_samples, self.out_summary):
            if path is not None:
                parent = os.path.dirname(os.path.abspath(path))
                if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
                    raise ConfigError(f"output directory not writable: {parent}")

    @property
    def t_max(self) -> float:
        return self.xi_cap * self.lattice.r ** -(self.lattice.d - 1)

    def stream_layout(self):
        """(stream_id, count) pairs covering n_samples in fixed chunks."""
        full, rem = divmod(self.n_samples, self.stream_chunk)
        layout = [(s, self.stream_chunk) for s in range(full)]
        if rem:
            layout.append((full, rem))
        return layout


def _stream_task(args):
    lattice, ensemble, seed, stream_id, count, t_max = args
    gen = RngStream(seed, stream_id).generator()
    q, v = draw_queries(ensemble, lattice, gen, count)
    tau, cens, _, cos = free_path_batch(lattice, q, v, t_max)
    return stream_id, tau, cens, cos


@dataclass
class SimulationResult:
    """Canonical-order sample arrays plus run provenance."""

    config: RunConfig
    stream_id: np.ndarray = field(repr=False)
    counter: np.ndarray = field(repr=False)
    tau: np.ndarray = field(repr=False)
    censored: np.ndarray = field(repr=False)
    cos_in: np.ndarray = field(repr=False)
    wall_seconds: float = 0.0

    @property
    def xi(self) -> np.ndarray:
        lat = self.config.lattice
        return self.tau * lat.r ** (lat.d - 1)

    @property
    def samples_per_second(self) -> float:
        return self.config.n_samples / self.wall_seconds if self.wall_seconds > 0 else math.inf

    def to_distribution(self) -> EmpiricalDistribution:
        lat = self.config.lattice
        return EmpiricalDistribution.from_samples(
            self.xi,
            self.censored,
            xi_cap=self.config.xi_cap,
            ensemble=self.config.ensemble.kind.value,
            d=lat.d,
            r=lat.r,
            alpha_class=lat.alpha_class.value,
        )


def run_simulation(config: RunConfig) -> SimulationResult:
    """Trace n_samples free flights under the configured ensemble.

    The worker count only parallelizes the fixed stream layout; results are
    merged in stream order, so content is independent of it.
    """
    layout = config.stream_layout()
    tasks = [
        (config.lattice, config.ensemble, config.seed, sid, count, config.t_max)
        for sid, count in layout
    ]
    t0 = time.perf_counter()
    if config.workers == 1 or len(tasks) == 1:
        results = [_stream_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_stream_task, tasks, chunksize=1))
    wall = time.perf_counter() - t0
    results.sort(key=lambda item: item[0])  # canonical merge order
    stream_ids = np.concatenate(
        [np.full(t.shape[0], sid, dtype=np.uint64) for sid, t, _, _ in results]
    )
    counters = np.concatenate(
        [np.arange(t.shape[0], dtype=np.uint64) for _, t, _, _ in results]
    )
    return SimulationResult(
        config=config,
        stream_id=stream_ids,
        counter=counters,
        tau=np.concatenate([t for _, t, _, _ in results]),
        censored=np.concatenate([c for _, _, c, _ in results]),
        cos_in=np.concatenate([c for _, _, _, c in results]),
        wall_seconds=wall,
    )


def censor_corrected_mean(values: np.ndarray, censored: np.ndarray, cap: float):
    """(estimate, half_width, se) for the mean with capped flights restored.

    Under the quadratic tail of the collision law the censored contribution
    to the mean lies between cap*f and 2*cap*f for censored fraction f; the
    midpoint is used and half the interval reported as systematic width.
    """
    n = values.size
    f_cens = censored.sum() / n
    observed_part = float(np.sum(values[~censored])) / n
    estimate = observed_part + 1.5 * cap * f_cens
    half_width = 0.5 * cap * f_cens
    clamped = np.where(censored, cap, values)
    se = float(np.std(clamped, ddof=1) / math.sqrt(n)) if n > 1 else math.nan
    return estimate, half_width, se


def _santalo_block(result: SimulationResult):
    cfg = result.config
    lat = cfg.lattice
    if cfg.ensemble.kind != EnsembleKind.BOUNDARY:
        return {"applies": False, "note": "exact mean free path holds for the boundary ensemble"}
    exact = mean_free_path_exact(lat.d, lat.r).mfp
    est, half, se = censor_corrected_mean(result.tau, result.censored, cfg.t_max)
    z = (est - exact) / se if se > 0 else math.nan
    return {
        "applies": True,
        "exact": exact,
        "mean_tau": est,
        "se_mean_tau": se,
        "censor_correction_half_width": half,
        "zscore": z,
        "within_3se_plus_correction": bool(abs(est - exact) <= 3.0 * se + half),
    }


def _entropy_block(dist: EmpiricalDistribution):
    if dist.ensemble != "boundary":
        return {"applies": False}
    try:
        est = entropy_constant(dist)
    except LorentzGasError as exc:
        return {"applies": False, "skipped": str(exc)}
    return {
        "applies": True,
        "c_r": est.c_r,
        "se_c_r": est.se_c_r,
        "mean_xi": est.mean_xi,
        "se_mean_xi": est.se_mean_xi,
        "mean_log_xi": est.mean_log_xi,
        "se_mean_log_xi": est.se_mean_log_xi,
        "c0_proxy": est.c0_proxy,
        "censored_fraction": est.censored_fraction,
        "censor_bias_mean_bound": est.censor_bias_mean_bound,
        "censor_bias_log_bound": est.censor_bias_log_bound,
    }


def _tail_block(dist: EmpiricalDistribution):
    a_lo, a_hi = _TAIL_WINDOW
    a_hi = min(a_hi, dist.xi_cap / 2.0)
    try:
        fit = tail_fit(dist, a_lo, a_hi)
    except LorentzGasError as exc:
        return {"applies": False, "skipped": str(exc)}
    except ValueError as exc:
        return {"applies": False, "skipped": str(exc)}
    return {
        "applies": True,
        "a_lo": a_lo,
        "a_hi": a_hi,
        "exponent": fit.exponent,
        "amplitude": fit.amplitude,
        "r_squared": fit.r_squared,
        "curved": fit.curved,
    }


def _near_zero_block(dist: EmpiricalDistribution):
    if dist.ensemble != "boundary" or dist.d < 3:
        return {"applies": False, "note": "near-zero law probed for boundary runs with d >= 3"}
    rows = []
    slope = near_zero_slope(dist.d) / vol_ball(dist.d - 1)  # |B^(d-1)| / zeta(d)
    for a in _NEAR_ZERO_PROBES:
        c = ccdf(dist, a)
        predicted = 1.0 - slope * a
        allowance = 3.0 * (c.band + 2.0 * a * a)
        rows.append(
            {
                "a": a,
                "observed": c.value,
                "predicted": predicted,
                "band": c.band,
                "tolerance": allowance,
                "within": bool(abs(c.value - predicted) <= allowance),
            }
        )
    return {"applies": True, "rows": rows}


def build_summary(result: SimulationResult) -> dict:
    cfg = result.config
    lat = cfg.lattice
    dist = result.to_distribution()
    c_mu, c_nu = measure_normalizers(lat)
    return {
        "provenance": {
            "package": "lorentzgas",
            "version": __version__,
            "seed": cfg.seed,
            "d": lat.d,
            "r": lat.r,
            "alpha": [float(a) for a in lat.alpha],
            "alpha_class": lat.alpha_class.value,
            "ensemble": cfg.ensemble.kind.value,
            "n_samples": cfg.n_samples,
            "n_censored": int(result.censored.sum()),
            "xi_cap": cfg.xi_cap,
            "stream_chunk": cfg.stream_chunk,
            "workers": cfg.workers,
            "c_mu": c_mu,
            "c_nu": c_nu,
        },
        "santalo": _santalo_block(result),
        "entropy": _entropy_block(dist),
        "tail": _tail_block(dist),
        "near_zero": _near_zero_block(dist),
        "timing": {
            "wall_seconds": result.wall_seconds,
            "samples_per_second": result.samples_per_second,
            "throughput_floor_note": "floor of 1e5 samples/s/worker is tracked, alerting only",
        },
    }


# ---------------------------------------------------------------------------
# persistence


def _float_repr(x: float, sig: int) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, f".{sig}g")


def dumps_json(obj, sig: int = 17, indent: int = 0) -> str:
    """JSON text with every float rendered at ``sig`` significant digits
    (round-trip exact at 17)."""
    pad = " " * indent
    nl = "\n" if indent else ""

    def enc(o, depth):
        inner = pad * (depth + 1)
        outer = pad * depth
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [
                f"{nl}{inner}{json.dumps(str(k))}: {enc(v, depth + 1)}" for k, v in o.items()
            ]
            return "{" + ",".join(items) + f"{nl}{outer}" + "}"
        if isinstance(o, (list, tuple)) or isinstance(o, np.ndarray):
            seq = list(o)
            if not seq:
                return "[]"
            items = [f"{nl}{inner}{enc(v, depth + 1)}" for v in seq]
            return "[" + ",".join(items) + f"{nl}{outer}" + "]"
        if isinstance(o, (bool, np.bool_)):
            return "true" if o else "false"
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return _float_repr(float(o), sig)
        if o is None:
            return "null"
        return json.dumps(str(o))

    return enc(obj, 0) + nl


def _atomic_write_text(path, text: str):
    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(obj, path, sig: int = 17):
    _atomic_write_text(path, dumps_json(obj, sig=sig, indent=2))


def write_samples_csv(result: SimulationResult, path):
    """Sample file: one row per flight, canonical (stream_id, counter) order,
    floats at 17 significant digits, atomic rename on completion."""
    cfg = result.config
    lat = cfg.lattice
    ens = cfg.ensemble.kind.value
    scale = lat.r ** (lat.d - 1)
    path = os.fspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            d_str = str(lat.d)
            r_str = format(lat.r, ".17g")
            for i in range(result.tau.shape[0]):
                tau = result.tau[i]
                writer.writerow(
                    [
                        int(result.stream_id[i]),
                        format(int(result.counter[i]), "x"),
                        ens,
                        d_str,
                        r_str,
                        format(tau, ".17g"),
                        format(tau * scale, ".17g"),
                        1 if result.censored[i] else 0,
                        "nan" if math.isnan(result.cos_in[i]) else format(result.cos_in[i], ".17g"),
                    ]
                )
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_samples_csv(path):
    """Parse a sample CSV back into arrays + metadata, validating the schema."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty sample file") from None
        if header != CSV_HEADER:
            for got, want in zip(header, CSV_HEADER):
                if got != want:
                    raise SchemaError(f"unexpected column {got!r} where {want!r} expected")
            raise SchemaError(
                f"column count mismatch: got {len(header)}, expected {len(CSV_HEADER)}"
            )
        rows = list(reader)
    if not rows:
        raise SchemaError("sample file has a header but no rows")
    n = len(rows)
    out = {
        "stream_id": np.empty(n, dtype=np.uint64),
        "counter": np.empty(n, dtype=np.uint64),
        "tau": np.empty(n),
        "xi": np.empty(n),
        "censored": np.empty(n, dtype=bool),
        "cos_in": np.empty(n),
    }
    ensembles = set()
    ds = set()
    rs = set()
    for i, row in enumerate(rows):
        if len(row) != len(CSV_HEADER):
            raise SchemaError(f"row {i + 2} has {len(row)} fields")
        try:
            out["stream_id"][i] = int(row[0])
            out["counter"][i] = int(row[1], 16)
            ensembles.add(row[2])
            ds.add(int(row[3]))
            rs.add(float(row[4]))
            out["tau"][i] = float(row[5])
            out["xi"][i] = float(row[6])
            out["censored"][i] = bool(int(row[7]))
            out["cos_in"][i] = float(row[8])
        except ValueError as exc:
            raise SchemaError(f"row {i + 2}: {exc}") from None
    if len(ensembles) != 1 or len(ds) != 1 or len(rs) != 1:
        raise SchemaError("mixed (ensemble, d, r) values in one sample file")
    out["ensemble"] = ensembles.pop()
    out["d"] = ds.pop()
    out["r"] = rs.pop()
    out["xi_cap"] = float(np.max(out["xi"])) if out["censored"].any() else math.inf
    return out


def distribution_from_csv(path, xi_cap: Optional[float] = None) -> EmpiricalDistribution:
    data = read_samples_csv(path)
    cap = xi_cap
    if cap is None:
        cap = data["xi_cap"] if math.isfinite(data["xi_cap"]) else float(np.max(data["xi"])) * 2.0
    return EmpiricalDistribution.from_samples(
        data["xi"], data["censored"], xi_cap=cap,
        ensemble=data["ensemble"], d=data["d"], r=data["r"],
    )


def simulate_to_files(config: RunConfig):
    """Run, then persist the sample CSV and the summary JSON as configured."""
    result = run_simulation(config)
    summary = build_summary(result)
    if config.out_samples:
        write_samples_csv(result, config.out_samples)
    if config.out_summary:
        write_json(summary, config.out_summary)
    return result, summary


# ---------------------------------------------------------------------------
# analyze / converge / constants reports


def analyze_samples(path, ops: Sequence[str], a_grid=None, paired_path=None, h=None):
    """Run the requested analyses over a sample file; one JSON-able dict out."""
    from .stats import cross_ensemble_check, density_fd  # local to avoid cycles

    dist = distribution_from_csv(path)
    report = {
        "source": os.fspath(path),
        "ensemble": dist.ensemble,
        "d": dist.d,
        "r": dist.r,
        "n_total": dist.n_total,
        "n_censored": dist.n_censored,
    }
    grid = list(a_grid) if a_grid is not None else [a for a in DEFAULT_XI_GRID if a < dist.xi_cap]
    for op in ops:
        if op == "ccdf":
            rows = []
            for a in grid:
                c = ccdf(dist, a)
                rows.append({"a": a, "ccdf": c.value, "band_lo": c.lo, "band_hi": c.hi,
                             "n_effective": dist.count_above(a)})
            report["ccdf"] = rows
        elif op == "density":
            rows = []
            for a in grid:
                est = density_fd(dist, a, h)
                rows.append({"a": a, "density": est.value, "bound": est.bound,
                             "h": est.h, "low_count": est.low_count})
            report["density"] = rows
        elif op == "tail":
            report["tail"] = _tail_block(dist)
        elif op == "entropy":
            report["entropy"] = _entropy_block(dist)
        elif op == "cross":
            if paired_path is None:
                raise ConfigError("cross op needs a paired sample file")
            other = distribution_from_csv(paired_path)
            mu_dist, nu_dist = (dist, other) if dist.ensemble == "phase" else (other, dist)
            if mu_dist.ensemble != "phase" or nu_dist.ensemble != "boundary":
                raise ConfigError("cross op needs one phase and one boundary sample file")
            rows = cross_ensemble_check(mu_dist, nu_dist, grid, h=h)
            report["cross"] = [
                {
                    "a": row.a,
                    "nu_ccdf": row.nu_ccdf,
                    "phi_density_scaled": row.phi_density_scaled,
                    "residual": row.residual,
                    "sigma": row.sigma,
                    "combined_bound": row.combined_bound,
                    "within": row.within_bound,
                    "low_count": row.low_count,
                }
                for row in rows
            ]
        else:
            raise ConfigError(f"unknown analysis op {op!r}")
    return report


GOLDEN_FRACTION = (math.sqrt(5.0) - 1.0) / 2.0


def default_alpha_variants(d: int):
    """The shift trichotomy probed by the convergence report."""
    return [
        {"name": "integer", "alpha": np.zeros(d), "alpha_class": AlphaClass.INTEGER,
         "rational_q": None},
        {"name": "rational_1_3", "alpha": np.full(d, 1.0 / 3.0),
         "alpha_class": AlphaClass.RATIONAL, "rational_q": 3},
        {"name": "golden", "alpha": np.full(d, GOLDEN_FRACTION),
         "alpha_class": AlphaClass.IRRATIONAL, "rational_q": None},
    ]


def converge_report(
    d: int,
    radius_ladder: Sequence[float],
    n_samples: int,
    seed: int,
    xi_grid: Sequence[float] = DEFAULT_XI_GRID,
    variants=None,
    workers: int = 1,
    xi_cap: float = DEFAULT_XI_CAP,
) -> dict:
    """Self-convergence probe across a radius ladder for each shift variant.

    For every variant the finest radius is the reference; D(r) is the sup
    over the xi grid of the CCDF difference against it.  Integer shifts use
    the phase ensemble; non-integer shifts use the fixed-point ensemble at
    the base point -alpha M matched to the shifted lattice.  Rates are
    reported as observations, not gated.
    """
    ladder = tuple(float(r) for r in radius_ladder)
    if len(ladder) < 4:
        raise ConfigError("need a ladder of at least 4 radii")
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise ConfigError("radius ladder must be strictly decreasing")
    if variants is None:
        variants = default_alpha_variants(d)
    grid = tuple(float(a) for a in xi_grid)
    report = {
        "banner": (
            "self-convergence report: the finest-radius run is the reference "
            "distribution (no closed-form limit exists for d >= 3); "
            "fitted rates are observations, not pass/fail gates"
        ),
        "d": d,
        "radius_ladder": list(ladder),
        "xi_grid": list(grid),
        "n_samples": n_samples,
        "seed": seed,
        "variants": [],
    }
    band = 2.0 * dkw_band(n_samples)  # both CCDFs carry a band
    for var in variants:
        alpha = np.asarray(var["alpha"], dtype=np.float64)
        curves = []
        zetas = []
        for r in ladder:
            lattice = LatticeConfig(
                d=d, m=np.eye(d), alpha=alpha, alpha_class=var["alpha_class"],
                r=r, rational_q=var.get("rational_q"),
            )
            if var["alpha_class"] == AlphaClass.INTEGER:
                spec = EnsembleSpec(kind=EnsembleKind.PHASE)
            else:
                spec = EnsembleSpec(kind=EnsembleKind.FIXED_POINT,
                                    base_point=-alpha @ lattice.m)
            cfg = RunConfig(lattice=lattice, ensemble=spec, n_samples=n_samples,
                            seed=seed, workers=workers, xi_cap=xi_cap)
            dist = run_simulation(cfg).to_distribution()
            curves.append(np.array([ccdf(dist, a).value for a in grid]))
            t_scale = r ** (-(d - 1) / 2.0)
            z = zeta_fn(alpha, min(t_scale, 2.0**53))
            zetas.append(z.value if not z.capped else None)
        ref = curves[-1]
        rows = []
        for i, r in enumerate(ladder[:-1]):
            dev = float(np.max(np.abs(curves[i] - ref)))
            rows.append(
                {
                    "r": r,
                    "sup_ccdf_deviation": dev,
                    "band": band,
                    "resolution_limited": bool(dev <= band),
                    "zeta_at_r_scale": zetas[i],
                }
            )
        usable = [(math.log(row["r"]), math.log(row["sup_ccdf_deviation"]))
                  for row in rows if row["sup_ccdf_deviation"] > 0]
        if len(usable) >= 2:
            xs, ys = zip(*usable)
            slope, intercept = np.polyfit(xs, ys, 1)
            fit = {"rate": float(slope), "log_amplitude": float(intercept)}
        else:
            fit = {"rate": None, "log_amplitude": None}
        report["variants"].append(
            {
                "name": var["name"],
                "alpha": [float(a) for a in alpha],
                "alpha_class": AlphaClass(var["alpha_class"]).value,
                "ensemble": "phase" if var["alpha_class"] == AlphaClass.INTEGER else "fixed",
                "reference_r": ladder[-1],
                "zeta_at_reference": zetas[-1],
                "rows": rows,
                "loglog_fit": fit,
            }
        )
    return report


def constants_report(d: int, radii: Sequence[float] = (0.1, 0.05, 0.02, 0.01)) -> dict:
    """Machine-readable exact constants and closed-form values for one d."""
    consts = constants_for_dimension(d)
    out = {
        "d": d,
        "vol_ball_dm1": consts.vol_ball_dm1,
        "vol_ball_d": consts.vol_ball_d,
        "sphere_area_dm1": consts.sphere_area_dm1,
        "riemann_zeta_d": consts.riemann_zeta_d,
        "tail_c": consts.tail_c,
        "near_zero_slope": consts.near_zero_slope,
        "mean_free_path": [],
        "entropy_leading": [],
    }
    if d == 2:
        out["near_zero_advisory"] = (
            "the near-zero and tail expansions are stated for d >= 3; "
            "d = 2 values are advisory only"
        )
    for r in radii:
        mfp = mean_free_path_exact(d, r)
        out["mean_free_path"].append({"r": r, "mfp": mfp.mfp, "scaled": mfp.scaled})
        out["entropy_leading"].append(
            {"r": r, "leading": entropy_expansion(d, r, 0.0).leading}
        )
    return out

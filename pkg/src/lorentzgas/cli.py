"""Command line surface: simulate, analyze, converge, constants, zeta.

Exit statuses: 0 success, 2 configuration error, 3 runtime error.
The environment variable LORENTZGAS_WORKERS overrides the default worker
count; an explicit --workers flag wins over it.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .configfile import parse_alpha, parse_config_file
from .diophantine import diophantine_exponent_probe, zeta_fn
from .ensembles import DEFAULT_XI_CAP, EnsembleSpec
from .errors import ConfigError, LorentzGasError
from .geometry import LatticeConfig
from .runner import (
    DEFAULT_XI_GRID,
    RunConfig,
    analyze_samples,
    constants_report,
    converge_report,
    dumps_json,
    simulate_to_files,
    write_json,
)


def _csv_floats(text):
    return [float(p) for p in text.split(",") if p.strip()]


def _build_parser():
    p = argparse.ArgumentParser(prog="lorentzgas", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="trace free flights and write samples + summary")
    sim.add_argument("--config", help="flat key = value config file; flags override it")
    sim.add_argument("--dim", type=int)
    sim.add_argument("--radius", type=float)
    sim.add_argument("--alpha", help="shift vector: floats, fractions like 1/3, or 'golden'")
    sim.add_argument("--alpha-class", choices=["integer", "rational", "irrational"])
    sim.add_argument("--rational-q", type=int)
    sim.add_argument("--basis", help="'identity' or d*d comma floats, row major")
    sim.add_argument("--ensemble", choices=["fixed", "phase", "boundary"])
    sim.add_argument("--base-point", help="comma floats (fixed ensemble)")
    sim.add_argument("--samples", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--workers", type=int)
    sim.add_argument("--xi-cap", type=float)
    sim.add_argument("--stream-chunk", type=int)
    sim.add_argument("--out", help="prefix: writes PREFIX.csv and PREFIX.json")
    sim.add_argument("--out-samples")
    sim.add_argument("--out-summary")

    ana = sub.add_parser("analyze", help="re-analyze a sample CSV")
    ana.add_argument("samples")
    ana.add_argument("--ops", default="ccdf", help="comma list: ccdf,density,tail,entropy,cross")
    ana.add_argument("--grid", help="comma list of xi values")
    ana.add_argument("--paired", help="second sample file for the cross op")
    ana.add_argument("--bandwidth", type=float)
    ana.add_argument("--out")

    conv = sub.add_parser("converge", help="cross-radius self-convergence report")
    conv.add_argument("--dim", type=int, required=True)
    conv.add_argument("--radii", required=True, help="strictly decreasing comma list, >= 4 values")
    conv.add_argument("--samples", type=int, default=100_000)
    conv.add_argument("--seed", type=int, default=1)
    conv.add_argument("--xi-grid", default=",".join(str(a) for a in DEFAULT_XI_GRID))
    conv.add_argument("--workers", type=int)
    conv.add_argument("--xi-cap", type=float, default=DEFAULT_XI_CAP)
    conv.add_argument("--out")

    cons = sub.add_parser("constants", help="exact constants for one dimension")
    cons.add_argument("--dim", type=int, required=True)
    cons.add_argument("--radii", default="0.1,0.05,0.02,0.01")
    cons.add_argument("--out")

    zet = sub.add_parser("zeta", help="approximation-speed function zeta(b, T)")
    zet.add_argument("--b", required=True, help="comma floats, or 'golden'")
    zet.add_argument("--t", type=float)
    zet.add_argument("--t-grid", help="LO:HI:N log-spaced probe grid")
    zet.add_argument("--n-cap", type=int, default=10_000_000)
    zet.add_argument("--out")
    return p


def _default_workers(flag_value):
    if flag_value is not None:
        return flag_value
    env = os.environ.get("LORENTZGAS_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"LORENTZGAS_WORKERS={env!r}: {exc}") from None
    return None


def _merge(flag, filed, fallback):
    if flag is not None:
        return flag
    if filed is not None:
        return filed
    return fallback


def _run_simulate(args) -> int:
    file_cfg = parse_config_file(args.config) if args.config else {}
    lat = file_cfg.get("lattice", {})
    ens = file_cfg.get("ensemble", {})
    run = file_cfg.get("run", {})
    ladder = file_cfg.get("ladder", {})

    d = _merge(args.dim, lat.get("d"), None)
    r = _merge(args.radius, lat.get("radius"), None)
    if d is None or r is None:
        raise ConfigError("simulate needs --dim and --radius (or a config file)")
    alpha_text = _merge(args.alpha, lat.get("alpha"), "0")
    alpha, alpha_class, rational_q = parse_alpha(str(alpha_text), d)
    alpha_class = _merge(args.alpha_class, lat.get("alpha_class"), alpha_class)
    rational_q = _merge(args.rational_q, lat.get("rational_q"), rational_q)
    basis_text = _merge(args.basis, lat.get("basis"), "identity")
    if basis_text == "identity":
        m = np.eye(d)
    else:
        vals = _csv_floats(basis_text)
        if len(vals) != d * d:
            raise ConfigError(f"basis needs {d * d} entries, got {len(vals)}")
        m = np.array(vals).reshape(d, d)
    lattice = LatticeConfig(
        d=d, m=m, alpha=alpha, alpha_class=alpha_class, r=r, rational_q=rational_q
    )

    kind = _merge(args.ensemble, ens.get("kind"), "phase")
    base_point = _merge(args.base_point, ens.get("base_point"), None)
    if isinstance(base_point, str):
        base_point = _csv_floats(base_point)
    spec = EnsembleSpec(
        kind=kind,
        base_point=np.asarray(base_point, dtype=float) if base_point is not None else None,
    )

    out_samples = _merge(args.out_samples, run.get("out_samples"), None)
    out_summary = _merge(args.out_summary, run.get("out_summary"), None)
    if args.out:
        out_samples = out_samples or args.out + ".csv"
        out_summary = out_summary or args.out + ".json"
    if out_samples is None and out_summary is None:
        raise ConfigError("simulate needs --out (or --out-samples/--out-summary)")

    config = RunConfig(
        lattice=lattice,
        ensemble=spec,
        n_samples=_merge(args.samples, run.get("samples"), 0),
        seed=_merge(args.seed, run.get("seed"), 0),
        workers=_merge(_default_workers(args.workers), run.get("workers"), 1),
        xi_cap=_merge(args.xi_cap, ens.get("xi_cap"), DEFAULT_XI_CAP),
        stream_chunk=_merge(args.stream_chunk, run.get("stream_chunk"), 65536),
        out_samples=out_samples,
        out_summary=out_summary,
        radius_ladder=ladder.get("radii"),
    )
    _, summary = simulate_to_files(config)
    sys.stdout.write(dumps_json(summary["timing"], indent=2))
    return 0


def _run_analyze(args) -> int:
    ops = [op.strip() for op in args.ops.split(",") if op.strip()]
    grid = _csv_floats(args.grid) if args.grid else None
    report = analyze_samples(
        args.samples, ops, a_grid=grid, paired_path=args.paired, h=args.bandwidth
    )
    text = dumps_json(report, indent=2)
    if args.out:
        write_json(report, args.out)
    else:
        sys.stdout.write(text)
    return 0


def _run_converge(args) -> int:
    report = converge_report(
        d=args.dim,
        radius_ladder=_csv_floats(args.radii),
        n_samples=args.samples,
        seed=args.seed,
        xi_grid=_csv_floats(args.xi_grid),
        workers=_default_workers(args.workers) or 1,
        xi_cap=args.xi_cap,
    )
    if args.out:
        write_json(report, args.out)
    else:
        sys.stdout.write(dumps_json(report, indent=2))
    return 0


def _run_constants(args) -> int:
    report = constants_report(args.dim, radii=_csv_floats(args.radii))
    text = dumps_json(report, sig=15, indent=2)
    if args.out:
        write_json(report, args.out, sig=15)
    else:
        sys.stdout.write(text)
    return 0


def _run_zeta(args) -> int:
    if args.b == "golden":
        from .configfile import GOLDEN_FRACTION

        b = np.array([GOLDEN_FRACTION])
    else:
        b = np.array(_csv_floats(args.b))
    if args.t_grid:
        try:
            lo, hi, n = args.t_grid.split(":")
            grid = np.geomspace(float(lo), float(hi), int(n))
        except ValueError as exc:
            raise ConfigError(f"--t-grid must be LO:HI:N: {exc}") from None
        probe = diophantine_exponent_probe(b, grid, n_cap=args.n_cap)
        report = {
            "b": [float(x) for x in b],
            "slope": probe.slope,
            "t_grid": [float(t) for t in probe.t_grid],
            "zeta_values": [int(z) for z in probe.zeta_values],
        }
    elif args.t is not None:
        z = zeta_fn(b, args.t, n_cap=args.n_cap)
        report = {"b": [float(x) for x in b], "t": args.t,
                  "zeta": z.value, "capped": z.capped}
    else:
        raise ConfigError("zeta needs --t or --t-grid")
    if args.out:
        write_json(report, args.out)
    else:
        sys.stdout.write(dumps_json(report, indent=2))
    return 0


_DISPATCH = {
    "simulate": _run_simulate,
    "analyze": _run_analyze,
    "converge": _run_converge,
    "constants": _run_constants,
    "zeta": _run_zeta,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except LorentzGasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

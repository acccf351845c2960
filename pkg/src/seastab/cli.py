"""Command-line interface.

Subcommands: analyze, pti, crossing, simulate, correlate, gen-fixtures.
Exit codes: 0 success, 1 input error, 2 numerical failure.  The environment
variable SEASTAB_WORKERS sets the batch fan-out width.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as sio
from .crossing import stability_scan, default_p_grid
from .simulate import (
    NlsParams,
    SimGrid,
    SimulationError,
    draw_realization,
    evolve,
    linear_probe_elevation,
    max_stable_dt,
    probe_series,
)
from .spectra import SpectrumError, frequency_to_wavenumber, rescale
from .stability import CurveScanPlan, classify, gamma_curve
from .stats import StatisticsError, sea_state_stats, zero_crossing_crests
from .transform import QuadratureError, QuadratureParams

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2


def _add_quadrature_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("quadrature")
    group.add_argument("--eta", type=float, default=1e-4,
                       help="regularization parameter (default 1e-4)")
    group.add_argument("--rel-tol", type=float, default=1e-2)
    group.add_argument("--abs-tol", type=float, default=1e-6)
    group.add_argument("--initial-panels", type=int, default=64)
    group.add_argument("--max-levels", type=int, default=12)


def _add_scan_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("curve scan")
    group.add_argument("--n-t", type=int, default=161,
                       help="points per curve (default 161)")
    group.add_argument("--t-pad", type=float, default=0.5,
                       help="relative padding of the t range (default 0.5)")
    group.add_argument("--x-values", type=str, default=None,
                       help="comma-separated X sweep overriding the default")


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("simulation grid")
    group.add_argument("--grid-n", type=int, default=1024,
                       help="number of spatial modes (default 1024)")
    group.add_argument("--kmax-factor", type=float, default=8.0,
                       help="spectral half-width as a multiple of k0")


def _quadrature(args) -> QuadratureParams:
    return QuadratureParams(eta=args.eta, rel_tol=args.rel_tol,
                            abs_tol=args.abs_tol,
                            initial_panels=args.initial_panels,
                            max_levels=args.max_levels)


def _plan(args) -> CurveScanPlan:
    kwargs = {"n_t": args.n_t, "t_pad": args.t_pad,
              "quadrature": _quadrature(args)}
    if args.x_values:
        kwargs["x_values"] = tuple(float(v) for v in args.x_values.split(","))
    return CurveScanPlan(**kwargs)


def _cmd_analyze(args) -> int:
    rows = sio.batch_analyze(args.input_dir, args.out_dir, plan=_plan(args))
    out_dir = Path(args.out_dir)
    if rows:
        from .plots import plot_scatter
        bfi = [r.summary.bfi for r in rows]
        pti = [r.report.pti for r in rows]
        if any(b > 0 for b in bfi):
            plot_scatter(bfi, pti, "BFI", "PTI", out_dir / "pti_vs_bfi.png",
                         loglog=all(b > 0 and p > 0 for b, p in zip(bfi, pti)))
    for row in rows:
        verdict = "stable" if row.report.stable else "unstable"
        print(f"{row.spectrum_id}: {verdict} pti={row.report.pti:.4f}")
    if any(not r.report.complete for r in rows):
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_pti(args) -> int:
    spec = sio.parse_spectrum(args.spectrum)
    from .spectra import FrequencySpectrum
    if isinstance(spec, FrequencySpectrum):
        spec = frequency_to_wavenumber(spec)
    p = rescale(spec)
    plan = _plan(args)
    report = classify(p, plan)
    payload = {
        "id": spec.provenance,
        "stable": report.stable,
        "pti": report.pti,
        "distance": report.distance,
        "unstable_wavenumbers": list(report.unstable_wavenumbers),
        "complete": report.complete,
    }
    print(json.dumps(payload, indent=2))
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(json.dumps(payload, indent=2) + "\n")
        curves = [gamma_curve(p, x, plan) for x in plan.x_values]
        csvs = []
        for curve in curves:
            path = out_dir / f"curve_x{curve.x:g}.csv"
            sio.emit_curve_csv(curve, path)
            csvs.append(path)
        from .plots import emit_plot_script, plot_curves
        plot_curves(curves, out_dir / "curves.png", title=spec.provenance)
        emit_plot_script(csvs, out_dir)
    if not report.complete:
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_crossing(args) -> int:
    bg_a, bg_b, coeffs, contour, p_grid = sio.parse_crossing_config(args.config)
    report = stability_scan(bg_a, bg_b, coeffs, p_grid=p_grid, contour=contour)
    payload = sio.crossing_report_payload(report)
    print(json.dumps(payload, indent=2))
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    if not report.bounded:
        return EXIT_NUMERICAL
    return EXIT_OK


def _spectrum_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(p for p in path.iterdir() if p.suffix == ".csv")
    return [path]


def _cmd_simulate(args) -> int:
    grid_kwargs = {"n": args.grid_n, "kmax_factor": args.kmax_factor}
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for path in _spectrum_files(Path(args.spectrum)):
        spec = sio.parse_spectrum(path)
        from .spectra import FrequencySpectrum, spectral_summary, wavenumber_to_frequency
        if isinstance(spec, FrequencySpectrum):
            kspec = frequency_to_wavenumber(spec)
            fspec = spec
        else:
            kspec = spec
            fspec = wavenumber_to_frequency(spec)
        summary = spectral_summary(fspec, kspec.k0)
        grid = SimGrid(k0=kspec.k0, **grid_kwargs)
        params = NlsParams(k0=kspec.k0)
        records = []
        samples = []
        times = np.arange(0.0, args.duration, args.dt_out)
        for r in range(args.realizations):
            real = draw_realization(kspec, grid, seed=args.seed + r,
                                    spectrum_id=kspec.provenance)
            if args.backend == "linear-direct":
                for xp in np.linspace(0.0, grid.x_max / 2, args.probes, endpoint=False):
                    eta = linear_probe_elevation(real, params, float(xp), times)
                    records.append(zero_crossing_crests(eta))
                    samples.append(eta)
            else:
                dt = min(args.dt, max_stable_dt(grid, params))
                hist = evolve(real, args.backend, params, args.duration,
                              dt, dt_out=args.dt_out)
                for series in probe_series(hist)[:args.probes]:
                    records.append(zero_crossing_crests(series.eta))
                    samples.append(series.eta)
        stats = sea_state_stats(records, np.concatenate(samples),
                                hs_override=summary.hs if args.spectral_hs else None)
        ident = kspec.provenance or path.stem
        rows.append((ident, stats))
        print(f"{ident}: n_crests={stats.n_crests} kurtosis={stats.excess_kurtosis:.4f} "
              f"p_rogue={stats.p_rogue:.3e}")
    import csv as _csv
    with (out_dir / "stats.csv").open("w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["id", "hs_timeseries", "kurtosis", "p_rogue", "n_crests"])
        for ident, stats in sorted(rows):
            writer.writerow([ident, repr(stats.hs_timeseries),
                             repr(stats.excess_kurtosis), repr(stats.p_rogue),
                             stats.n_crests])
    return EXIT_OK


def _cmd_correlate(args) -> int:
    result = sio.correlate(args.summary, args.stats, args.out_dir)
    out_dir = Path(args.out_dir)
    from .plots import emit_plot_script, plot_scatter
    scatters = sorted(out_dir.glob("scatter_*.csv"))
    emit_plot_script([*scatters], out_dir)
    for (xcol, ycol), rho in result.items():
        print(f"spearman({xcol}, {ycol}) = {rho:.4f}")
        xs, ys = [], []
        import csv as _csv
        with (out_dir / f"scatter_{xcol}_{ycol}.csv").open(newline="") as fh:
            for record in _csv.DictReader(fh):
                xs.append(float(record[xcol]))
                ys.append(float(record[ycol]))
        loglog = ycol == "bfi" or xcol == "bfi"
        plot_scatter(xs, ys, xcol.upper(), ycol.upper(),
                     out_dir / f"scatter_{xcol}_{ycol}.png", loglog=loglog)
    return EXIT_OK


def _cmd_gen_fixtures(args) -> int:
    paths = sio.generate_jonswap_family(
        args.out_dir, n_spectra=args.n,
        gamma_range=(args.gamma_min, args.gamma_max),
        hs_range=(args.hs_min, args.hs_max),
        omega_p=args.omega_p)
    print(f"wrote {len(paths)} spectra to {args.out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seastab",
        description="Modulational-instability screening of ocean-wave spectra")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify every spectrum in a directory")
    p.add_argument("input_dir")
    p.add_argument("out_dir")
    _add_quadrature_flags(p)
    _add_scan_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("pti", help="classify one spectrum; emit curves")
    p.add_argument("spectrum")
    p.add_argument("--out-dir", default=None)
    _add_quadrature_flags(p)
    _add_scan_flags(p)
    p.set_defaults(func=_cmd_pti)

    p = sub.add_parser("crossing", help="crossing-seas stability scan from JSON config")
    p.add_argument("config")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_crossing)

    p = sub.add_parser("simulate", help="Monte Carlo wave statistics")
    p.add_argument("spectrum", help="spectrum file or directory of files")
    p.add_argument("out_dir")
    p.add_argument("--backend", default="linear-direct",
                   choices=["linear-direct", "linear", "nls_split_step"])
    p.add_argument("--realizations", type=int, default=16)
    p.add_argument("--duration", type=float, default=3600.0)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--dt-out", type=float, default=0.05)
    p.add_argument("--probes", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spectral-hs", action="store_true",
                   help="use 4*sqrt(m0) instead of the time-series Hs for "
                        "the rogue threshold")
    _add_grid_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("correlate", help="rank-correlate PTI against MC statistics")
    p.add_argument("summary")
    p.add_argument("stats")
    p.add_argument("out_dir")
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("gen-fixtures", help="write a synthetic JONSWAP family")
    p.add_argument("out_dir")
    p.add_argument("-n", type=int, default=20)
    p.add_argument("--gamma-min", type=float, default=1.0)
    p.add_argument("--gamma-max", type=float, default=6.0)
    p.add_argument("--hs-min", type=float, default=1.0)
    p.add_argument("--hs-max", type=float, default=11.0)
    p.add_argument("--omega-p", type=float, default=0.8)
    p.set_defaults(func=_cmd_gen_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QuadratureError, SimulationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (sio.IoError, SpectrumError, StatisticsError, FileNotFoundError,
            NotADirectoryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

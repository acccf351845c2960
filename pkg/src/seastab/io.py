"""File formats, batch orchestration and synthetic fixture generation.

Spectrum files are two-column CSVs with a single comment header carrying the
metadata the numeric columns cannot::

    # kind=wavenumber k0=0.0277 id=buoy-42
    0.010,1.25e-3
    ...

``kind`` selects the abscissa (rad/m wavenumbers or rad/s frequencies),
``k0`` is the reference wavenumber (``auto`` picks the spectral peak), and
``id`` names the sea state in batch summaries.
"""

from __future__ import annotations

import csv
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .crossing import (
    Contour2DParams,
    CoupledNlsCoefficients,
    CrossingReport,
    HomogeneousBackground2D,
    WavetrainCoefficients,
)
from .spectra import (
    DiscreteSpectrum,
    FrequencySpectrum,
    SpectralSummary,
    SpectrumError,
    frequency_to_wavenumber,
    rescale,
    select_k0,
    spectral_summary,
    wavenumber_to_frequency,
)
from .stability import CurveScanPlan, StabilityReport, classify

WORKERS_ENV = "SEASTAB_WORKERS"

__all__ = [
    "WORKERS_ENV",
    "AnalysisRow",
    "IoError",
    "batch_analyze",
    "correlate",
    "emit_curve_csv",
    "emit_spectrum",
    "generate_jonswap_family",
    "jonswap_density",
    "parse_crossing_config",
    "parse_spectrum",
    "worker_count",
]


class IoError(ValueError):
    """Malformed input file or inconsistent batch inputs."""


def worker_count() -> int:
    """Batch fan-out width, from the SEASTAB_WORKERS environment variable."""
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise IoError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from exc
    if n < 1:
        raise IoError(f"{WORKERS_ENV} must be >= 1, got {n}")
    return n


# ---------------------------------------------------------------------------
# spectrum files


def _parse_header(line: str, path: str) -> dict:
    if not line.startswith("#"):
        raise IoError(f"{path}:1: expected a '# kind=... k0=... id=...' header")
    fields = {}
    for token in line.lstrip("#").split():
        if "=" not in token:
            raise IoError(f"{path}:1: malformed header token {token!r}")
        key, value = token.split("=", 1)
        fields[key] = value
    if fields.get("kind") not in ("wavenumber", "frequency"):
        raise IoError(f"{path}:1: kind must be 'wavenumber' or 'frequency'")
    return fields


def parse_spectrum(path: str | Path) -> DiscreteSpectrum | FrequencySpectrum:
    """Read a spectrum file; the header decides the returned type.

    Wavenumber files yield DiscreteSpectrum (``k0=auto`` resolves to the
    spectral peak); frequency files yield FrequencySpectrum.  Malformed rows
    raise IoError with the offending line number.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise IoError(f"{path}: empty file")
    header = _parse_header(lines[0], str(path))
    abscissa, density = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise IoError(f"{path}:{lineno}: expected two comma-separated columns")
        try:
            abscissa.append(float(parts[0]))
            density.append(float(parts[1]))
        except ValueError as exc:
            raise IoError(f"{path}:{lineno}: non-numeric row") from exc
    xs = np.asarray(abscissa)
    ds = np.asarray(density)
    ident = header.get("id", path.stem)
    try:
        if header["kind"] == "frequency":
            return FrequencySpectrum(omega=xs, density=ds, provenance=ident)
        k0_field = header.get("k0", "auto")
        if k0_field == "auto":
            spec = DiscreteSpectrum(k=xs, density=ds, k0=float(xs[np.argmax(ds)]),
                                    provenance=ident)
            return DiscreteSpectrum(k=xs, density=ds, k0=select_k0(spec, "peak"),
                                    provenance=ident)
        return DiscreteSpectrum(k=xs, density=ds, k0=float(k0_field), provenance=ident)
    except (SpectrumError, ValueError) as exc:
        raise IoError(f"{path}: {exc}") from exc


def emit_spectrum(spectrum: DiscreteSpectrum | FrequencySpectrum, path: str | Path) -> None:
    """Write a spectrum file that parse_spectrum round-trips bit-exactly.

    Floats are emitted with repr (shortest round-trip form in Python 3).
    """
    path = Path(path)
    if isinstance(spectrum, DiscreteSpectrum):
        header = f"# kind=wavenumber k0={spectrum.k0!r} id={spectrum.provenance or path.stem}"
        xs, ds = spectrum.k, spectrum.density
    else:
        header = f"# kind=frequency id={spectrum.provenance or path.stem}"
        xs, ds = spectrum.omega, spectrum.density
    rows = "\n".join(f"{float(x)!r},{float(d)!r}" for x, d in zip(xs, ds))
    path.write_text(header + "\n" + rows + "\n")


def emit_curve_csv(curve, path: str | Path) -> None:
    """Write one instability curve as t,re,im rows (header carries X)."""
    path = Path(path)
    lines = [f"# x={float(curve.x)!r}", "t,re,im"]
    for t, z in zip(curve.t, curve.z):
        lines.append(f"{float(t)!r},{float(z.real)!r},{float(z.imag)!r}")
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# batch analysis


@dataclass(frozen=True)
class AnalysisRow:
    """One summary line of a batch run."""

    spectrum_id: str
    summary: SpectralSummary
    report: StabilityReport


def _as_wavenumber(spec: DiscreteSpectrum | FrequencySpectrum) -> DiscreteSpectrum:
    if isinstance(spec, FrequencySpectrum):
        return frequency_to_wavenumber(spec)
    return spec


def analyze_spectrum(spec: DiscreteSpectrum | FrequencySpectrum,
                     plan: CurveScanPlan | None = None
                     ) -> tuple[SpectralSummary, StabilityReport]:
    """Summary statistics plus instability classification for one spectrum."""
    kspec = _as_wavenumber(spec)
    if isinstance(spec, FrequencySpectrum):
        fspec = spec
    else:
        fspec = wavenumber_to_frequency(spec)
    summary = spectral_summary(fspec, kspec.k0)
    report = classify(rescale(kspec), plan)
    return summary, report


def _report_payload(spectrum_id: str, summary: SpectralSummary,
                    report: StabilityReport) -> dict:
    return {
        "id": spectrum_id,
        "m0": summary.m0,
        "hs": summary.hs,
        "qp": summary.qp,
        "delta_omega": summary.delta_omega,
        "steepness": summary.steepness,
        "bfi": summary.bfi,
        "stable": report.stable,
        "pti": report.pti,
        "distance": report.distance,
        "unstable_wavenumbers": list(report.unstable_wavenumbers),
        "complete": report.complete,
        "diagnostics": {repr(x): list(map(repr, v))
                        for x, v in report.diagnostics.items()},
    }


def _analyze_file(args):
    path, plan = args
    spec = parse_spectrum(path)
    ident = spec.provenance or Path(path).stem
    summary, report = analyze_spectrum(spec, plan)
    return ident, summary, report


SUMMARY_COLUMNS = ("id", "m0", "hs", "steepness", "bfi", "stable", "pti")


def batch_analyze(input_dir: str | Path, out_dir: str | Path,
                  plan: CurveScanPlan | None = None) -> list[AnalysisRow]:
    """Classify every spectrum file in a directory.

    Writes ``<id>.report.json`` per spectrum plus ``summary.csv`` with columns
    id,m0,hs,steepness,bfi,stable,pti ordered by id.  Per-file failures go to
    ``errors.csv`` and do not stop the batch.  SEASTAB_WORKERS > 1 fans the
    per-spectrum work out over processes.
    """
    input_dir = Path(input_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = sorted(p for p in input_dir.iterdir() if p.suffix == ".csv")
    rows: list[AnalysisRow] = []
    errors: list[tuple[str, str]] = []
    jobs = [(p, plan) for p in paths]
    n_workers = worker_count()
    if n_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            outcomes = []
            for path, fut in zip(paths, [pool.submit(_analyze_file, j) for j in jobs]):
                try:
                    outcomes.append(fut.result())
                except Exception as exc:  # noqa: BLE001 - batch must continue
                    errors.append((path.name, str(exc)))
    else:
        outcomes = []
        for path, job in zip(paths, jobs):
            try:
                outcomes.append(_analyze_file(job))
            except Exception as exc:  # noqa: BLE001 - batch must continue
                errors.append((path.name, str(exc)))
    for ident, summary, report in outcomes:
        rows.append(AnalysisRow(ident, summary, report))
    rows.sort(key=lambda r: r.spectrum_id)

    for row in rows:
        payload = _report_payload(row.spectrum_id, row.summary, row.report)
        (out_dir / f"{row.spectrum_id}.report.json").write_text(
            json.dumps(payload, indent=2) + "\n")
    with (out_dir / "summary.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for row in rows:
            s, r = row.summary, row.report
            writer.writerow([row.spectrum_id, repr(s.m0), repr(s.hs),
                             repr(s.steepness), repr(s.bfi),
                             str(r.stable).lower(), repr(r.pti)])
    if errors:
        with (out_dir / "errors.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["file", "error"])
            writer.writerows(sorted(errors))
    return rows


# ---------------------------------------------------------------------------
# correlation


def _read_table(path: str | Path) -> dict[str, dict[str, float]]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        out = {}
        for record in reader:
            ident = record.pop("id")
            out[ident] = {k: v for k, v in record.items()}
    return out


CORRELATION_PAIRS = (("pti", "bfi"), ("pti", "steepness"),
                     ("pti", "kurtosis"), ("pti", "p_rogue"))


def correlate(summary_csv: str | Path, stats_csv: str | Path,
              out_dir: str | Path) -> dict[tuple[str, str], float]:
    """Join batch summary and Monte Carlo statistics on id; rank-correlate.

    Emits ``correlations.csv`` plus one scatter CSV per pair for plotting.
    Raises IoError when the two tables share no ids.
    """
    from .stats import spearman_rank

    summary = _read_table(summary_csv)
    stats = _read_table(stats_csv)
    ids = sorted(set(summary) & set(stats))
    if not ids:
        raise IoError("summary and stats tables share no spectrum ids")
    merged = {i: {**summary[i], **stats[i]} for i in ids}
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result: dict[tuple[str, str], float] = {}
    for xcol, ycol in CORRELATION_PAIRS:
        if any(xcol not in merged[i] or ycol not in merged[i] for i in ids):
            continue
        x = np.array([float(merged[i][xcol]) for i in ids])
        y = np.array([float(merged[i][ycol]) for i in ids])
        result[(xcol, ycol)] = spearman_rank(x, y)
        with (out_dir / f"scatter_{xcol}_{ycol}.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", xcol, ycol])
            for i, xv, yv in zip(ids, x, y):
                writer.writerow([i, repr(float(xv)), repr(float(yv))])
    with (out_dir / "correlations.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "spearman"])
        for (xcol, ycol), rho in result.items():
            writer.writerow([xcol, ycol, repr(rho)])
    return result


# ---------------------------------------------------------------------------
# fixtures


def jonswap_density(omega: np.ndarray, hs: float, omega_p: float,
                    gamma: float, gravity: float = 9.81) -> np.ndarray:
    """JONSWAP frequency spectrum scaled to carry significant height ``hs``.

    Standard form: alpha g^2 omega^-5 exp(-1.25 (omega_p/omega)^4) *
    gamma^exp(-(omega-omega_p)^2 / (2 sigma^2 omega_p^2)) with sigma = 0.07
    below the peak and 0.09 above; alpha is then fixed so that
    4 sqrt(m0) = hs.
    """
    omega = np.asarray(omega, dtype=float)
    sigma = np.where(omega <= omega_p, 0.07, 0.09)
    peak_arg = np.exp(-((omega - omega_p) ** 2) / (2.0 * sigma**2 * omega_p**2))
    with np.errstate(divide="ignore"):
        base = gravity**2 * omega**-5.0 * np.exp(-1.25 * (omega_p / omega) ** 4)
    base = np.where(omega > 0.0, base, 0.0)
    shape = base * gamma**peak_arg
    m0 = np.trapezoid(shape, omega)
    if m0 <= 0.0:
        raise IoError("degenerate JONSWAP shape (empty frequency window)")
    return shape * (hs / 4.0) ** 2 / m0


def generate_jonswap_family(out_dir: str | Path, n_spectra: int = 20,
                            gamma_range: tuple[float, float] = (1.0, 6.0),
                            hs_range: tuple[float, float] = (1.0, 11.0),
                            omega_p: float = 0.8,
                            n_points: int = 36) -> list[Path]:
    """Write a deterministic family of unimodal frequency-spectrum fixtures.

    Peak enhancement and significant height both increase along the family,
    so steepness and BFI increase together — a synthetic stand-in for a
    measured set of sea states of graded severity.  Files are sampled on a
    non-uniform frequency grid clustered at the peak.
    """
    if not (gamma_range[0] >= 1.0 and gamma_range[1] >= gamma_range[0]):
        raise IoError("gamma_range must satisfy 1 <= lo <= hi")
    if not (0.0 < hs_range[0] <= hs_range[1]):
        raise IoError("hs_range must satisfy 0 < lo <= hi")
    if n_spectra < 1:
        raise IoError("n_spectra must be >= 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    # non-uniform grid: dense near the peak, sparse in the high-frequency tail
    n_lo = n_points // 3
    n_hi = n_points - n_lo
    v_lo = np.linspace(0.0, 1.0, n_lo, endpoint=False)
    v_hi = np.linspace(0.0, 1.0, n_hi)
    below = omega_p * (0.4 + 0.6 * v_lo**0.6)
    above = omega_p * (1.0 + 2.2 * v_hi**1.7)
    omega = np.concatenate([below, above])
    gammas = np.linspace(*gamma_range, n_spectra)
    heights = np.linspace(*hs_range, n_spectra)
    paths = []
    for i, (gam, hs) in enumerate(zip(gammas, heights)):
        density = jonswap_density(omega, hs=hs, omega_p=omega_p, gamma=gam)
        ident = f"jonswap-{i:02d}"
        spec = FrequencySpectrum(omega=omega, density=density, provenance=ident)
        path = out_dir / f"{ident}.csv"
        emit_spectrum(spec, path)
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# crossing-seas configuration


def _train_from_dict(d: dict) -> WavetrainCoefficients:
    try:
        return WavetrainCoefficients(
            alpha=float(d["alpha"]), beta=float(d["beta"]), gamma=float(d["gamma"]),
            xi=float(d["xi"]), zeta=float(d["zeta"]),
            group_velocity=tuple(float(v) for v in d.get("group_velocity", (0.0, 0.0))),
            carrier=tuple(float(v) for v in d["carrier"]) if "carrier" in d else None,
        )
    except KeyError as exc:
        raise IoError(f"wavetrain config missing field {exc}") from exc


def _background_from_dict(d: dict | None) -> HomogeneousBackground2D:
    if d is None:
        return HomogeneousBackground2D.zero()
    try:
        return HomogeneousBackground2D.gaussian(
            amplitude=float(d["amplitude"]),
            center=tuple(float(v) for v in d["center"]),
            sigma=tuple(float(v) for v in d["sigma"]) if not np.isscalar(d["sigma"])
            else float(d["sigma"]),
        )
    except KeyError as exc:
        raise IoError(f"background config missing field {exc}") from exc


def parse_crossing_config(path: str | Path) -> tuple[
        HomogeneousBackground2D, HomogeneousBackground2D,
        CoupledNlsCoefficients, Contour2DParams,
        list[tuple[float, float]] | None]:
    """Read a crossing-seas scan configuration from JSON.

    Expected keys: train_a, train_b (coefficient dicts), background_a,
    background_b (Gaussian dicts or null for zero), optional contour overrides
    and an explicit p_grid list.
    """
    try:
        cfg = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise IoError(f"{path}: invalid JSON ({exc})") from exc
    try:
        coeffs = CoupledNlsCoefficients(train_a=_train_from_dict(cfg["train_a"]),
                                        train_b=_train_from_dict(cfg["train_b"]))
    except KeyError as exc:
        raise IoError(f"{path}: missing section {exc}") from exc
    bg_a = _background_from_dict(cfg.get("background_a"))
    bg_b = _background_from_dict(cfg.get("background_b"))
    contour = Contour2DParams(**cfg.get("contour", {}))
    p_grid = cfg.get("p_grid")
    if p_grid is not None:
        p_grid = [(float(a), float(b)) for a, b in p_grid]
    return bg_a, bg_b, coeffs, contour, p_grid


def crossing_report_payload(report: CrossingReport) -> dict:
    """JSON-serializable view of a crossing-seas scan outcome."""
    return {
        "kappa_min": report.kappa_min,
        "bounded": report.bounded,
        "unstable": report.unstable,
        "resolution_limited": report.resolution_limited,
        "h_sup": report.h_sup,
        "witnesses": [
            {"p": list(p), "omega": [omega.real, omega.imag],
             "det_magnitude": mag}
            for p, omega, mag in report.witnesses
        ],
    }

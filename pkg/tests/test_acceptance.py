"""End-to-end acceptance checks.

Each test prints a single PASS/FAIL line (run with ``pytest -s`` to see them
as they complete; they also appear in captured output).  The Monte Carlo
checks are slow by nature — the whole module takes roughly fifteen minutes.
"""

import csv
import math
import time

import numpy as np
import pytest
from hypothesis import settings

from seastab.crossing import (
    CoupledNlsCoefficients,
    HomogeneousBackground2D,
    WavetrainCoefficients,
    stability_scan,
    transfer_function_batch,
)
from seastab.io import batch_analyze, correlate, generate_jonswap_family, parse_spectrum
from seastab.simulate import (
    NlsParams,
    SimGrid,
    draw_realization,
    evolve,
    linear_probe_elevation,
    max_stable_dt,
    probe_series,
)
from seastab.spectra import (
    DiscreteSpectrum,
    frequency_to_wavenumber,
    rescale,
    select_k0,
    spectral_summary,
)
from seastab.stability import CurveScanPlan, classify, gamma_curve
from seastab.stats import CrestRecord, crest_exceedance, isserlis_closure_test, zero_crossing_crests
from seastab.transform import regularized_transform

from oracles import gaussian_sigma_star, gaussian_wavenumber_spectrum, lorentzian, lorentzian_transform


def report(name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


# --- shared Rayleigh-sea run (linear dynamics, direct mode summation) -------

@pytest.fixture(scope="module")
def rayleigh_run():
    """Long linear ensemble of a moderate-bandwidth Gaussian sea.

    84 seeds x 4 probes x 7200 s at dt = 0.05 gives ~1.2e6 crests.  The
    crest-exceedance threshold is the spectral Hs = 4 sqrt(m0); kurtosis is
    accumulated from raw running moments to keep memory flat.
    """
    m0, sigma = 1e-2, 0.06
    spec = gaussian_wavenumber_spectrum(m0, sigma, k0=1.0)
    grid = SimGrid(k0=1.0, n=1024)
    params = NlsParams(k0=1.0)
    times = 0.05 * np.arange(int(7200 / 0.05))
    probes = (0.0, 150.0, 300.0, 450.0)

    crests, heights = [], []
    n = 0
    s1 = s2 = s3 = s4 = 0.0
    start = time.time()
    for seed in range(84):
        r = draw_realization(spec, grid, seed=seed)
        for x in probes:
            eta = linear_probe_elevation(r, params, x, times)
            rec = zero_crossing_crests(eta, times)
            crests.append(rec.crests)
            heights.append(rec.heights)
            n += eta.size
            s1 += float(eta.sum())
            s2 += float((eta**2).sum())
            s3 += float((eta**3).sum())
            s4 += float((eta**4).sum())
    elapsed = time.time() - start

    mean = s1 / n
    m2 = s2 / n - mean**2
    m4 = (s4 / n - 4 * mean * s3 / n + 6 * mean**2 * s2 / n - 3 * mean**4)
    kurt = m4 / m2**2 - 3.0
    record = CrestRecord(crests=np.concatenate(crests),
                         heights=np.concatenate(heights))
    hs = 4.0 * math.sqrt(m0)
    return {
        "record": record,
        "p_rogue": crest_exceedance(record, hs),
        "kurtosis": kurt,
        "elapsed": elapsed,
    }


def test_criterion_01_rayleigh_crest_tail(rayleigh_run):
    rec = rayleigh_run["record"]
    p = rayleigh_run["p_rogue"]
    p0 = math.exp(-8.0)
    se = math.sqrt(p0 * (1.0 - p0) / rec.n_crests)
    lo, hi = p0 - 3 * se, p0 + 3 * se
    ok = (rec.n_crests >= 1_000_000 and lo <= p <= hi
          and rayleigh_run["elapsed"] < 600.0)
    report("01 rayleigh-crest-tail", ok,
           f"p={p:.4e} band=[{lo:.4e}, {hi:.4e}] crests={rec.n_crests} "
           f"t={rayleigh_run['elapsed']:.0f}s")


def test_criterion_02_gaussian_kurtosis(rayleigh_run):
    kurt = rayleigh_run["kurtosis"]
    report("02 linear-sea-kurtosis", abs(kurt) <= 0.05,
           f"excess kurtosis={kurt:+.4f} tol=0.05")


def test_criterion_03_transform_closed_form():
    ts = np.linspace(-5.0, 5.0, 50)
    worst = 0.0
    for t in ts:
        got = regularized_transform(lorentzian, (-300.0, 300.0), float(t)).value
        exact = lorentzian_transform(float(t))
        worst = max(worst, abs(got - exact) / abs(exact))
    report("03 transform-closed-form", worst <= 1e-2,
           f"max rel err {worst:.2e} over {ts.size} points, tol 1e-2")


PLAN = CurveScanPlan(x_values=(1e-3, 1e-2, 5e-2, 0.1, 0.2), n_t=81)


def test_criterion_04_pti_endpoints():
    zero = DiscreteSpectrum(k=np.linspace(0.5, 1.5, 32),
                            density=np.zeros(32), k0=1.0)
    rep0 = classify(rescale(zero), PLAN)
    sstar = gaussian_sigma_star(2e-3)
    rep1 = classify(rescale(gaussian_wavenumber_spectrum(2e-3, 0.6 * sstar)), PLAN)
    ok = rep0.stable and rep0.pti == 0.0 and not rep1.stable and rep1.pti == 1.0
    report("04 pti-endpoints", ok,
           f"zero spectrum pti={rep0.pti}, narrow gaussian pti={rep1.pti}")


def test_criterion_05_bifurcation_threshold():
    m = 2e-3
    sstar = gaussian_sigma_star(m)
    sigmas = sstar * np.linspace(0.7, 1.3, 13)
    step = sigmas[1] - sigmas[0]
    verdicts, ptis = [], []
    for s in sigmas:
        rep = classify(rescale(gaussian_wavenumber_spectrum(m, float(s))), PLAN)
        verdicts.append(rep.stable)
        ptis.append(rep.pti)
    # exactly one unstable->stable flip, bracketing the analytic threshold
    flips = [i for i in range(len(sigmas) - 1) if verdicts[i] != verdicts[i + 1]]
    flip_ok = (len(flips) == 1 and not verdicts[0] and verdicts[-1]
               and sigmas[flips[0]] - step <= sstar <= sigmas[flips[0] + 1] + step)
    mono_ok = all(b <= a + 1e-9 for a, b in zip(ptis, ptis[1:]))
    jump = max(abs(b - a) for a, b in zip(ptis, ptis[1:]))
    report("05 bifurcation-threshold", flip_ok and mono_ok and jump <= 0.25,
           f"flip in [{sigmas[flips[0]]:.4f}, {sigmas[flips[0]+1]:.4f}] vs "
           f"sigma*={sstar:.4f}, pti monotone={mono_ok}, max step {jump:.3f}"
           if flips else "no verdict flip found")


def test_criterion_06_curve_diameter_sweep():
    sstar = gaussian_sigma_star(2e-3)
    p = rescale(gaussian_wavenumber_spectrum(2e-3, 0.8 * sstar))
    xs = sorted(set(np.geomspace(1e-4, 1.0, 16)) | {5e-4})
    plan = CurveScanPlan(x_values=tuple(xs), n_t=121)
    diam = {x: gamma_curve(p, x, plan).diameter() for x in xs}
    ordered = [diam[x] for x in xs]
    mono = all(b <= a * (1.0 + 1e-2) for a, b in zip(ordered, ordered[1:]))
    rel = abs(diam[5e-4] - diam[1e-4]) / diam[1e-4]
    report("06 curve-diameter-sweep", mono and rel < 0.02,
           f"non-increasing(1% tol)={mono}, diam(5e-4) vs diam(1e-4) "
           f"rel diff {rel:.2e} < 2e-2")


def test_criterion_07_scalar_reduction():
    wa = WavetrainCoefficients(alpha=1.0, beta=1.0, gamma=0.0, xi=1.0, zeta=0.5)
    wb = WavetrainCoefficients(alpha=0.8, beta=1.2, gamma=0.3, xi=0.7, zeta=0.4)
    coeffs = CoupledNlsCoefficients(train_a=wa, train_b=wb)
    bg0 = HomogeneousBackground2D.zero()
    p_grid = [(0.3, 0.0), (0.0, 0.3), (0.3, 0.3)]

    def scalar_winding(bg, p):
        # 1 - xi_a * h_A along Re omega = delta, closed through the asymptote 1
        ys = np.linspace(-20.0, 20.0, 1601)
        wings = np.geomspace(20.0, 2e4, 60)[1:]
        y = np.concatenate([-wings[::-1], ys, wings])
        h = transfer_function_batch(wa, bg, p, 1e-3 + 1j * y)
        vals = np.concatenate([1.0 - wa.xi * h, [1.0 + 0j]])
        closed = np.concatenate([vals, vals[:1]])
        return int(round(float(np.sum(np.angle(closed[1:] / closed[:-1])))
                         / (2.0 * math.pi)))

    agree = []
    for amp in (0.5, 2.0, 8.0, 30.0, 100.0):
        bg_a = HomogeneousBackground2D.gaussian(amp, (0.0, 0.0), 0.2)
        rep = stability_scan(bg_a, bg0, coeffs, p_grid=p_grid)
        indep = any(scalar_winding(bg_a, p) != 0 for p in p_grid)
        agree.append(indep == rep.unstable)
    rep0 = stability_scan(bg0, bg0, coeffs, p_grid=p_grid)
    ok = all(agree) and rep0.kappa_min == 1.0 and not rep0.unstable
    report("07 scalar-reduction", ok,
           f"verdict agreement on 5 one-train fixtures: {agree}; "
           f"both-zero kappa_min={rep0.kappa_min}")


def test_criterion_08_full_pipeline_correlation(tmp_path):
    start = time.time()
    family = tmp_path / "family"
    generate_jonswap_family(family, n_spectra=20)
    out = tmp_path / "reports"
    batch_analyze(family, out, CurveScanPlan(n_t=81))

    stats_path = tmp_path / "stats.csv"
    with stats_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "hs_timeseries", "kurtosis", "p_rogue", "n_crests"])
        for path in sorted(family.glob("*.csv")):
            fs = parse_spectrum(path)
            ws = frequency_to_wavenumber(fs)
            k0 = select_k0(ws, "peak")
            ws = DiscreteSpectrum(k=ws.k, density=ws.density, k0=k0,
                                  provenance=fs.provenance)
            hs = spectral_summary(fs, k0).hs
            grid = SimGrid(k0=k0, n=512)
            params = NlsParams(k0=k0)
            dt = 0.9 * max_stable_dt(grid, params)
            crests, heights = [], []
            samples = []
            for seed in range(8):
                r = draw_realization(ws, grid, seed=seed)
                hist = evolve(r, "nls_split_step", params, 600.0, dt, dt_out=0.2)
                for ps in probe_series(hist):
                    rec = zero_crossing_crests(ps.eta, ps.t)
                    crests.append(rec.crests)
                    heights.append(rec.heights)
                    samples.append(ps.eta)
            merged = CrestRecord(crests=np.concatenate(crests),
                                 heights=np.concatenate(heights))
            eta = np.concatenate(samples)
            kurt = float(np.mean((eta - eta.mean())**4) / np.var(eta)**2 - 3.0)
            w.writerow([fs.provenance, hs, kurt,
                        crest_exceedance(merged, hs), merged.n_crests])

    rho = correlate(out / "summary.csv", stats_path, tmp_path / "cor")
    elapsed = time.time() - start
    r_bfi = rho[("pti", "bfi")]
    r_kurt = rho[("pti", "kurtosis")]
    ok = r_bfi >= 0.85 and r_kurt >= 0.85 and elapsed < 3600.0
    report("08 pipeline-correlation", ok,
           f"rho(pti,bfi)={r_bfi:.3f} rho(pti,kurtosis)={r_kurt:.3f} "
           f"thresholds 0.85, t={elapsed:.0f}s")


def test_criterion_09_fourth_moment_closure():
    worst = 0.0
    for rho in (0.0, 0.5, 0.9):
        res = isserlis_closure_test(1_000_000, rho, seed=77)
        worst = max(worst, res.statistic)
    report("09 fourth-moment-closure", worst < 0.01,
           f"max closure statistic {worst:.4f} < 0.01 at 1e6 samples")


def test_criterion_10_property_suite_depth():
    # the module suites in this test session run hypothesis properties; the
    # active profile must put at least 100 examples through each one
    n = settings().max_examples
    report("10 property-suite-depth", n >= 100,
           f"hypothesis max_examples={n} (module property suites run in "
           f"this session)")

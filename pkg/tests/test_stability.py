import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seastab.spectra import DiscreteSpectrum, rescale
from seastab.stability import (
    INSTABILITY_POINT,
    CurveScanPlan,
    classify,
    contains_point,
    distance_to_filled_curve,
    fast_stability_check,
    gamma_curve,
)

from oracles import gaussian_sigma_star, gaussian_wavenumber_spectrum

FAST_PLAN = CurveScanPlan(x_values=(1e-3, 0.1, 0.5), n_t=41)


def unit_square(closed=True):
    t = np.arange(5.0)
    z = np.array([0, 1, 1 + 1j, 1j, 0], dtype=complex)
    from seastab.stability import GammaCurve
    return GammaCurve(x=0.1, t=t, z=z)


class TestGeometry:
    def test_point_inside_square(self):
        assert contains_point(unit_square(), 0.5 + 0.5j)

    def test_point_outside_square(self):
        assert not contains_point(unit_square(), 1.5 + 0.5j)

    def test_point_on_boundary_counts_inside(self):
        assert contains_point(unit_square(), 0.5 + 0j)

    def test_distance_outside(self):
        assert distance_to_filled_curve(unit_square(), 2.0 + 0.5j) == pytest.approx(1.0)

    def test_distance_inside_is_zero(self):
        assert distance_to_filled_curve(unit_square(), 0.25 + 0.25j) == 0.0

    def test_degenerate_curve(self):
        from seastab.stability import GammaCurve
        flat = GammaCurve(x=0.1, t=np.arange(3.0), z=np.zeros(3, dtype=complex))
        assert not contains_point(flat, 1.0 + 0j)
        assert distance_to_filled_curve(flat, 1.0 + 0j) == pytest.approx(1.0)


class TestCurveProperties:
    @given(st.floats(0.2, 5.0))
    @settings(max_examples=100)
    def test_scaling_equivariance(self, lam):
        from seastab.spectra import divided_difference
        from seastab.transform import regularized_transform

        spec = gaussian_wavenumber_spectrum(2e-3, 0.12, n=101)
        scaled = DiscreteSpectrum(k=spec.k, density=lam * spec.density, k0=spec.k0)
        p1, p2 = rescale(spec), rescale(scaled)
        big_x = 0.1
        for t in (0.6, 1.0, 1.3):
            z1 = regularized_transform(
                lambda s: divided_difference(p1, big_x, s), p1.support, t).value
            z2 = regularized_transform(
                lambda s: divided_difference(p2, big_x, s), p2.support, t).value
            assert abs(z2 - lam * z1) <= 2e-2 * abs(lam * z1) + 1e-12

    def test_reflection_invariance(self):
        # conjugating every curve point changes neither verdict nor distance
        # (the test point is real)
        from seastab.stability import GammaCurve
        spec = gaussian_wavenumber_spectrum(2e-3, 0.08, n=101)
        curve = gamma_curve(rescale(spec), 0.05, FAST_PLAN)
        mirrored = GammaCurve(x=curve.x, t=curve.t, z=np.conj(curve.z))
        p = INSTABILITY_POINT + 0j
        assert contains_point(curve, p) == contains_point(mirrored, p)
        assert distance_to_filled_curve(curve, p) == pytest.approx(
            distance_to_filled_curve(mirrored, p), rel=1e-9)

    def test_monotone_crossing_values_in_x(self):
        spec = gaussian_wavenumber_spectrum(2e-3, 0.1, n=101)
        p = rescale(spec)
        maxima = []
        for x in (1e-3, 0.05, 0.2, 0.5, 1.0):
            maxima.append(fast_stability_check(p, x, FAST_PLAN).max_crossing_re)
        assert all(b <= a + 1e-10 for a, b in zip(maxima, maxima[1:]))

    def test_fast_check_soundness(self):
        # whenever the screen excludes containment, the built curve agrees
        p = rescale(gaussian_wavenumber_spectrum(2e-3, 0.2, n=101))
        for x in FAST_PLAN.x_values:
            screen = fast_stability_check(p, x, FAST_PLAN)
            if screen.excludes_containment:
                curve = gamma_curve(p, x, FAST_PLAN)
                assert not contains_point(curve, INSTABILITY_POINT + 0j)


class TestClassify:
    def test_zero_spectrum_pti_zero(self):
        spec = DiscreteSpectrum(k=np.linspace(0.5, 1.5, 32),
                                density=np.zeros(32), k0=1.0)
        report = classify(rescale(spec), FAST_PLAN)
        assert report.stable and report.pti == 0.0

    def test_unstable_narrow_gaussian(self):
        sigma_star = gaussian_sigma_star(2e-3)
        spec = gaussian_wavenumber_spectrum(2e-3, 0.6 * sigma_star, n=201)
        report = classify(rescale(spec), FAST_PLAN)
        assert not report.stable and report.pti == 1.0
        assert report.unstable_wavenumbers

    def test_stable_wide_gaussian(self):
        sigma_star = gaussian_sigma_star(2e-3)
        spec = gaussian_wavenumber_spectrum(2e-3, 2.0 * sigma_star, n=201)
        report = classify(rescale(spec), FAST_PLAN)
        assert report.stable and 0.0 < report.pti < 1.0

    @given(st.floats(0.03, 0.3), st.floats(1e-4, 8e-3))
    @settings(max_examples=100)
    def test_pti_bounds(self, sigma, m):
        spec = gaussian_wavenumber_spectrum(m, sigma, n=64)
        report = classify(rescale(spec), CurveScanPlan(x_values=(0.05,), n_t=21))
        assert 0.0 <= report.pti <= 1.0

    def test_threshold_crossing_value_matches_analytic(self):
        # the X->0 real-axis crossing of a Gaussian of energy m and width
        # sigma approaches m/(pi*sigma^2); at sigma = 2 sqrt(m) this equals
        # the instability point 1/(4 pi)
        m, sigma = 2e-3, 0.1
        p = rescale(gaussian_wavenumber_spectrum(m, sigma, n=401))
        screen = fast_stability_check(p, 1e-4, CurveScanPlan(x_values=(1e-4,)))
        assert screen.max_crossing_re == pytest.approx(
            m / (math.pi * sigma**2), rel=1e-2)

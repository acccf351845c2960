import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from seastab.spectra import (
    DiscreteSpectrum,
    FrequencySpectrum,
    SpectrumError,
    divided_difference,
    frequency_to_wavenumber,
    monotone_interpolant,
    rescale,
    select_k0,
    spectral_summary,
    wavenumber_to_frequency,
)

from oracles import gaussian_wavenumber_spectrum


def _freq_spectrum(density, omega=None):
    omega = np.linspace(0.3, 3.0, len(density)) if omega is None else omega
    return FrequencySpectrum(omega=omega, density=np.asarray(density, float))


densities = hnp.arrays(
    float, st.integers(5, 40),
    elements=st.floats(0.0, 50.0, allow_nan=False).map(lambda v: round(v, 6)),
).filter(lambda a: a.max() > 0)


class TestValidation:
    def test_too_few_samples(self):
        with pytest.raises(SpectrumError):
            DiscreteSpectrum(k=np.array([1.0, 2.0, 3.0]),
                             density=np.zeros(3), k0=1.0)

    def test_non_increasing_abscissa(self):
        with pytest.raises(SpectrumError):
            DiscreteSpectrum(k=np.array([1.0, 2.0, 2.0, 3.0]),
                             density=np.zeros(4), k0=1.0)

    def test_negative_density(self):
        with pytest.raises(SpectrumError):
            _freq_spectrum([1.0, -0.1, 1.0, 1.0, 1.0])

    def test_nan_density(self):
        with pytest.raises(SpectrumError):
            _freq_spectrum([1.0, np.nan, 1.0, 1.0, 1.0])

    def test_arrays_read_only(self):
        spec = gaussian_wavenumber_spectrum(1e-3, 0.1)
        with pytest.raises(ValueError):
            spec.density[0] = 1.0


class TestConversion:
    @given(densities)
    def test_energy_conserved(self, density):
        # the Jacobian makes conversion exact pointwise; evaluate both
        # integrals on a dense common refinement so quadrature error is
        # below the 1e-6 tolerance being tested
        coarse = _freq_spectrum(density)
        omega = np.linspace(coarse.omega[0], coarse.omega[-1], 20001)
        vals = monotone_interpolant(coarse.omega, coarse.density)(omega)
        dense = FrequencySpectrum(omega=omega, density=np.clip(vals, 0.0, None))
        kspec = frequency_to_wavenumber(dense, k0=1.0)
        e_omega = np.trapezoid(dense.density, dense.omega)
        e_k = np.trapezoid(kspec.density, kspec.k)
        assert abs(e_k - e_omega) <= 1e-6 * e_omega

    @given(densities)
    def test_round_trip_inverse(self, density):
        spec = _freq_spectrum(density)
        back = wavenumber_to_frequency(frequency_to_wavenumber(spec, k0=1.0))
        np.testing.assert_allclose(back.omega, spec.omega, rtol=1e-12)
        np.testing.assert_allclose(back.density, spec.density, rtol=1e-12)

    def test_deep_water_relation(self):
        spec = _freq_spectrum([0.0, 1.0, 2.0, 1.0, 0.0])
        kspec = frequency_to_wavenumber(spec, k0=1.0)
        np.testing.assert_allclose(kspec.k, spec.omega**2 / spec.gravity)


class TestRescale:
    @given(st.floats(0.05, 0.3), st.floats(0.5, 3.0))
    def test_normalization(self, sigma, k0):
        spec = gaussian_wavenumber_spectrum(1e-3, sigma * k0, k0=k0)
        p = rescale(spec)
        lo, hi = p.support
        grid = np.linspace(lo, hi, 20001)
        int_p = np.trapezoid(p(grid), grid)
        int_s = np.trapezoid(spec.density, spec.k)
        assert abs(int_p - k0**2 * int_s) <= 1e-4 * abs(k0**2 * int_s)

    def test_zero_outside_support(self):
        p = rescale(gaussian_wavenumber_spectrum(1e-3, 0.1))
        lo, hi = p.support
        assert p(lo - 0.1) == 0.0 and p(hi + 0.1) == 0.0

    def test_scaling_of_axis(self):
        # P(k) = k0^3 S(k*k0): peak of P sits at 1 for a peak-centered spectrum
        spec = gaussian_wavenumber_spectrum(1e-3, 0.1, k0=2.0)
        p = rescale(spec)
        grid = np.linspace(*p.support, 4001)
        assert abs(grid[np.argmax(p(grid))] - 1.0) < 1e-2


class TestInterpolant:
    @given(hnp.arrays(float, st.integers(3, 25),
                      elements=st.floats(0.0, 10.0)).map(np.sort))
    def test_no_overshoot_monotone_data(self, y):
        x = np.arange(len(y), dtype=float)
        f = monotone_interpolant(x, y)
        dense = np.linspace(0, len(y) - 1, 1000)
        vals = f(dense)
        assert np.all(np.diff(vals) >= -1e-12)
        assert vals.min() >= y.min() - 1e-12 and vals.max() <= y.max() + 1e-12

    def test_interpolates_samples(self):
        x = np.array([0.0, 1.0, 2.5, 4.0])
        y = np.array([1.0, 3.0, 0.5, 2.0])
        np.testing.assert_allclose(monotone_interpolant(x, y)(x), y)


class TestDividedDifference:
    @given(st.floats(1e-4, 0.5), st.floats(0.2, 2.0))
    def test_odd_in_x(self, big_x, k):
        p = rescale(gaussian_wavenumber_spectrum(1e-3, 0.1))
        assert divided_difference(p, -big_x, k) == divided_difference(p, big_x, k)

    def test_reduces_to_derivative_at_zero(self):
        p = rescale(gaussian_wavenumber_spectrum(1e-3, 0.1))
        k = 0.95
        d0 = divided_difference(p, 0.0, k)
        d_small = divided_difference(p, 1e-7, k)
        assert abs(d0 - d_small) < 1e-6 * max(1.0, abs(d0))


class TestSelectK0:
    @given(densities, st.floats(0.1, 100.0))
    def test_peak_scale_invariant(self, density, lam):
        spec = _freq_spectrum(density)
        kspec = frequency_to_wavenumber(spec, k0=1.0)
        scaled = DiscreteSpectrum(k=kspec.k, density=lam * kspec.density, k0=1.0)
        assert select_k0(kspec, "peak") == pytest.approx(
            select_k0(scaled, "peak"), rel=1e-12)

    def test_policies_ordering_symmetric(self):
        spec = gaussian_wavenumber_spectrum(1e-3, 0.1, k0=1.0)
        for policy in ("peak", "mean", "median"):
            assert select_k0(spec, policy) == pytest.approx(1.0, abs=2e-2)

    def test_unknown_policy(self):
        spec = gaussian_wavenumber_spectrum(1e-3, 0.1)
        with pytest.raises(SpectrumError):
            select_k0(spec, "mode")


class TestSummary:
    def test_zero_spectrum(self):
        spec = _freq_spectrum([0.0] * 6)
        s = spectral_summary(spec, 1.0)
        assert s.m0 == 0.0 and s.hs == 0.0 and s.bfi == 0.0

    def test_hs_scaling(self):
        spec = _freq_spectrum([0.0, 1.0, 2.0, 1.0, 0.0])
        s1 = spectral_summary(spec, 1.0)
        s4 = spectral_summary(_freq_spectrum(4 * spec.density), 1.0)
        assert s4.hs == pytest.approx(2 * s1.hs)
        assert s4.m0 == pytest.approx(4 * s1.m0)

    def test_narrowing_raises_bfi(self):
        omega = np.linspace(0.3, 3.0, 400)
        bfis = []
        for sigma in (0.5, 0.3, 0.15, 0.08):
            e = np.exp(-0.5 * ((omega - 1.2) / sigma) ** 2)
            e *= 1e-2 / np.trapezoid(e, omega)
            bfis.append(spectral_summary(
                FrequencySpectrum(omega=omega, density=e), 1.0).bfi)
        assert all(b2 > b1 for b1, b2 in zip(bfis, bfis[1:]))

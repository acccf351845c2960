"""Discrete wave spectra: conversion, moments, rescaling and interpolation.

A sea state enters the stability analysis as a sampled one-dimensional power
spectrum, either in wavenumber form S(k) or frequency form E(omega).  This
module converts between the two with the deep-water dispersion relation,
computes the standard integral quantities (m0, Hs, Goda peakedness, bandwidth,
steepness, BFI), and rescales a wavenumber spectrum onto the nondimensional
axis where the stability criterion is formulated:

    P(k) = k0^3 * S(k * k0)

Interpolation uses a monotone (overshoot-free) piecewise cubic, because
spurious overshoot at a spectral peak would directly bias the stability
classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

GRAVITY = 9.81


class SpectrumError(ValueError):
    """Invalid spectrum data or an operation that cannot be applied to it."""


def _as_readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FrequencySpectrum:
    """Sampled frequency spectrum E(omega), omega in rad/s, E in m^2 s."""

    omega: np.ndarray
    density: np.ndarray
    gravity: float = GRAVITY
    provenance: str = ""

    def __post_init__(self):
        omega = _as_readonly(self.omega)
        density = _as_readonly(self.density)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "density", density)
        if omega.ndim != 1 or omega.size < 4 or omega.shape != density.shape:
            raise SpectrumError("need >= 4 samples with matching shapes")
        if np.any(omega <= 0.0) or np.any(np.diff(omega) <= 0.0):
            raise SpectrumError("omega must be strictly increasing and positive")
        if np.any(density < 0.0) or not np.all(np.isfinite(density)):
            raise SpectrumError("spectral density must be finite and >= 0")
        if self.gravity <= 0.0:
            raise SpectrumError("gravity must be positive")


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Sampled wavenumber spectrum S(k), k in rad/m, S in m^3.

    ``k0`` is the reference (carrier) wavenumber used for nondimensional
    rescaling; it is stored with the spectrum because the choice of k0 is part
    of the sea-state description, not a property of the samples alone.
    """

    k: np.ndarray
    density: np.ndarray
    k0: float
    provenance: str = ""

    def __post_init__(self):
        k = _as_readonly(self.k)
        density = _as_readonly(self.density)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "density", density)
        if k.ndim != 1 or k.size < 4 or k.shape != density.shape:
            raise SpectrumError("need >= 4 samples with matching shapes")
        if np.any(k <= 0.0) or np.any(np.diff(k) <= 0.0):
            raise SpectrumError("k must be strictly increasing and positive")
        if np.any(density < 0.0) or not np.all(np.isfinite(density)):
            raise SpectrumError("spectral density must be finite and >= 0")
        if not (self.k0 > 0.0):
            raise SpectrumError("k0 must be positive")


@dataclass(frozen=True)
class SpectralSummary:
    """Integral sea-state parameters derived from a frequency spectrum.

    m0            zeroth moment, total energy [m^2]
    hs            significant wave height 4*sqrt(m0) [m]
    qp            Goda peakedness factor
    delta_omega   relative bandwidth 1/(qp*sqrt(pi))
    steepness     Hs*k0/2
    bfi           steepness / (sqrt(2)*delta_omega)
    """

    m0: float
    hs: float
    qp: float
    delta_omega: float
    steepness: float
    bfi: float


class RescaledSpectrum:
    """Nondimensional spectrum P(k) = k0^3 * S(k*k0) on a compact support.

    Callable; evaluates to zero outside the sampled support (no extrapolation:
    there is no information about tail energy beyond the sampled band).
    """

    def __init__(self, interpolant: PchipInterpolator, support: tuple[float, float]):
        self._interp = interpolant
        self._deriv = interpolant.derivative()
        self.support = (float(support[0]), float(support[1]))
        # piecewise-cubic knots: the integrand is only C^1 across these, so
        # quadrature meshes should break there
        self.knots = np.array(interpolant.x, dtype=float)

    def __call__(self, k):
        k = np.asarray(k, dtype=float)
        lo, hi = self.support
        inside = (k >= lo) & (k <= hi)
        out = np.zeros(k.shape)
        if np.any(inside):
            out[inside] = self._interp(k[inside])
        return out if out.ndim else float(out)

    def derivative(self, k):
        """dP/dk, zero outside the support."""
        k = np.asarray(k, dtype=float)
        lo, hi = self.support
        inside = (k >= lo) & (k <= hi)
        out = np.zeros(k.shape)
        if np.any(inside):
            out[inside] = self._deriv(k[inside])
        return out if out.ndim else float(out)


def monotone_interpolant(x, y) -> PchipInterpolator:
    """Overshoot-free C^1 piecewise-cubic interpolant through (x, y).

    Fritsch-Carlson-type monotone cubic (PCHIP): on each interval the value
    stays within [min(y_j, y_{j+1}), max(y_j, y_{j+1})], so nonnegative data
    yields a nonnegative interpolant and peaks are never overshot.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.size < 2 or x.shape != y.shape:
        raise SpectrumError("need >= 2 samples with matching shapes")
    if np.any(np.diff(x) <= 0.0):
        raise SpectrumError("abscissae must be strictly increasing (no duplicates)")
    return PchipInterpolator(x, y, extrapolate=False)


def frequency_to_wavenumber(spectrum: FrequencySpectrum, k0: float | None = None) -> DiscreteSpectrum:
    """Convert E(omega) to S(k) with the deep-water relation omega = sqrt(g*k).

    k_j = omega_j^2 / g and S_j = E_j * (domega/dk) = E_j * g / (2*omega_j),
    which preserves total energy: integral S dk = integral E domega.

    If ``k0`` is not given, the peak wavenumber of the converted spectrum is
    used.
    """
    g = spectrum.gravity
    k = spectrum.omega**2 / g
    density = spectrum.density * g / (2.0 * spectrum.omega)
    if k0 is None:
        if not np.any(density > 0.0):
            raise SpectrumError("cannot pick k0 by peak for a zero spectrum")
        k0 = float(k[np.argmax(density)])
    return DiscreteSpectrum(k=k, density=density, k0=k0, provenance=spectrum.provenance)


def wavenumber_to_frequency(spectrum: DiscreteSpectrum, gravity: float = GRAVITY) -> FrequencySpectrum:
    """Convert S(k) back to E(omega); inverse of `frequency_to_wavenumber`.

    omega_j = sqrt(g*k_j), E_j = S_j * (dk/domega) = S_j * 2*omega_j / g.
    """
    omega = np.sqrt(gravity * spectrum.k)
    density = spectrum.density * 2.0 * omega / gravity
    return FrequencySpectrum(omega=omega, density=density, gravity=gravity,
                             provenance=spectrum.provenance)


def spectral_summary(spectrum: FrequencySpectrum, k0: float) -> SpectralSummary:
    """Compute m0, Hs, Qp, bandwidth, steepness and BFI from E(omega).

    m0  = int E domega
    Qp  = (2/m0^2) int omega E^2 domega
    d_w = 1 / (Qp sqrt(pi))
    eps = Hs k0 / 2 with Hs = 4 sqrt(m0)
    BFI = eps / (sqrt(2) d_w)

    A zero spectrum yields the all-zero summary with BFI defined as 0.
    """
    if not (k0 > 0.0):
        raise SpectrumError("k0 must be positive")
    omega, e = spectrum.omega, spectrum.density
    m0 = float(np.trapezoid(e, omega))
    if m0 <= 0.0:
        return SpectralSummary(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    qp = float(2.0 / m0**2 * np.trapezoid(omega * e**2, omega))
    delta_omega = 1.0 / (qp * math.sqrt(math.pi))
    hs = 4.0 * math.sqrt(m0)
    steepness = hs * k0 / 2.0
    bfi = steepness / (math.sqrt(2.0) * delta_omega)
    return SpectralSummary(m0, hs, qp, delta_omega, steepness, bfi)


_K0_POLICIES = ("provided", "peak", "mean", "median")


def select_k0(spectrum: DiscreteSpectrum | FrequencySpectrum, policy: str = "provided") -> float:
    """Pick the reference wavenumber k0 under one of four policies.

    provided  stored k0 (wavenumber spectra only)
    peak      argmax of the interpolated density; ties broken to smallest k
    mean      int k S dk / int S dk
    median    k splitting int S dk in half

    Frequency spectra are converted to wavenumber form first.
    """
    if policy not in _K0_POLICIES:
        raise SpectrumError(f"unknown k0 policy {policy!r}; choose from {_K0_POLICIES}")
    if isinstance(spectrum, FrequencySpectrum):
        if policy == "provided":
            raise SpectrumError("frequency spectra carry no stored k0")
        g = spectrum.gravity
        spectrum = DiscreteSpectrum(
            k=spectrum.omega**2 / g,
            density=spectrum.density * g / (2.0 * spectrum.omega),
            k0=1.0,
        )
    if policy == "provided":
        return spectrum.k0
    if not np.any(spectrum.density > 0.0):
        raise SpectrumError(f"policy {policy!r} is undefined for a zero spectrum")

    interp = monotone_interpolant(spectrum.k, spectrum.density)
    kk = np.linspace(spectrum.k[0], spectrum.k[-1], 4096)
    ss = interp(kk)
    if policy == "peak":
        smax = ss.max()
        # smallest k among (numerically) equal maxima
        return float(kk[np.nonzero(ss >= smax * (1.0 - 1e-12))[0][0]])
    if policy == "mean":
        return float(np.trapezoid(kk * ss, kk) / np.trapezoid(ss, kk))
    # median: half of the cumulative energy
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (ss[1:] + ss[:-1]) * np.diff(kk))))
    return float(np.interp(0.5 * cum[-1], cum, kk))


def rescale(spectrum: DiscreteSpectrum, k0: float | None = None) -> RescaledSpectrum:
    """Nondimensionalize: P(k) = k0^3 * S(k*k0).

    The interpolant is built after rescaling, on the nondimensional axis; the
    support maps to [k_lo/k0, k_hi/k0].  Defaults to the spectrum's stored k0.
    """
    if k0 is None:
        k0 = spectrum.k0
    if not (k0 > 0.0):
        raise SpectrumError("k0 must be positive")
    x = spectrum.k / k0
    y = k0**3 * spectrum.density
    interp = monotone_interpolant(x, y)
    return RescaledSpectrum(interp, (x[0], x[-1]))


def divided_difference(p: RescaledSpectrum, big_x: float, k) -> np.ndarray | float:
    """Symmetric divided difference of the rescaled spectrum.

    (P(k+X/2) - P(k-X/2)) / X for X != 0; the interpolant derivative at X = 0.
    Even in X, so only X > 0 needs to be swept.
    """
    if big_x == 0.0:
        return p.derivative(k)
    half = 0.5 * big_x
    return (p(np.asarray(k, dtype=float) + half) - p(np.asarray(k, dtype=float) - half)) / big_x

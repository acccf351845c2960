"""Stability screening of ocean-wave spectra.

Decides whether a wave power spectrum supports modulation instability of its
statistically homogeneous state, quantifies its proximity to instability (PTI),
evaluates the crossing-seas generalization of the criterion, and validates the
metric against phase-resolved Monte Carlo statistics.
"""

from seastab.spectra import (
    DiscreteSpectrum,
    FrequencySpectrum,
    RescaledSpectrum,
    SpectralSummary,
    SpectrumError,
    divided_difference,
    frequency_to_wavenumber,
    monotone_interpolant,
    rescale,
    select_k0,
    spectral_summary,
    wavenumber_to_frequency,
)
from seastab.transform import (
    QuadratureError,
    QuadratureParams,
    TransformSample,
    regularized_transform,
    truncation_window,
)
from seastab.io import (
    IoError,
    emit_spectrum,
    parse_spectrum,
)
from seastab.stability import (
    CurveScanPlan,
    GammaCurve,
    StabilityReport,
    INSTABILITY_POINT,
    classify,
    contains_point,
    distance_to_filled_curve,
    fast_stability_check,
    gamma_curve,
)

__all__ = [
    "DiscreteSpectrum",
    "FrequencySpectrum",
    "RescaledSpectrum",
    "SpectralSummary",
    "SpectrumError",
    "divided_difference",
    "frequency_to_wavenumber",
    "monotone_interpolant",
    "rescale",
    "select_k0",
    "spectral_summary",
    "wavenumber_to_frequency",
    "QuadratureError",
    "QuadratureParams",
    "TransformSample",
    "regularized_transform",
    "truncation_window",
    "IoError",
    "emit_spectrum",
    "parse_spectrum",
    "CurveScanPlan",
    "GammaCurve",
    "StabilityReport",
    "INSTABILITY_POINT",
    "classify",
    "contains_point",
    "distance_to_filled_curve",
    "fast_stability_check",
    "gamma_curve",
]

__version__ = "0.1.0"

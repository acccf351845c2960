"""Stability classification of a rescaled spectrum and the PTI metric.

For each perturbation wavenumber X the boundary values of the regularized
transform of the divided spectral difference D_X P trace a closed curve in the
complex plane (closed through the origin, since the transform decays off the
spectral support).  The sea state is modulationally unstable when the real
point 1/(4*pi) lies inside any of these curves; otherwise the distance d from
1/(4*pi) to the union of the filled curves quantifies how far the spectrum is
from instability:

    PTI = 1 - d / (1/(4*pi))

which is 1 for any unstable spectrum and 0 for the zero spectrum.

A fast per-X screen avoids building full curves when possible: the curve can
only enclose 1/(4*pi) if it crosses the real axis to its right, and the
real-axis crossings are exactly the zeros of D_X P.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from seastab.spectra import RescaledSpectrum, divided_difference
from seastab.transform import (
    QuadratureError,
    QuadratureParams,
    TransformSample,
    regularized_transform,
)

INSTABILITY_POINT = 1.0 / (4.0 * math.pi)


def _default_x_sweep() -> tuple[float, ...]:
    xs = set(np.geomspace(1e-4, 1.0, 16))
    xs.add(5e-4)  # the outermost practically-converged curve lives here
    return tuple(sorted(xs))


@dataclass(frozen=True)
class CurveScanPlan:
    """Sweep definition: which X values, the t grid, and quadrature control.

    The t grid spans the support of D_X P dilated by ``t_pad`` (fraction of
    the support length added on each side), with crossing points found by the
    fast screen merged in so the curve is well resolved where it matters.
    """

    x_values: tuple[float, ...] = field(default_factory=_default_x_sweep)
    n_t: int = 161
    t_pad: float = 0.5
    quadrature: QuadratureParams = field(default_factory=QuadratureParams)

    def __post_init__(self):
        xs = tuple(float(x) for x in self.x_values)
        if not xs or any(x <= 0.0 for x in xs) or list(xs) != sorted(xs):
            raise ValueError("x_values must be positive and sorted")
        object.__setattr__(self, "x_values", xs)
        if self.n_t < 8:
            raise ValueError("n_t too small to resolve a curve")


@dataclass(frozen=True)
class GammaCurve:
    """Sampled closed curve for one perturbation wavenumber X.

    ``t`` are the real evaluation points in increasing order, ``z`` the
    corresponding transform values; the origin is appended as the final vertex
    (the trace is closed through 0).
    """

    x: float
    t: np.ndarray
    z: np.ndarray
    closed: bool = True

    @property
    def vertices(self) -> np.ndarray:
        """Curve vertices including the closing origin point."""
        return np.concatenate([self.z, [0.0 + 0.0j]])

    def diameter(self) -> float:
        """Largest pairwise distance between curve vertices."""
        v = self.vertices
        return float(np.abs(v[:, None] - v[None, :]).max())


@dataclass(frozen=True)
class FastCheckResult:
    """Outcome of the real-axis-crossing screen for one X."""

    x: float
    crossings: tuple[float, ...]
    crossing_values: tuple[complex, ...]
    max_crossing_re: float
    excludes_containment: bool


@dataclass(frozen=True)
class StabilityReport:
    """Classification of one spectrum.

    distance is d(filled curves, 1/(4*pi)); pti = 1 - distance/(1/(4*pi)).
    ``diagnostics`` maps X -> (max real-axis crossing value, curve diameter).
    ``complete`` is False when a quadrature failure truncated the scan.
    """

    stable: bool
    unstable_wavenumbers: tuple[float, ...]
    distance: float
    pti: float
    diagnostics: dict
    complete: bool = True


def _curve_support(p: RescaledSpectrum, big_x: float) -> tuple[float, float]:
    lo, hi = p.support
    return (lo - 0.5 * big_x, hi + 0.5 * big_x)


def _t_grid(p: RescaledSpectrum, big_x: float, plan: CurveScanPlan,
            extra: tuple[float, ...] = ()) -> np.ndarray:
    lo, hi = _curve_support(p, big_x)
    pad = plan.t_pad * (hi - lo)
    grid = np.linspace(lo - pad, hi + pad, plan.n_t)
    if extra:
        grid = np.unique(np.concatenate([grid, np.asarray(extra)]))
    return grid


def gamma_curve(p: RescaledSpectrum, big_x: float, plan: CurveScanPlan | None = None) -> GammaCurve:
    """Build the sampled curve for one X, origin appended as closing vertex.

    Real-axis crossing points located by the fast screen are merged into the
    t grid.  Quadrature failures propagate, identifying the offending t.
    """
    if plan is None:
        plan = CurveScanPlan()
    screen = fast_stability_check(p, big_x, plan)
    grid = _t_grid(p, big_x, plan, extra=screen.crossings)
    u = lambda s: divided_difference(p, big_x, s)
    support = _curve_support(p, big_x)
    knots = _difference_knots(p, big_x)
    z = np.array(
        [regularized_transform(u, support, t, plan.quadrature, knots=knots).value
         for t in grid],
        dtype=complex,
    )
    return GammaCurve(x=float(big_x), t=grid, z=z)


def _difference_knots(p: RescaledSpectrum, big_x: float) -> np.ndarray:
    """Non-smooth points of D_X P: interpolant knots shifted by +-X/2.

    The support endpoints of each shifted copy are included automatically
    (they are knots of the interpolant).
    """
    if big_x == 0.0:
        return p.knots
    return np.unique(np.concatenate([p.knots - 0.5 * big_x,
                                     p.knots + 0.5 * big_x]))


def _sign_change_roots(f, grid: np.ndarray, tol: float = 1e-10) -> list[float]:
    """Roots of f located by sign changes on grid, refined by bisection."""
    vals = np.asarray(f(grid), dtype=float)
    roots = []
    for i in np.nonzero(vals[:-1] * vals[1:] < 0.0)[0]:
        a, b = float(grid[i]), float(grid[i + 1])
        fa = vals[i]
        while b - a > tol:
            mid = 0.5 * (a + b)
            fm = float(f(mid))
            if fm == 0.0:
                a = b = mid
                break
            if fa * fm < 0.0:
                b = mid
            else:
                a, fa = mid, fm
        roots.append(0.5 * (a + b))
    # exact zeros on the grid count as crossings too
    roots.extend(float(g) for g, v in zip(grid, vals) if v == 0.0)
    return sorted(set(roots))


def fast_stability_check(p: RescaledSpectrum, big_x: float,
                         plan: CurveScanPlan | None = None) -> FastCheckResult:
    """Screen one X: can the curve possibly enclose 1/(4*pi)?

    Finds the real-axis crossings t* (zeros of D_X P, bisected to 1e-10) and
    evaluates the transform there; if no crossing reaches 1/(4*pi) on the real
    axis the curve topologically cannot contain the point.
    """
    if plan is None:
        plan = CurveScanPlan()
    lo, hi = _curve_support(p, big_x)
    dense = np.linspace(lo, hi, 2049)
    f = lambda s: divided_difference(p, big_x, s)
    roots = _sign_change_roots(f, dense)
    u = lambda s: divided_difference(p, big_x, s)
    knots = _difference_knots(p, big_x)
    values = tuple(
        regularized_transform(u, (lo, hi), t, plan.quadrature, knots=knots).value
        for t in roots
    )
    max_re = max((v.real for v in values), default=-math.inf)
    return FastCheckResult(
        x=float(big_x),
        crossings=tuple(roots),
        crossing_values=values,
        max_crossing_re=max_re,
        excludes_containment=(max_re < INSTABILITY_POINT),
    )


def _polygon_vertices(curve: GammaCurve) -> np.ndarray:
    return curve.vertices


def _min_distance_to_segments(z0: complex, verts: np.ndarray) -> float:
    """Distance from z0 to the closed polyline through verts."""
    if len(verts) == 1:
        return abs(z0 - verts[0])
    a = np.concatenate([verts, verts[:1]])[:-1]
    b = np.concatenate([verts, verts[:1]])[1:]
    ab = b - a
    den = np.abs(ab) ** 2
    s = np.zeros(len(a))
    nz = den > 0.0
    s[nz] = np.clip(((z0 - a[nz]) * np.conj(ab[nz])).real / den[nz], 0.0, 1.0)
    proj = a + s * ab
    return float(np.abs(z0 - proj).min())


def contains_point(curve: GammaCurve, z0: complex) -> bool:
    """Even-odd point-in-polygon test on the sampled closed polyline.

    Boundary points count as inside (closure convention).  Degenerate curves
    (fewer than 3 distinct vertices) contain only points coinciding with a
    vertex.
    """
    verts = _polygon_vertices(curve)
    distinct = np.unique(np.round(verts, 15))
    scale = max(1.0, float(np.abs(verts).max()))
    if _min_distance_to_segments(z0, verts) <= 1e-12 * scale:
        return True
    if len(distinct) <= 2:
        return False
    x, y = verts.real, verts.imag
    px, py = z0.real, z0.imag
    x1, y1 = x, y
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    straddles = (y1 > py) != (y2 > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_at = x1 + (py - y1) / (y2 - y1) * (x2 - x1)
    crossings = np.count_nonzero(straddles & (x_at > px))
    return bool(crossings % 2)


def distance_to_filled_curve(curve: GammaCurve, z0: complex) -> float:
    """Euclidean distance from z0 to the filled curve (0 when inside)."""
    if contains_point(curve, z0):
        return 0.0
    return _min_distance_to_segments(z0, _polygon_vertices(curve))


def classify(p: RescaledSpectrum, plan: CurveScanPlan | None = None) -> StabilityReport:
    """Run the X sweep and assemble the stability report.

    For each X the fast screen runs first; the full curve is built to decide
    containment where the screen cannot exclude it and, in all cases, to
    contribute to the distance minimum.  A quadrature failure marks the report
    incomplete and returns the diagnostics accumulated so far.
    """
    if plan is None:
        plan = CurveScanPlan()
    unstable: list[float] = []
    diagnostics: dict = {}
    min_distance = INSTABILITY_POINT  # the filled set always includes the origin
    complete = True
    for big_x in plan.x_values:
        try:
            screen = fast_stability_check(p, big_x, plan)
            curve = gamma_curve(p, big_x, plan)
        except QuadratureError as exc:
            diagnostics[big_x] = {"error": str(exc)}
            complete = False
            continue
        contained = contains_point(curve, INSTABILITY_POINT + 0.0j)
        dist = 0.0 if contained else distance_to_filled_curve(curve, INSTABILITY_POINT + 0.0j)
        if contained:
            unstable.append(big_x)
        min_distance = min(min_distance, dist)
        diagnostics[big_x] = {
            "max_crossing_re": screen.max_crossing_re,
            "diameter": curve.diameter(),
            "distance": dist,
        }
    distance = 0.0 if unstable else min_distance
    pti = 1.0 - distance / INSTABILITY_POINT
    pti = min(1.0, max(0.0, pti))
    return StabilityReport(
        stable=not unstable,
        unstable_wavenumbers=tuple(unstable),
        distance=distance,
        pti=pti,
        diagnostics=diagnostics,
        complete=complete,
    )

"""Crossing-seas stability: coupled-envelope determinant condition.

Two wavetrains with independent carrier wavevectors are modeled by a coupled
pair of 2-D cubic Schrodinger equations.  After a gauge transform removes the
advection terms, the linearized second-moment analysis reduces the stability
question to a scalar determinant in the Laplace variable omega:

    F_P(omega) = (1 - xi1*hA(P,omega)) * (1 - xi2*hB(P,omega))
                 - zeta1*zeta2*hA(P,omega)*hB(P,omega)

where the transfer functions hA, hB are 2-D integrals of background-spectrum
differences against the resolvent of a bilinear dispersion form.  For each
perturbation wavevector P, F_P is holomorphic on Re omega > 0 and tends to 1
at infinity, so the argument principle applied along the contour
Re omega = delta decides whether F_P vanishes in the right half-plane
(instability).  The stability margin is kappa = inf |F_P| over the scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from seastab.transform import QuadratureError


@dataclass(frozen=True)
class WavetrainCoefficients:
    """Envelope-equation coefficients for one wavetrain.

    alpha, beta, gamma   second-derivative coefficients
    xi                   self-interaction coefficient
    zeta                 cross-interaction coefficient
    group_velocity       advection vector (removed by the gauge transform)
    carrier              optional carrier wavevector, bookkeeping only
    """

    alpha: float
    beta: float
    gamma: float
    xi: float
    zeta: float
    group_velocity: tuple[float, float] = (0.0, 0.0)
    carrier: tuple[float, float] | None = None

    @property
    def carrier_frequency(self) -> float | None:
        """Deep-water frequency sqrt(g*|carrier|), if a carrier is stored."""
        if self.carrier is None:
            return None
        return math.sqrt(9.81 * math.hypot(*self.carrier))


@dataclass(frozen=True)
class CoupledNlsCoefficients:
    """Coefficient sets for the two crossing wavetrains."""

    train_a: WavetrainCoefficients
    train_b: WavetrainCoefficients

    def swapped(self) -> "CoupledNlsCoefficients":
        return CoupledNlsCoefficients(train_a=self.train_b, train_b=self.train_a)


@dataclass(frozen=True)
class GaugeShift:
    """Wavenumber/frequency shifts (kappa, lam, tau) for one wavetrain."""

    kappa: float
    lam: float
    tau: float


@dataclass(frozen=True)
class GaugeParams:
    """Gauge shifts removing the advection terms of both wavetrains."""

    train_a: GaugeShift
    train_b: GaugeShift


class DegenerateCoefficientsError(ValueError):
    """4*alpha*beta - gamma^2 = 0: the gauge reduction system is singular."""


class HomogeneousBackground2D:
    """Nonnegative, compactly supported 2-D background spectrum.

    Wraps a vectorized function of (q1, q2) with a bounding support box;
    evaluates to zero outside the box.
    """

    def __init__(self, func: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 support: tuple[tuple[float, float], tuple[float, float]]):
        (a1, b1), (a2, b2) = support
        if not (a1 <= b1 and a2 <= b2):
            raise ValueError("support box must have lo <= hi on both axes")
        self._func = func
        self.support = ((float(a1), float(b1)), (float(a2), float(b2)))

    @property
    def is_zero(self) -> bool:
        (a1, b1), (a2, b2) = self.support
        return a1 == b1 or a2 == b2

    def __call__(self, q1, q2):
        q1 = np.asarray(q1, dtype=float)
        q2 = np.asarray(q2, dtype=float)
        (a1, b1), (a2, b2) = self.support
        inside = (q1 >= a1) & (q1 <= b1) & (q2 >= a2) & (q2 <= b2)
        out = np.zeros(np.broadcast(q1, q2).shape)
        if np.any(inside):
            vals = np.asarray(self._func(q1, q2), dtype=float)
            out[inside] = np.broadcast_to(vals, out.shape)[inside]
        return out

    @classmethod
    def zero(cls) -> "HomogeneousBackground2D":
        return cls(lambda q1, q2: np.zeros(np.broadcast(q1, q2).shape),
                   ((0.0, 0.0), (0.0, 0.0)))

    @classmethod
    def gaussian(cls, amplitude: float, center: tuple[float, float],
                 sigma: tuple[float, float] | float, n_sigma: float = 6.0
                 ) -> "HomogeneousBackground2D":
        """Isotropic or axis-aligned Gaussian bump, truncated at n_sigma."""
        if amplitude < 0.0:
            raise ValueError("amplitude must be >= 0")
        s1, s2 = (sigma, sigma) if np.isscalar(sigma) else sigma
        c1, c2 = center

        def func(q1, q2):
            return amplitude * np.exp(-0.5 * (((q1 - c1) / s1) ** 2 + ((q2 - c2) / s2) ** 2))

        box = ((c1 - n_sigma * s1, c1 + n_sigma * s1),
               (c2 - n_sigma * s2, c2 + n_sigma * s2))
        return cls(func, box)

    def scaled(self, factor: float) -> "HomogeneousBackground2D":
        return HomogeneousBackground2D(
            lambda q1, q2, f=self._func: factor * np.asarray(f(q1, q2)),
            self.support,
        )


@dataclass(frozen=True)
class Contour2DParams:
    """Argument-principle scan controls.

    delta             contour offset Re omega = delta
    n_omega           samples along the truncated contour
    omega_max_factor  contour half-height as a multiple of max |bilinear form|
    n_coarse          coarse per-axis panel count of the tensor quadrature
    rel_tol/abs_tol   fine/coarse acceptance (fine grid has 3x the points)
    max_levels        per-axis panel doubling cap
    zero_margin       |F| below this flags a resolution-limited verdict
    """

    delta: float = 1e-3
    n_omega: int = 129
    omega_max_factor: float = 2.0
    n_coarse: int = 16
    rel_tol: float = 1e-2
    abs_tol: float = 1e-6
    max_levels: int = 6
    zero_margin: float = 1e-2


@dataclass(frozen=True)
class CrossingReport:
    """Determinant-scan outcome.

    kappa_min   minimum of |F_P(omega)| over the scanned set
    bounded     max of |hA|+|hB| over the scan stayed finite
    unstable    nonzero winding of F_P about 0 detected for some P
    witnesses   (P, omega) points near the minimum of |F_P|
    """

    kappa_min: float
    bounded: bool
    unstable: bool
    witnesses: tuple
    resolution_limited: bool
    h_sup: float
    endpoint_deviation: float


def gauge_reduce(coeffs: CoupledNlsCoefficients) -> GaugeParams:
    """Solve the shift system that removes the advection terms.

    Per wavetrain:  2*alpha*kappa + gamma*lam = -C1
                    gamma*kappa + 2*beta*lam  = -C2
                    tau = -C1*kappa - C2*lam - alpha*kappa^2 - beta*lam^2
                          - gamma*kappa*lam
    """
    shifts = []
    for name, w in (("A", coeffs.train_a), ("B", coeffs.train_b)):
        det = 4.0 * w.alpha * w.beta - w.gamma**2
        if det == 0.0:
            raise DegenerateCoefficientsError(
                f"wavetrain {name}: 4*alpha*beta - gamma^2 = 0"
            )
        c1, c2 = w.group_velocity
        mat = np.array([[2.0 * w.alpha, w.gamma], [w.gamma, 2.0 * w.beta]])
        kappa, lam = np.linalg.solve(mat, [-c1, -c2])
        tau = (-c1 * kappa - c2 * lam - w.alpha * kappa**2 - w.beta * lam**2
               - w.gamma * kappa * lam)
        shifts.append(GaugeShift(kappa=float(kappa), lam=float(lam), tau=float(tau)))
    return GaugeParams(train_a=shifts[0], train_b=shifts[1])


def bilinear_form(w: WavetrainCoefficients, p, q):
    """4*pi^2 * [2*alpha*P1*Q1 + 2*beta*P2*Q2 + gamma*(P1*Q2 + P2*Q1)]."""
    p1, p2 = p
    q1, q2 = q
    return 4.0 * math.pi**2 * (
        2.0 * w.alpha * p1 * q1 + 2.0 * w.beta * p2 * q2
        + w.gamma * (p1 * q2 + p2 * q1)
    )


def _integration_box(bg: HomogeneousBackground2D, p: tuple[float, float]):
    """Bounding box of the union of the two half-shifted supports."""
    (a1, b1), (a2, b2) = bg.support
    h1, h2 = 0.5 * p[0], 0.5 * p[1]
    return ((min(a1 - h1, a1 + h1), max(b1 - h1, b1 + h1)),
            (min(a2 - h2, a2 + h2), max(b2 - h2, b2 + h2)))


def _simpson_weights(lo: float, hi: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.linspace(lo, hi, n + 1)
    w = np.full(n + 1, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    w *= (hi - lo) / n / 3.0
    return x, w


def _resonance_vector(w: WavetrainCoefficients, p: tuple[float, float]) -> tuple[float, float]:
    """Gradient of the bilinear form in Q: <<P,Q>> = c1*Q1 + c2*Q2."""
    c1 = 4.0 * math.pi**2 * (2.0 * w.alpha * p[0] + w.gamma * p[1])
    c2 = 4.0 * math.pi**2 * (2.0 * w.beta * p[1] + w.gamma * p[0])
    return (c1, c2)


def _numerator(bg: HomogeneousBackground2D, p, q1, q2):
    return 2.0 * (bg(q1 + 0.5 * p[0], q2 + 0.5 * p[1])
                  - bg(q1 - 0.5 * p[0], q2 - 0.5 * p[1]))


def _h_rotated(w: WavetrainCoefficients, bg: HomogeneousBackground2D,
               p: tuple[float, float], omegas: np.ndarray, n: int,
               params: Contour2DParams, shifted_difference: bool = True) -> np.ndarray:
    """Transfer function at all omegas via rotation to resonance coordinates.

    The denominator i*omega - <<P,Q>> depends on Q only through the linear
    functional c.Q, so in coordinates (xi, nu) aligned with c the Q-integral
    collapses to the 1-D singular integral of the smooth marginal

        M(xi) = int N(xi*e + nu*e_perp) d_nu,

    which the graded 1-D engine evaluates with its own fine/coarse acceptance.
    (A uniform axis-aligned tensor grid cannot resolve the resonant line of
    width Re omega.)
    """
    from scipy.interpolate import PchipInterpolator

    from seastab.transform import QuadratureParams, regularized_transform

    c1, c2 = _resonance_vector(w, p)
    cnorm = math.hypot(c1, c2)
    if shifted_difference:
        numerator = lambda q1, q2: _numerator(bg, p, q1, q2)
        box = _integration_box(bg, p)
    else:
        numerator = bg
        box = bg.support
    (a1, b1), (a2, b2) = box
    corners = np.array([(a1, a2), (a1, b2), (b1, a2), (b1, b2)])

    if cnorm == 0.0:
        # denominator is the constant i*omega: plain tensor Simpson
        x1, w1 = _simpson_weights(a1, b1, n)
        x2, w2 = _simpson_weights(a2, b2, n)
        q1, q2 = x1[:, None], x2[None, :]
        total = float(np.sum(numerator(q1, q2) * (w1[:, None] * w2[None, :])))
        return total / (1j * omegas)

    e1, e2 = c1 / cnorm, c2 / cnorm
    xi_vals = corners @ np.array([e1, e2])
    nu_vals = corners @ np.array([-e2, e1])
    xi_lo, xi_hi = float(xi_vals.min()), float(xi_vals.max())
    nu_lo, nu_hi = float(nu_vals.min()), float(nu_vals.max())

    xi = np.linspace(xi_lo, xi_hi, n + 1)
    nu, w_nu = _simpson_weights(nu_lo, nu_hi, n)
    q1 = xi[:, None] * e1 + nu[None, :] * (-e2)
    q2 = xi[:, None] * e2 + nu[None, :] * e1
    marginal = numerator(q1, q2) @ w_nu

    # substitute s = cnorm*xi:  h = (1/cnorm) int M(s/cnorm) / (i*omega - s) ds
    s_nodes = cnorm * xi
    interp = PchipInterpolator(s_nodes, marginal / cnorm, extrapolate=False)
    s0, s1 = s_nodes[0], s_nodes[-1]

    def m_tilde(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape)
        mask = (s >= s0) & (s <= s1)
        if np.any(mask):
            out[mask] = interp(s[mask])
        return out

    out = np.empty(omegas.shape, dtype=complex)
    for i, om in enumerate(omegas):
        # i*omega - s = (t - s) + i*Re(omega) with t = -Im(omega); conjugating
        # maps it onto the (t - s) - i*eta kernel of the 1-D engine
        qp = QuadratureParams(eta=float(om.real), rel_tol=params.rel_tol,
                              abs_tol=params.abs_tol, max_levels=params.max_levels + 6)
        sample = regularized_transform(m_tilde, (s0, s1), -float(om.imag), qp,
                                       knots=s_nodes)
        out[i] = np.conj(math.pi * sample.value)
    return out


def transfer_function_batch(w: WavetrainCoefficients, bg: HomogeneousBackground2D,
                            p: tuple[float, float], omegas: np.ndarray,
                            params: Contour2DParams | None = None) -> np.ndarray:
    """h(P, omega) for all omegas, with fine/coarse adaptive acceptance.

    h = 2 * int [G(Q+P/2) - G(Q-P/2)] / (i*omega - <<P,Q>>) dQ over the
    shift-dilated support box.  Requires Re omega > 0, where the denominator
    cannot vanish.  The resonant (singular) direction is handled by the graded
    1-D engine; the transverse marginal resolution is accepted when the
    fine (3x points) vs coarse discrepancy meets the relative or the absolute
    tolerance, and doubled otherwise.
    """
    if params is None:
        params = Contour2DParams()
    omegas = np.asarray(omegas, dtype=complex)
    if np.any(omegas.real <= 0.0):
        raise ValueError("transfer function requires Re omega > 0")
    if bg.is_zero or (p[0] == 0.0 and p[1] == 0.0):
        return np.zeros(omegas.shape, dtype=complex)
    n = max(params.n_coarse, 8)
    last = None
    err = math.inf
    for _ in range(params.max_levels):
        coarse = _h_rotated(w, bg, p, omegas, n, params)
        fine = _h_rotated(w, bg, p, omegas, 3 * n, params)
        err = float(np.abs(fine - coarse).max())
        scale = float(np.abs(fine).max())
        last = fine
        if err <= params.rel_tol * scale or err <= params.abs_tol:
            return fine
        n *= 2
    raise QuadratureError(t=float(omegas[0].imag), estimate=complex(last[0]),
                          est_error=err, panels_used=(3 * n) ** 2)


def transfer_function(w: WavetrainCoefficients, bg: HomogeneousBackground2D,
                      p: tuple[float, float], omega: complex,
                      params: Contour2DParams | None = None) -> complex:
    """Scalar transfer function h(P, omega), Re omega > 0."""
    return complex(transfer_function_batch(w, bg, p, np.array([omega]), params)[0])


def initial_response(w: WavetrainCoefficients, numerator: Callable,
                     support: tuple[tuple[float, float], tuple[float, float]],
                     p: tuple[float, float], omega: complex,
                     params: Contour2DParams | None = None) -> complex:
    """Free-space response of an initial inhomogeneity (diagnostics only).

    Same resolvent quadrature as the transfer function, with the numerator
    f(P, Q, 0) supplied by the caller as a vectorized function of (q1, q2).
    The stability verdict never uses this quantity.
    """
    if params is None:
        params = Contour2DParams()
    omega = complex(omega)
    if omega.real <= 0.0:
        raise ValueError("initial response requires Re omega > 0")
    field = HomogeneousBackground2D(numerator, support)
    omegas = np.array([omega])
    n = max(params.n_coarse, 8)
    last, err = None, math.inf
    for _ in range(params.max_levels):
        coarse = _h_rotated(w, field, p, omegas, n, params, shifted_difference=False)
        fine = _h_rotated(w, field, p, omegas, 3 * n, params, shifted_difference=False)
        err = float(abs(fine[0] - coarse[0]))
        last = complex(fine[0])
        if err <= params.rel_tol * abs(last) or err <= params.abs_tol:
            return last
        n *= 2
    raise QuadratureError(t=float(omega.imag), estimate=last, est_error=err,
                          panels_used=(3 * n) ** 2)


def dispersion_determinant(h_a: complex, h_b: complex,
                           coeffs: CoupledNlsCoefficients) -> complex:
    """(1 - xi1*hA)(1 - xi2*hB) - zeta1*zeta2*hA*hB."""
    return ((1.0 - coeffs.train_a.xi * h_a) * (1.0 - coeffs.train_b.xi * h_b)
            - coeffs.train_a.zeta * coeffs.train_b.zeta * h_a * h_b)


def _background_mass(bg: HomogeneousBackground2D) -> float:
    """int int bg dQ, a modest-accuracy trapezoid (used only for bounds)."""
    (a1, b1), (a2, b2) = bg.support
    if b1 <= a1 or b2 <= a2:
        return 0.0
    q1 = np.linspace(a1, b1, 101)
    q2 = np.linspace(a2, b2, 101)
    vals = bg(q1[:, None], q2[None, :])
    return float(np.trapezoid(np.trapezoid(vals, q2, axis=1), q1))


def _bilinear_max_over_box(w: WavetrainCoefficients, p, box) -> float:
    """max |<<P,Q>>| over a box: the form is linear in Q, so check corners."""
    (a1, b1), (a2, b2) = box
    corners = [(a1, a2), (a1, b2), (b1, a2), (b1, b2)]
    return max(abs(bilinear_form(w, p, q)) for q in corners)


def _winding_number(values: np.ndarray) -> int:
    """Winding of the closed polyline through values (appending the first)."""
    closed = np.concatenate([values, values[:1]])
    args = np.angle(closed[1:] / closed[:-1])
    return int(round(float(np.sum(args)) / (2.0 * math.pi)))


def stability_scan(bg_a: HomogeneousBackground2D, bg_b: HomogeneousBackground2D,
                   coeffs: CoupledNlsCoefficients,
                   p_grid: list[tuple[float, float]] | None = None,
                   contour: Contour2DParams | None = None) -> CrossingReport:
    """Trace F_P along Re omega = delta for each P and assemble the verdict.

    The truncated contour spans |Im omega| <= Omega_max with Omega_max set
    from the largest |bilinear form| over the integration boxes (dilated by
    ``omega_max_factor``); the closure at infinity is the asymptotic value 1.
    Nonzero winding of F_P about 0 for any P means instability.
    """
    if contour is None:
        contour = Contour2DParams()
    if p_grid is None:
        p_grid = default_p_grid(bg_a, bg_b)

    kappa_min = math.inf
    h_sup = 0.0
    unstable = False
    witnesses: list[tuple] = []
    endpoint_dev = 0.0
    for p in p_grid:
        omega_max = contour.omega_max_factor * max(
            _bilinear_max_over_box(coeffs.train_a, p, _integration_box(bg_a, p)),
            _bilinear_max_over_box(coeffs.train_b, p, _integration_box(bg_b, p)),
            1e-6,
        )
        # resolvent bound: |h| <= mass/|Im omega| outside the bilinear range,
        # so extend the contour with log-spaced wings until the determinant is
        # provably within ~1e-3 of its asymptote 1
        mass = 2.0 * (_background_mass(bg_a) + _background_mass(bg_b))
        coupling = max(abs(coeffs.train_a.xi), abs(coeffs.train_b.xi),
                       abs(coeffs.train_a.zeta * coeffs.train_b.zeta), 1e-6)
        omega_far = max(4.0 * omega_max, 4e3 * coupling * mass)
        core = np.linspace(-omega_max, omega_max, contour.n_omega)
        n_wing = max(8, contour.n_omega // 8)
        wing = np.geomspace(omega_max, omega_far, n_wing)[1:]
        ys = np.concatenate([-wing[::-1], core, wing])
        omegas = contour.delta + 1j * ys
        h_a = transfer_function_batch(coeffs.train_a, bg_a, p, omegas, contour)
        h_b = transfer_function_batch(coeffs.train_b, bg_b, p, omegas, contour)
        f_vals = dispersion_determinant(h_a, h_b, coeffs)
        h_sup = max(h_sup, float((np.abs(h_a) + np.abs(h_b)).max()))
        endpoint_dev = max(endpoint_dev,
                           abs(f_vals[0] - 1.0), abs(f_vals[-1] - 1.0))
        # close the image curve through the asymptote F -> 1
        winding = _winding_number(np.concatenate([f_vals, [1.0 + 0.0j]]))
        if winding != 0:
            unstable = True
        mags = np.abs(f_vals)
        i_min = int(np.argmin(mags))
        if mags[i_min] < kappa_min:
            kappa_min = float(mags[i_min])
            witnesses = [(p, complex(omegas[i_min]), float(mags[i_min]))]
        elif mags[i_min] < 1.05 * kappa_min:
            witnesses.append((p, complex(omegas[i_min]), float(mags[i_min])))
    resolution_limited = (not unstable) and kappa_min < contour.zero_margin
    return CrossingReport(
        kappa_min=kappa_min,
        bounded=math.isfinite(h_sup),
        unstable=unstable,
        witnesses=tuple(witnesses[:8]),
        resolution_limited=resolution_limited,
        h_sup=h_sup,
        endpoint_deviation=endpoint_dev,
    )


def default_p_grid(bg_a: HomogeneousBackground2D, bg_b: HomogeneousBackground2D,
                   n_per_axis: int = 5, p_max: float | None = None
                   ) -> list[tuple[float, float]]:
    """Symmetric grid of perturbation wavevectors, origin excluded.

    The scale defaults to twice the largest support extent of the two
    backgrounds (small-|P| perturbations are the dangerous ones, mirroring the
    small-X behavior of the scalar sweep).
    """
    if p_max is None:
        extents = [abs(v) for bg in (bg_a, bg_b) for axis in bg.support for v in axis]
        p_max = 2.0 * max(extents) if any(e > 0 for e in extents) else 1.0
    axis = np.linspace(-p_max, p_max, n_per_axis)
    return [(float(p1), float(p2)) for p1 in axis for p2 in axis
            if not (p1 == 0.0 and p2 == 0.0)]

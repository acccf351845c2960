"""Phase-resolved Monte Carlo surrogate on a periodic domain.

Realizations of a sea state are drawn from the wavenumber spectrum with
independent complex standard-normal mode amplitudes,

    A_j = Z_j * sqrt(2 * S(k_j) * dk),

and evolved either exactly (linear backend: each envelope mode picks up its
dispersive phase) or under the cubic focusing Schrodinger equation with Strang
split-step (nls backend).  The surface elevation is reconstructed from the
envelope u through

    eta(x, t) = Re[ u(x, t) * exp(i*(k0*x - omega0*t)) ],  omega0 = sqrt(g*k0)

and sampled at probe locations to produce time series for the statistics
module.  Everything is deterministic under a seed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from seastab.spectra import DiscreteSpectrum, GRAVITY, monotone_interpolant

_PHASE_RESOLUTION_FACTOR = 0.1  # dt <= 0.1 / max|p k^2| for the split-step backend


class SimulationError(ValueError):
    """Invalid grid, parameters or probe configuration."""


@dataclass(frozen=True)
class SimGrid:
    """Periodic spatial grid tied to the reference wavenumber k0.

    n points resolve wavenumbers up to k_max = kmax_factor*k0 (default 8),
    giving dk = 2*k_max/n, dx = pi/k_max (= lambda0/16 at the default factor)
    and domain length x_max = n*dx.
    """

    k0: float
    n: int = 1024
    kmax_factor: float = 8.0

    def __post_init__(self):
        if not (self.k0 > 0.0):
            raise SimulationError("k0 must be positive")
        if self.n < 4 or (self.n & (self.n - 1)) != 0:
            raise SimulationError("n must be a power of two")
        if self.kmax_factor <= 1.0:
            raise SimulationError("kmax_factor must exceed 1")

    @property
    def k_max(self) -> float:
        return self.kmax_factor * self.k0

    @property
    def dk(self) -> float:
        return 2.0 * self.k_max / self.n

    @property
    def lambda0(self) -> float:
        return 2.0 * math.pi / self.k0

    @property
    def dx(self) -> float:
        return math.pi / self.k_max

    @property
    def x_max(self) -> float:
        return self.n * self.dx

    @property
    def x(self) -> np.ndarray:
        return self.dx * np.arange(self.n)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Positive physical wavenumbers k_j = j*dk, j = 1..n/2."""
        return self.dk * np.arange(1, self.n // 2 + 1)

    @property
    def envelope_modes(self) -> np.ndarray:
        """FFT wavenumber grid of the envelope, mu = k - k0."""
        return 2.0 * math.pi * np.fft.fftfreq(self.n, d=self.dx)


@dataclass(frozen=True)
class NlsParams:
    """Coefficients of the cubic Schrodinger envelope equation at carrier k0.

    p = sqrt(g) / (8 k0^(3/2)),  q = (sqrt(g)/2) k0^(5/2),  omega0 = sqrt(g k0).
    """

    k0: float
    gravity: float = GRAVITY

    def __post_init__(self):
        if not (self.k0 > 0.0 and self.gravity > 0.0):
            raise SimulationError("k0 and gravity must be positive")

    @property
    def p(self) -> float:
        return math.sqrt(self.gravity) / (8.0 * self.k0**1.5)

    @property
    def q(self) -> float:
        return 0.5 * math.sqrt(self.gravity) * self.k0**2.5

    @property
    def omega0(self) -> float:
        return math.sqrt(self.gravity * self.k0)

    @property
    def group_velocity(self) -> float:
        """Deep-water group velocity omega0 / (2 k0) of the carrier."""
        return self.omega0 / (2.0 * self.k0)


@dataclass(frozen=True)
class Realization:
    """Complex mode amplitudes of one random draw, reproducible from seed."""

    amplitudes: np.ndarray  # A_j on grid.wavenumbers
    seed: int
    spectrum_id: str
    grid: SimGrid

    def envelope(self) -> np.ndarray:
        """Initial envelope u(x, 0) = sum_j A_j exp(i*(k_j - k0)*x)."""
        grid = self.grid
        spec = np.zeros(grid.n, dtype=complex)
        j0 = grid.k0 / grid.dk
        for j, amp in enumerate(self.amplitudes, start=1):
            if amp == 0.0:
                continue
            m = int(round(j - j0)) % grid.n
            spec[m] += amp
        return np.fft.ifft(spec) * grid.n


@dataclass(frozen=True)
class FieldHistory:
    """Envelope snapshots u(x, t_m) on the periodic grid."""

    times: np.ndarray
    u: np.ndarray  # shape (n_times, grid.n)
    grid: SimGrid
    params: NlsParams
    backend: str


@dataclass(frozen=True)
class ProbeSeries:
    """Surface elevation sampled at one location at uniform dt."""

    x: float
    t: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        if len(self.t) > 1 and not np.all(np.diff(self.t) > 0.0):
            raise SimulationError("probe times must be increasing")

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0]) if len(self.t) > 1 else 0.0

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0]) if len(self.t) else 0.0


def draw_realization(spectrum: DiscreteSpectrum, grid: SimGrid, seed: int,
                     spectrum_id: str | None = None) -> Realization:
    """Draw A_j = Z_j sqrt(2 S(k_j) dk) with complex standard normal Z_j.

    Re and Im of Z_j are independent N(0, 1/2), so E|Z_j|^2 = 1, |Z_j| is
    Rayleigh(1/sqrt(2)), and the ensemble satisfies E|A_j|^2 = 2 S(k_j) dk.
    The spectrum is sampled onto the regular dk grid with the monotone
    interpolant, zero outside the sampled support.
    """
    rng = np.random.default_rng(seed)
    k = grid.wavenumbers
    interp = monotone_interpolant(spectrum.k, spectrum.density)
    s = np.zeros(k.shape)
    inside = (k >= spectrum.k[0]) & (k <= spectrum.k[-1])
    s[inside] = np.clip(interp(k[inside]), 0.0, None)
    z = (rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size)) * math.sqrt(0.5)
    amps = z * np.sqrt(2.0 * s * grid.dk)
    amps.setflags(write=False)
    return Realization(
        amplitudes=amps,
        seed=int(seed),
        spectrum_id=spectrum_id if spectrum_id is not None else spectrum.provenance,
        grid=grid,
    )


def max_stable_dt(grid: SimGrid, params: NlsParams) -> float:
    """Largest dt resolving the fastest linear phase on the grid."""
    mu = grid.envelope_modes
    return _PHASE_RESOLUTION_FACTOR / (params.p * float(np.max(mu**2)))


def evolve(realization: Realization, backend: str, params: NlsParams,
           duration: float, dt: float, dt_out: float | None = None) -> FieldHistory:
    """Evolve the envelope and record snapshots every dt_out.

    linear          each mode advances by its exact phase exp(i p mu^2 t);
                    dt is ignored (the propagation is exact at any time)
    nls_split_step  Strang splitting of i u_t - p u_xx - q |u|^2 u = 0;
                    requires dt <= 0.1 / max|p mu^2|
    """
    if backend not in ("linear", "nls_split_step"):
        raise SimulationError(f"unknown backend {backend!r}")
    if duration <= 0.0:
        raise SimulationError("duration must be positive")
    if dt_out is None:
        dt_out = dt
    grid = realization.grid
    mu2 = grid.envelope_modes**2
    n_out = int(round(duration / dt_out))
    times = dt_out * np.arange(n_out + 1)

    u0 = realization.envelope()
    if backend == "linear":
        spec0 = np.fft.fft(u0)
        u = np.fft.ifft(spec0[None, :] * np.exp(1j * params.p * mu2[None, :] * times[:, None]),
                        axis=1)
        return FieldHistory(times=times, u=u, grid=grid, params=params, backend=backend)

    dt_max = max_stable_dt(grid, params)
    if dt > dt_max:
        raise SimulationError(
            f"dt={dt:g} violates the linear phase resolution bound {dt_max:g}"
        )
    steps_per_out = max(1, math.ceil(dt_out / dt))
    h = dt_out / steps_per_out
    phase_full = np.exp(1j * params.p * mu2 * h)
    u = np.empty((n_out + 1, grid.n), dtype=complex)
    u[0] = u0
    cur = u0.copy()
    for m in range(1, n_out + 1):
        for _ in range(steps_per_out):
            # Strang: half nonlinear, full linear, half nonlinear
            cur *= np.exp(-0.5j * params.q * h * np.abs(cur) ** 2)
            cur = np.fft.ifft(np.fft.fft(cur) * phase_full)
            cur *= np.exp(-0.5j * params.q * h * np.abs(cur) ** 2)
        u[m] = cur
    return FieldHistory(times=times, u=u, grid=grid, params=params, backend=backend)


def reconstruct_surface(u, params: NlsParams, x, t):
    """eta = Re[u exp(i (k0 x - omega0 t))]; broadcasts over x and t."""
    return np.real(np.asarray(u) * np.exp(1j * (params.k0 * np.asarray(x)
                                                - params.omega0 * np.asarray(t))))


def default_probe_locations(grid: SimGrid, count: int = 4) -> list[float]:
    """Equispaced probes over the periodic domain, starting at x = 0."""
    return [i * grid.x_max / count for i in range(count)]


def probe_series(history: FieldHistory, locations: list[float] | None = None
                 ) -> list[ProbeSeries]:
    """Extract surface elevation at probe locations from a field history.

    Probes snap to the nearest grid point; duplicates (after snapping) are
    dropped with a warning; out-of-domain probes are rejected.
    """
    grid = history.grid
    if locations is None:
        locations = default_probe_locations(grid)
    indices: list[int] = []
    for x in locations:
        if not (0.0 <= x < grid.x_max):
            raise SimulationError(f"probe at x={x:g} outside [0, {grid.x_max:g})")
        idx = int(round(x / grid.dx)) % grid.n
        if idx in indices:
            warnings.warn(f"duplicate probe location x={x:g} dropped", stacklevel=2)
            continue
        indices.append(idx)
    # the envelope lives in the frame moving at the group velocity; probes are
    # fixed in space, so shift each snapshot back by cg*t before sampling
    mu = grid.envelope_modes
    cg = history.params.group_velocity
    spec = np.fft.fft(history.u, axis=1)
    shifted = np.fft.ifft(
        spec * np.exp(-1j * np.outer(history.times * cg, mu)), axis=1
    )
    out = []
    for idx in indices:
        xg = grid.x[idx]
        eta = reconstruct_surface(shifted[:, idx], history.params, xg, history.times)
        out.append(ProbeSeries(x=float(xg), t=history.times, eta=eta))
    return out


def linear_probe_elevation(realization: Realization, params: NlsParams,
                           x: float, times: np.ndarray) -> np.ndarray:
    """Exact linear-backend elevation at one probe, by direct mode summation.

    Each mode advances with the quadratic expansion of the deep-water
    dispersion relation about the carrier,

        omega_j = omega0 + cg*(k_j - k0) - p*(k_j - k0)^2,

    matching the co-moving-frame evolution sampled at a probe fixed in space.
    Only modes with nonzero amplitude contribute, which makes long series for
    narrow spectra cheap; used by the Rayleigh/Gaussian baselines.
    """
    grid = realization.grid
    k = grid.wavenumbers
    nz = realization.amplitudes != 0.0
    amps = realization.amplitudes[nz]
    kj = k[nz]
    mu = kj - params.k0
    omega_j = params.omega0 + params.group_velocity * mu - params.p * mu**2
    eta = np.empty(len(times))
    chunk = max(1, 4_000_000 // max(1, len(kj)))
    phase0 = amps * np.exp(1j * kj * x)
    for i in range(0, len(times), chunk):
        tt = times[i:i + chunk]
        eta[i:i + chunk] = np.real(np.exp(-1j * np.outer(tt, omega_j)) @ phase0)
    return eta

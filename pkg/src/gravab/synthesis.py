"""Brute-force check of the sideband prediction, and its inverse.

A unit phasor with the orbital phase modulation is sampled in a
downconverted frame (offset_freq instead of the GHz carrier), transformed,
and the line magnitudes are read off at the bin-aligned sideband positions.
The modulation index is then recovered by a one-dimensional least-squares
fit of ``|J_n(alpha)|`` to the measured magnitudes.

Bin alignment is enforced instead of windowing, so there is no leakage and
the measured magnitudes equal ``|J_n(alpha)|`` up to aliasing of
negligible far sidebands.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from gravab import _kernels
from gravab.errors import ConfigurationError, EstimationError, SpectrumRangeError
from gravab.spectrum import bessel_j_orders, significant_band

#: largest length handled by the direct O(N^2) transform
DIRECT_DFT_MAX = 4096
#: power left outside the band that must fit below Nyquist
NYQUIST_EPSILON = 1e-6
_ALIGN_TOL = 1e-9
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class TimeSeries:
    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ConfigurationError(f"dt must be > 0, got {self.dt!r}", field="dt")
        s = np.asarray(self.samples, dtype=np.complex128)
        if s.ndim != 1 or s.shape[0] < 2:
            raise ConfigurationError("a time series needs at least two samples", field="samples")
        if not np.all(np.isfinite(s)):
            raise ConfigurationError("samples must be finite", field="samples")
        object.__setattr__(self, "samples", s)

    def __len__(self):
        return self.samples.shape[0]

    @property
    def sample_rate(self) -> float:
        return 1.0 / self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t_s", "re", "im"])
        for t, z in zip(self.times(), self.samples):
            w.writerow([repr(float(t)), repr(float(z.real)), repr(float(z.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> TimeSeries:
        rows = list(csv.DictReader(io.StringIO(text)))
        if len(rows) < 2 or set(rows[0]) != {"t_s", "re", "im"}:
            raise ConfigurationError("time-series CSV needs columns t_s,re,im and >= 2 rows", field="input")
        t = np.array([float(r["t_s"]) for r in rows])
        z = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
        steps = np.diff(t)
        dt = float(steps.mean())
        if not np.allclose(steps, dt, rtol=1e-9, atol=0.0):
            raise ConfigurationError("time series must be uniformly sampled", field="input")
        return cls(float(t[0]), dt, z)


def _bins(freq, df, name):
    k = freq / df
    kr = round(k)
    if abs(k - kr) > _ALIGN_TOL * max(1.0, abs(k)):
        raise ConfigurationError(
            f"{name} = {freq!r} Hz is not an integer multiple of the bin width {df!r} Hz", field=name
        )
    return int(kr)


def synthesis_length(orbital_freq, sample_rate, n_periods) -> int:
    n = n_periods * sample_rate / orbital_freq
    nr = round(n)
    if abs(n - nr) > _ALIGN_TOL * n:
        raise ConfigurationError(
            "n_periods * sample_rate / orbital_freq must be an integer sample count", field="sample_rate"
        )
    return int(nr)


def synthesize_beat(alpha, orbital_freq, offset_freq, sample_rate, n_periods=1) -> TimeSeries:
    """Samples of exp(i (2 pi offset_freq t + alpha sin(2 pi orbital_freq t))).

    Raises ConfigurationError on a Nyquist violation or when either frequency
    is not an integer multiple of the bin width sample_rate / N.
    """
    if not alpha >= 0.0:
        raise ConfigurationError("alpha must be >= 0", field="alpha")
    if not orbital_freq > 0.0:
        raise ConfigurationError("orbital_freq must be > 0", field="orbital_freq")
    if not offset_freq >= 0.0:
        raise ConfigurationError("offset_freq must be >= 0", field="offset_freq")
    if not sample_rate > 0.0:
        raise ConfigurationError("sample_rate must be > 0", field="sample_rate")
    if int(n_periods) != n_periods or n_periods < 1:
        raise ConfigurationError("n_periods must be a positive integer", field="n_periods")
    n_periods = int(n_periods)
    band = significant_band(alpha, NYQUIST_EPSILON) if alpha > 0 else 0
    highest = offset_freq + band * orbital_freq
    if not sample_rate > 2.0 * highest:
        raise ConfigurationError(
            f"Nyquist violated: sample_rate {sample_rate!r} Hz must exceed 2 * {highest!r} Hz "
            f"(offset + {band} sidebands)",
            field="sample_rate",
        )
    n = synthesis_length(orbital_freq, sample_rate, n_periods)
    df = sample_rate / n
    k_off = _bins(offset_freq, df, "offset_freq")
    k_orb = _bins(orbital_freq, df, "orbital_freq")
    k = np.arange(n, dtype=np.int64)
    # integer phase reduction keeps arguments in [0, 2 pi)
    carrier = 2.0 * np.pi * ((k_off * k) % n) / n
    modulation = alpha * np.sin(2.0 * np.pi * ((k_orb * k) % n) / n)
    return TimeSeries(0.0, 1.0 / sample_rate, np.exp(1j * (carrier + modulation)))


def add_white_noise(series: TimeSeries, snr_db, seed) -> TimeSeries:
    """Add circular complex Gaussian noise at the given signal-to-noise ratio.

    SNR is mean signal power over noise power.  The generator is PCG64
    seeded with ``seed``, so the result is reproducible.
    """
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    sig_power = float(np.mean(np.abs(series.samples) ** 2))
    noise_power = sig_power * 10.0 ** (-float(snr_db) / 10.0)
    sigma = math.sqrt(noise_power / 2.0)
    n = len(series)
    noise = rng.normal(0.0, sigma, n) + 1j * rng.normal(0.0, sigma, n)
    return TimeSeries(series.t0, series.dt, series.samples + noise)


@dataclass(frozen=True, eq=False)
class DiscreteSpectrum:
    """Unitary DFT of a time series: ``X_k = N**-0.5 * sum_j x_j exp(-2 pi i jk/N)``."""

    sample_rate: float
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def bin_width(self) -> float:
        return self.sample_rate / self.n

    def freqs(self) -> np.ndarray:
        return np.fft.fftfreq(self.n, d=1.0 / self.sample_rate)

    def line_magnitude(self, k: int) -> float:
        """Magnitude of bin k rescaled to the amplitude of a unit tone."""
        return abs(self.values[k % self.n]) / math.sqrt(self.n)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["freq_hz", "re", "im", "mag"])
        for f, z in zip(self.freqs(), self.values):
            w.writerow([repr(float(f)), repr(float(z.real)), repr(float(z.imag)), repr(float(abs(z)))])
        return buf.getvalue()


def dft(series: TimeSeries) -> DiscreteSpectrum:
    """Unitary forward transform: radix-2 for power-of-two lengths, direct up to 4096."""
    n = len(series)
    if n & (n - 1) == 0:
        raw = _kernels.fft_radix2(series.samples)
    elif n <= DIRECT_DFT_MAX:
        raw = _kernels.dft_direct(series.samples)
    else:
        raise ConfigurationError(
            f"length {n} is neither a power of two nor <= {DIRECT_DFT_MAX}", field="samples"
        )
    return DiscreteSpectrum(series.sample_rate, raw / math.sqrt(n))


def extract_sideband_amplitudes(spectrum: DiscreteSpectrum, offset_freq, orbital_freq, n_range):
    """Measured |J_n| at the bins offset_freq + n * orbital_freq, as [(n, magnitude)]."""
    df = spectrum.bin_width
    nyq = 0.5 * spectrum.sample_rate
    out = []
    for n in n_range:
        f = offset_freq + n * orbital_freq
        if not -nyq <= f < nyq:
            raise SpectrumRangeError(
                f"line n={n} at {f!r} Hz lies outside the sampled band [-{nyq!r}, {nyq!r}) Hz"
            )
        k = _bins(f, df, "offset_freq")
        out.append((int(n), spectrum.line_magnitude(k)))
    return out


@dataclass(frozen=True)
class EstimationResult:
    alpha_hat: float
    residual_norm: float
    n_lines_used: int

    def to_dict(self, seed=None) -> dict:
        return {
            "alpha_hat": self.alpha_hat,
            "residual_norm": self.residual_norm,
            "n_lines_used": self.n_lines_used,
            "seed": seed,
        }


def _objective(measured_n, measured_amp):
    nmax = int(np.max(np.abs(measured_n)))

    def f(alpha):
        j = np.abs(bessel_j_orders(nmax, alpha))[np.abs(measured_n)]
        return float(np.sum((j - measured_amp) ** 2))

    return f


def golden_section(f, lo, hi, tol):
    """Golden-section search; returns the final (a, b) bracket and f at its inner points."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return a, b, (c, fc), (d, fd)


def _parabola_vertex(x0, f0, x1, f1, x2, f2):
    den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0)
    if den == 0.0:
        return None
    num = (x1 - x0) ** 2 * (f1 - f2) - (x1 - x2) ** 2 * (f1 - f0)
    return x1 - 0.5 * num / den


def estimate_modulation_index(measured, alpha_bracket, tol=1e-6, grid_step=0.1) -> EstimationResult:
    """Least-squares alpha from measured sideband magnitudes.

    The residual ``sum_n (|J_n(alpha)| - a_n)**2`` is multimodal in alpha, so
    the bracket is first scanned on a grid of spacing <= ``grid_step`` to
    isolate the basin of the global minimum.  Golden-section search then
    narrows that basin to ``tol`` and one parabolic step refines it.

    Raises EstimationError when the scan minimum sits on the bracket edge,
    i.e. the residual is monotone and no interior minimum exists.
    """
    if len(measured) < 3:
        raise ConfigurationError("need at least three measured lines", field="measured")
    lo, hi = (float(v) for v in alpha_bracket)
    if not (0.0 <= lo < hi):
        raise ConfigurationError(f"bracket must satisfy 0 <= lo < hi, got {alpha_bracket!r}", field="alpha_bracket")
    ns = np.array([n for n, _ in measured], dtype=np.int64)
    amps = np.array([a for _, a in measured], dtype=np.float64)
    f = _objective(ns, amps)

    n_grid = max(16, math.ceil((hi - lo) / grid_step))
    grid = np.linspace(lo, hi, n_grid + 1)
    values = np.array([f(x) for x in grid])
    i = int(np.argmin(values))
    if i == 0 or i == n_grid:
        raise EstimationError(
            f"residual has no interior minimum in [{lo!r}, {hi!r}] (minimum at the bracket edge)",
            residual=float(math.sqrt(values[i])),
        )
    a, b, (c, fc), (d, fd) = golden_section(f, grid[i - 1], grid[i + 1], tol)
    best, fbest = (c, fc) if fc < fd else (d, fd)
    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    vertex = _parabola_vertex(a, fa, mid, fm, b, fb)
    if vertex is not None and a <= vertex <= b:
        fv = f(vertex)
        if fv <= fbest:
            best, fbest = vertex, fv
    for x, fx in ((a, fa), (mid, fm), (b, fb)):
        if fx < fbest:
            best, fbest = x, fx
    return EstimationResult(float(best), math.sqrt(fbest), len(measured))


@dataclass(frozen=True)
class NyquistRequirements:
    peak_sideband_freq: float
    min_sample_rate: float
    max_averaging_interval: float
    bounded: bool

    def to_dict(self) -> dict:
        return {
            "peak_sideband_freq_hz": self.peak_sideband_freq,
            "min_sample_rate_hz": self.min_sample_rate,
            # JSON has no infinity; an unbounded interval is reported as null
            "max_averaging_interval_s": self.max_averaging_interval if self.bounded else None,
            "bounded": self.bounded,
        }


def nyquist_requirements(alpha, orbital_freq) -> NyquistRequirements:
    """Sampling needed to resolve the strongest sideband, at n ~ alpha."""
    if not alpha >= 0.0:
        raise ConfigurationError("alpha must be >= 0", field="alpha")
    if not orbital_freq > 0.0:
        raise ConfigurationError("orbital_freq must be > 0", field="orbital_freq")
    peak = alpha * orbital_freq
    if peak == 0.0:
        return NyquistRequirements(0.0, 0.0, math.inf, False)
    rate = 2.0 * peak
    return NyquistRequirements(peak, rate, 1.0 / rate, True)


def estimation_report_json(result: EstimationResult, seed=None) -> str:
    return json.dumps(result.to_dict(seed), indent=2, sort_keys=True) + "\n"

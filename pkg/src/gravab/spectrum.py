"""Jacobi-Anger sideband spectrum of the phase-modulated clock transition.

A phase modulation ``alpha sin(Omega t)`` on the excited-state amplitude
splits the transition into lines at the (shifted) carrier plus integer
multiples of the orbital frequency, with amplitudes ``(-1)**n J_n(alpha)``.
Only the powers ``J_n(alpha)**2`` are observable; they sum to one.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from gravab import _kernels
from gravab.constants import HBAR
from gravab.errors import ConfigurationError

#: largest argument handled by the ascending series for low orders
SERIES_X_MAX = 8.0


def _miller_start(nmax: int, x: float) -> int:
    m = max(nmax, math.ceil(x)) + 20 + math.ceil(8.0 * x ** (1.0 / 3.0))
    return m + (m % 2)


def _bessel_series(n: int, x: float) -> float:
    # sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
    half = 0.5 * x
    # log(x) - log 2 rather than log(x/2): x/2 can underflow to zero
    log_lead = n * (math.log(x) - math.log(2.0)) - math.lgamma(n + 1)
    term = math.exp(log_lead)
    q = -half * half
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if abs(term) < 1e-17 * max(abs(total), 1e-300) and k > 2:
            break
        if k > 500:
            break
    return total


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind J_n(x) for integer n >= 0, x >= 0.

    Ascending power series for ``x <= max(8, n/2)``; Miller backward
    recurrence normalized by ``J_0 + 2 sum J_2k = 1`` otherwise.  Absolute
    error is below 1e-12 across the domain.
    """
    if n < 0 or int(n) != n:
        raise ConfigurationError(f"order must be a non-negative integer, got {n!r}", field="n")
    if not (x >= 0.0 and math.isfinite(x)):
        raise ConfigurationError(f"argument must be finite and >= 0, got {x!r}", field="x")
    n = int(n)
    x = float(x)
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x <= max(SERIES_X_MAX, 0.5 * n):
        return _bessel_series(n, x)
    return float(_kernels.bessel_jn_orders(n, x, _miller_start(n, x))[n])


def bessel_j_orders(nmax: int, x: float) -> np.ndarray:
    """Array ``[J_0(x), ..., J_nmax(x)]`` from one backward recurrence."""
    if nmax < 0:
        raise ConfigurationError("nmax must be >= 0", field="nmax")
    if not (x >= 0.0 and math.isfinite(x)):
        raise ConfigurationError(f"argument must be finite and >= 0, got {x!r}", field="x")
    return _kernels.bessel_jn_orders(int(nmax), float(x), _miller_start(int(nmax), float(x)))


def bessel_j_signed(n: int, x: float) -> float:
    """J_n(x) for any integer n, using J_{-n} = (-1)^n J_n."""
    value = bessel_j(abs(n), x)
    return -value if (n < 0 and n % 2) else value


def default_n_max(alpha: float) -> int:
    """Truncation order: past n ~ alpha plus the Airy transition width."""
    if alpha == 0.0:
        return 0
    return math.ceil(alpha + 10.0 + 5.0 * alpha ** (1.0 / 3.0))


@dataclass(frozen=True)
class SidebandLine:
    n: int
    offset: float
    amplitude: float
    power: float


@dataclass(frozen=True)
class SidebandSpectrum:
    carrier_freq: float
    orbital_freq: float
    alpha: float
    lines: tuple[SidebandLine, ...]

    @property
    def n_max(self) -> int:
        return max(abs(line.n) for line in self.lines)

    def total_power(self) -> float:
        return math.fsum(line.power for line in self.lines)

    def line(self, n: int) -> SidebandLine:
        return self.lines[n + self.n_max]

    def peak_line(self) -> SidebandLine:
        """Line of largest power with n >= 0 (ties go to the lowest n)."""
        return max((ln for ln in self.lines if ln.n >= 0), key=lambda ln: (ln.power, -ln.n))

    def to_rows(self) -> list[dict]:
        return [
            {"n": ln.n, "offset_hz": ln.offset, "amplitude": ln.amplitude, "power": ln.power}
            for ln in self.lines
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "offset_hz", "amplitude", "power"])
        for ln in self.lines:
            writer.writerow([ln.n, repr(ln.offset), repr(ln.amplitude), repr(ln.power)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "carrier_freq": self.carrier_freq,
            "orbital_freq": self.orbital_freq,
            "n_max": self.n_max,
            "lines": self.to_rows(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> SidebandSpectrum:
        lines = tuple(
            SidebandLine(int(r["n"]), float(r["offset_hz"]), float(r["amplitude"]), float(r["power"]))
            for r in data["lines"]
        )
        return cls(float(data["carrier_freq"]), float(data["orbital_freq"]), float(data["alpha"]), lines)


def jacobi_anger_spectrum(alpha, orbital_freq, carrier_freq, n_max=None) -> SidebandSpectrum:
    """Predicted line spectrum for modulation index ``alpha``.

    Lines run over n in [-n_max, n_max]; ``n_max`` defaults to
    :func:`default_n_max`.  Offsets are ``n * orbital_freq`` from the carrier.
    """
    if not (alpha >= 0.0 and math.isfinite(alpha)):
        raise ConfigurationError(f"alpha must be finite and >= 0, got {alpha!r}", field="alpha")
    if not orbital_freq > 0.0:
        raise ConfigurationError("orbital_freq must be > 0", field="orbital_freq")
    if not carrier_freq > 0.0:
        raise ConfigurationError("carrier_freq must be > 0", field="carrier_freq")
    if n_max is None:
        n_max = default_n_max(alpha)
    if n_max < 0:
        raise ConfigurationError("n_max must be >= 0", field="n_max")
    j = bessel_j_orders(n_max, alpha)
    lines = []
    for n in range(-n_max, n_max + 1):
        k = abs(n)
        jn = j[k] if (n >= 0 or k % 2 == 0) else -j[k]
        amp = -jn if n % 2 else jn
        lines.append(SidebandLine(n, n * orbital_freq, float(amp), float(j[k] * j[k])))
    return SidebandSpectrum(float(carrier_freq), float(orbital_freq), float(alpha), tuple(lines))


def multiplet_energies(transition, elements, n_list) -> list[float]:
    """Transition energies of the multiplet: the shifted gap plus n hbar Omega."""
    from gravab.clock import redshifted_transition_energy

    delta_e, _ = redshifted_transition_energy(transition, elements)
    step = HBAR * elements.omega
    return [delta_e + int(n) * step for n in n_list]


def significant_band(alpha, epsilon) -> int:
    """Smallest n* with J_0^2 + 2 sum_{1..n*} J_n^2 >= 1 - epsilon."""
    if not alpha >= 0.0:
        raise ConfigurationError("alpha must be >= 0", field="alpha")
    if not 0.0 < epsilon < 1.0:
        raise ConfigurationError("epsilon must lie in (0, 1)", field="epsilon")
    if alpha == 0.0:
        return 0
    nmax = default_n_max(alpha)
    while True:
        j = bessel_j_orders(nmax, alpha)
        p = j * j
        p[1:] *= 2.0
        cum = np.cumsum(p)
        hit = np.flatnonzero(cum >= 1.0 - epsilon)
        if hit.size:
            return int(hit[0])
        nmax *= 2


class Regime(str, enum.Enum):
    NO_SIDEBANDS = "no_sidebands"
    SINGLE_TONE = "single_tone"
    OVER_MODULATED = "over_modulated"
    DEEP_MODULATION = "deep_modulation"


#: regime boundaries on alpha; conventions of this package, not physical thresholds
SINGLE_TONE_MAX = 0.2
OVER_MODULATED_MAX = 20.0


def regime_classify(alpha) -> Regime:
    if not alpha >= 0.0:
        raise ConfigurationError("alpha must be >= 0", field="alpha")
    if alpha == 0.0:
        return Regime.NO_SIDEBANDS
    if alpha <= SINGLE_TONE_MAX:
        return Regime.SINGLE_TONE
    if alpha <= OVER_MODULATED_MAX:
        return Regime.OVER_MODULATED
    return Regime.DEEP_MODULATION

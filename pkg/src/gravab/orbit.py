"""Eccentric two-body orbit, radial motion only.

Time is measured from perigee.  Two radius models are provided:

``exact``
    Kepler's equation is solved for the eccentric anomaly and
    ``r = a (1 - e cos E)``.
``paper``
    The inverse radius is a single cosine in time,
    ``1/r = 1/r0 + (A/r0**2) cos(Omega t)``.

The cosine model is exact in true anomaly but not in time; it differs from
the Kepler solution at relative order ``e**2``.

``A`` and ``e`` are always derived from the apsides; for Galileo
(r_p = 23 445 km, r_a = 32 510 km) that gives A = 4532.5 km and e = 0.162.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gravab import _kernels
from gravab.constants import MU_EARTH
from gravab.errors import ConfigurationError, NumericalError

TWO_PI = 2.0 * math.pi

MODELS = ("exact", "paper")


@dataclass(frozen=True)
class OrbitalElements:
    """Apsides and gravitational parameter of one Keplerian orbit.

    Everything else (``r0``, ``A``, ``e``, ``a``, ``period``, ``omega``) is
    derived.  ``period_override`` replaces the third-law period when given.
    """

    r_perigee: float
    r_apogee: float
    mu: float = MU_EARTH
    period_override: float | None = None

    def __post_init__(self):
        for name in ("r_perigee", "r_apogee", "mu"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ConfigurationError(f"{name} must be finite and > 0, got {value!r}", field=name)
        if self.r_apogee < self.r_perigee:
            raise ConfigurationError(
                f"r_apogee ({self.r_apogee!r}) is below r_perigee ({self.r_perigee!r})",
                field="r_apogee",
            )
        if self.period_override is not None and not (
            math.isfinite(self.period_override) and self.period_override > 0.0
        ):
            raise ConfigurationError(
                f"period_override must be > 0, got {self.period_override!r}", field="period_override"
            )

    @property
    def r0(self) -> float:
        """Mean of the apsides, equal to the semi-major axis."""
        return 0.5 * (self.r_apogee + self.r_perigee)

    @property
    def A(self) -> float:
        return 0.5 * (self.r_apogee - self.r_perigee)

    @property
    def e(self) -> float:
        return (self.r_apogee - self.r_perigee) / (self.r_apogee + self.r_perigee)

    @property
    def a(self) -> float:
        return self.r0

    @property
    def kepler_period(self) -> float:
        return TWO_PI * math.sqrt(self.a**3 / self.mu)

    @property
    def period(self) -> float:
        if self.period_override is not None:
            return float(self.period_override)
        return self.kepler_period

    @property
    def omega(self) -> float:
        return TWO_PI / self.period

    @property
    def orbital_freq(self) -> float:
        return 1.0 / self.period

    def with_kepler_period(self) -> OrbitalElements:
        return OrbitalElements(self.r_perigee, self.r_apogee, self.mu)

    def to_dict(self) -> dict:
        return {
            "r_perigee_m": self.r_perigee,
            "r_apogee_m": self.r_apogee,
            "mu_m3_per_s2": self.mu,
            "period_override_s": self.period_override,
            "r0_m": self.r0,
            "A_m": self.A,
            "e": self.e,
            "a_m": self.a,
            "period_s": self.period,
            "kepler_period_s": self.kepler_period,
            "omega_rad_per_s": self.omega,
        }


def from_apsides(r_p, r_a, mu=MU_EARTH, period_override=None) -> OrbitalElements:
    return OrbitalElements(float(r_p), float(r_a), float(mu),
                           None if period_override is None else float(period_override))


def _check_eccentricity(e):
    if not (0.0 <= e < 1.0):
        raise ConfigurationError(f"eccentricity must satisfy 0 <= e < 1, got {e!r}", field="e")


def _solve_reduced(m_reduced, e):
    try:
        return _kernels.kepler_solve(m_reduced, e)
    except _kernels.KeplerConvergenceError as exc:
        raise NumericalError(str(exc), residual=exc.residual) from exc


def solve_kepler_equation(M, e):
    """Eccentric anomaly E with E - e sin E = M.

    ``M`` may be a scalar or an array and is reduced mod 2*pi internally;
    the returned E lies on the same branch as ``M`` (E - M is periodic).

    Raises NumericalError if neither Newton nor the bisection fallback
    reaches a residual of 1e-12 rad.
    """
    _check_eccentricity(e)
    m = np.asarray(M, dtype=np.float64)
    if not np.all(np.isfinite(m)):
        raise ConfigurationError("mean anomaly must be finite", field="M")
    turns = np.floor(m / TWO_PI)
    m_red = m - turns * TWO_PI
    # floor can leave m_red == 2*pi after rounding
    m_red = np.where(m_red >= TWO_PI, m_red - TWO_PI, m_red)
    big_e = _solve_reduced(np.atleast_1d(m_red).ravel(), float(e)).reshape(m.shape)
    big_e = big_e + (m - m_red)
    return float(big_e) if big_e.ndim == 0 else big_e


def mean_anomaly(elements: OrbitalElements, t):
    """Reduced mean anomaly 2*pi*frac(t/T) in [0, 2*pi).

    Working with the period fraction keeps t = T/2 mapping to exactly pi.
    """
    frac = np.mod(np.asarray(t, dtype=np.float64) / elements.period, 1.0)
    return TWO_PI * frac


def _as_output(values, t):
    return float(values) if np.ndim(t) == 0 else values


def radius_exact(elements: OrbitalElements, t):
    m = mean_anomaly(elements, t)
    big_e = _solve_reduced(np.atleast_1d(m).ravel(), elements.e).reshape(np.shape(m))
    r = elements.a * (1.0 - elements.e * np.cos(big_e))
    return _as_output(r, t)


def radius_paper_model(elements: OrbitalElements, t):
    m = mean_anomaly(elements, t)
    r = elements.r0 / (1.0 + elements.e * np.cos(m))
    return _as_output(r, t)


def radius(elements: OrbitalElements, t, model="exact"):
    if model == "exact":
        return radius_exact(elements, t)
    if model == "paper":
        return radius_paper_model(elements, t)
    raise ConfigurationError(f"model must be one of {MODELS}, got {model!r}", field="model")


def simpson(values, h):
    """Composite Simpson rule over equally spaced samples (odd count)."""
    y = np.asarray(values, dtype=np.float64)
    n = y.shape[0] - 1
    if n < 2 or n % 2:
        raise ConfigurationError(f"Simpson needs an even number of intervals, got {n}", field="n_steps")
    return h / 3.0 * (y[0] + y[-1] + 4.0 * math.fsum(y[1:-1:2]) + 2.0 * math.fsum(y[2:-1:2]))


def time_average_inverse_radius(elements: OrbitalElements, model="exact", n_quad=1 << 14):
    """Average of 1/r(t) over one period by composite Simpson quadrature."""
    if n_quad < 64 or n_quad % 2:
        raise ConfigurationError(f"n_quad must be even and >= 64, got {n_quad}", field="n_quad")
    T = elements.period
    t = np.linspace(0.0, T, n_quad + 1)
    inv_r = 1.0 / radius(elements, t, model)
    return simpson(inv_r, T / n_quad) / T


def sample_orbit(elements: OrbitalElements, n_samples=256):
    """Tabulate r(t) for both models over one period, endpoints included."""
    if n_samples < 2:
        raise ConfigurationError("n_samples must be >= 2", field="n_samples")
    t = np.linspace(0.0, elements.period, n_samples)
    return t, radius_exact(elements, t), radius_paper_model(elements, t)

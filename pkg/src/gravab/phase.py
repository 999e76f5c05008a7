"""Gravitational potential along the orbit and the accumulated AB phases.

A level of mass ``m`` accumulates ``(m / hbar) * integral(Phi dt)``.  The
relative phase of the excited and ground levels (the mixing angle) depends
only on the mass difference ``delta_m = h f / c**2``, so it is always
computed from ``delta_m`` directly.  Forming it as the difference of the two
absolute phases would cancel ~15 significant digits.

Sign convention: integrating the (negative) potential gives a negative
secular drift and an oscillatory part ``-alpha sin(Omega t)``.  This is the
default.  ``printed_sign=True`` flips the oscillatory part to
``+alpha sin(Omega t)``, the form usually quoted; observable powers
``J_n(alpha)**2`` do not depend on the choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gravab import _kernels
from gravab.constants import C, HBAR
from gravab.errors import ConfigurationError, NumericalError
from gravab.orbit import MODELS, OrbitalElements, mean_anomaly, radius_exact, simpson

#: Simpson steps per orbit used when n_steps is not given
STEPS_PER_ORBIT = 10_000


def potential_paper(elements: OrbitalElements, t):
    """Specific potential -(mu/r0)(1 + e cos(Omega t)), in m^2/s^2."""
    m = mean_anomaly(elements, t)
    phi = -(elements.mu / elements.r0) * (1.0 + elements.e * np.cos(m))
    return float(phi) if np.ndim(t) == 0 else phi


def potential_exact(elements: OrbitalElements, t):
    """Specific potential -mu / r(t) on the Kepler orbit."""
    r = radius_exact(elements, t)
    return -elements.mu / r


def potential(elements: OrbitalElements, t, model="paper"):
    if model == "paper":
        return potential_paper(elements, t)
    if model == "exact":
        return potential_exact(elements, t)
    raise ConfigurationError(f"model must be one of {MODELS}, got {model!r}", field="model")


def _default_steps(elements, span):
    n = math.ceil(STEPS_PER_ORBIT * abs(span) / elements.period)
    return max(2, n + (n % 2))


def potential_integral(elements: OrbitalElements, t, model="paper", n_steps=None, t0=0.0):
    """Integral of the potential from t0 to t by composite Simpson."""
    span = t - t0
    if n_steps is None:
        n_steps = _default_steps(elements, span)
    if int(n_steps) != n_steps or n_steps < 2 or n_steps % 2:
        raise ConfigurationError(f"n_steps must be an even integer >= 2, got {n_steps!r}", field="n_steps")
    if span == 0.0:
        return 0.0
    n_steps = int(n_steps)
    grid = t0 + span * (np.arange(n_steps + 1) / n_steps)
    return simpson(potential(elements, grid, model), span / n_steps)


def potential_integral_paper_closed(elements: OrbitalElements, t, t0=0.0):
    """Closed form of the cosine-model potential integral from t0 to t."""
    w = elements.omega
    osc = (elements.e / w) * (math.sin(float(mean_anomaly(elements, t))) - math.sin(float(mean_anomaly(elements, t0))))
    return -(elements.mu / elements.r0) * ((t - t0) + osc)


def ab_phase(mass, elements: OrbitalElements, t, model="paper", n_steps=None, t0=0.0):
    """AB phase (mass/hbar) * integral(Phi dt) accumulated from t0 to t, in rad."""
    if not mass > 0.0:
        raise ConfigurationError(f"mass must be > 0, got {mass!r}", field="mass")
    if t < t0:
        raise ConfigurationError("t must not precede t0", field="t")
    return (mass / HBAR) * potential_integral(elements, t, model, n_steps, t0)


def ab_phase_paper_closed(mass, elements: OrbitalElements, t, t0=0.0):
    return (mass / HBAR) * potential_integral_paper_closed(elements, t, t0)


def modulation_index(transition, elements: OrbitalElements) -> float:
    """Dimensionless modulation depth alpha = e (mu/(r0 c^2)) (2 pi f / Omega), >= 0."""
    return elements.e * (elements.mu / (elements.r0 * C * C)) * (2.0 * math.pi * transition.f_ph0 / elements.omega)


def secular_rate(transition, elements: OrbitalElements) -> float:
    """d/dt of the secular mixing angle, -(Delta E0 mu / (hbar r0 c^2)), rad/s."""
    return -(transition.delta_E0 * elements.mu) / (HBAR * elements.r0 * C * C)


@dataclass(frozen=True)
class PhaseRecord:
    """Phases at time t (rad).

    ``phi_g`` and ``phi_g_star`` are the absolute phases of the ground and
    excited levels.  The mixing angle is ``mixing_secular +
    mixing_oscillatory``; use :attr:`mixing` rather than subtracting the
    absolute phases.
    """

    t: float
    phi_g: float
    phi_g_star: float
    mixing_secular: float
    mixing_oscillatory: float
    alpha: float

    @property
    def mixing(self) -> float:
        return self.mixing_secular + self.mixing_oscillatory


def mixing_angle(transition, elements: OrbitalElements, t, printed_sign=False) -> PhaseRecord:
    """Mixing angle on the cosine-potential orbit, split into its two parts."""
    alpha = modulation_index(transition, elements)
    s = math.sin(float(mean_anomaly(elements, t)))
    osc = alpha * s if printed_sign else -alpha * s
    return PhaseRecord(
        t=float(t),
        phi_g=ab_phase_paper_closed(transition.m_e, elements, t),
        phi_g_star=ab_phase_paper_closed(transition.m_e_star, elements, t),
        mixing_secular=secular_rate(transition, elements) * t,
        mixing_oscillatory=osc,
        alpha=alpha,
    )


def mixing_phase_numeric(transition, elements: OrbitalElements, t, model="paper", n_steps=None, t0=0.0):
    """Mixing angle from t0 to t by quadrature of delta_m * Phi / hbar."""
    return ab_phase(transition.delta_m, elements, t, model, n_steps, t0)


def midpoint_mixing_phase(transition, elements: OrbitalElements, t0, h, n, model="paper"):
    """Mixing angle over n midpoint steps of width h starting at t0."""
    try:
        total = _kernels.potential_midpoint_sum(
            float(t0), float(h), int(n), elements.mu, elements.r0, elements.e, elements.period, model == "exact"
        )
    except _kernels.KeplerConvergenceError as exc:
        raise NumericalError(str(exc), residual=exc.residual) from exc
    return (transition.delta_m / HBAR) * h * total

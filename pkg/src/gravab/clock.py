"""Two-level atomic clock in the orbital potential.

The Hamiltonian is diagonal: each level's energy is shifted by its own mass
times the potential, the excited level being heavier by ``h f / c**2``.
States are propagated in the rotating frame, where the ground amplitude is
constant and the excited amplitude picks up ``exp(-i * mixing_angle)``.  The
fast carrier phase ``Delta E0 t / hbar`` is never formed numerically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from gravab.constants import C, H, M_E
from gravab.errors import ConfigurationError
from gravab.orbit import OrbitalElements
from gravab import phase as _phase

NORM_TOL = 1e-12


@dataclass(frozen=True)
class ClockTransition:
    """Hyperfine (or optical) clock transition at frequency ``f_ph0`` in zero potential."""

    f_ph0: float
    E_i0: float = 0.0
    m_e: float = M_E

    def __post_init__(self):
        if not (math.isfinite(self.f_ph0) and self.f_ph0 > 0.0):
            raise ConfigurationError(f"f_ph0 must be > 0, got {self.f_ph0!r}", field="f_ph0")
        if not self.m_e > 0.0:
            raise ConfigurationError("m_e must be > 0", field="m_e")

    @property
    def delta_E0(self) -> float:
        return H * self.f_ph0

    @property
    def E_f0(self) -> float:
        return self.E_i0 + self.delta_E0

    @property
    def delta_m(self) -> float:
        return self.delta_E0 / (C * C)

    @property
    def m_e_star(self) -> float:
        return self.m_e + self.delta_m


@dataclass(frozen=True)
class TwoLevelState:
    c_i: complex
    c_f: complex

    def __post_init__(self):
        norm = abs(self.c_i) ** 2 + abs(self.c_f) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ConfigurationError(f"state is not normalized (|c_i|^2+|c_f|^2 = {norm!r})", field="state")

    @classmethod
    def superposition(cls) -> TwoLevelState:
        """Equal superposition, the default starting point of a clock interrogation."""
        s = 1.0 / math.sqrt(2.0)
        return cls(complex(s), complex(s))

    @property
    def norm(self) -> float:
        return abs(self.c_i) ** 2 + abs(self.c_f) ** 2

    @property
    def relative_phase(self) -> float:
        """arg(c_f / c_i) in (-pi, pi]."""
        return cmath.phase(self.c_f / self.c_i)

    def with_excited_phase(self, angle: float) -> TwoLevelState:
        """Multiply c_f by exp(-i angle)."""
        return TwoLevelState(self.c_i, self.c_f * cmath.exp(-1j * math.fmod(angle, 2.0 * math.pi)))


def level_energies(transition: ClockTransition, elements: OrbitalElements, t, model="paper"):
    """(E_i, E_f) in J: the zero-potential energies plus mass times potential."""
    phi = _phase.potential(elements, t, model)
    return transition.E_i0 + transition.m_e * phi, transition.E_f0 + transition.m_e_star * phi


def propagate_analytic(state0: TwoLevelState, transition: ClockTransition, elements: OrbitalElements,
                       t, model="paper", t0=0.0, n_steps=None) -> TwoLevelState:
    """Rotating-frame state at t, starting from ``state0`` at t0.

    The cosine potential uses the closed-form mixing angle; the Kepler
    potential integrates it by Simpson quadrature (``n_steps``).
    """
    if model not in ("paper", "exact"):
        raise ConfigurationError(f"unknown model {model!r}", field="model")
    angle = analytic_mixing_angle(transition, elements, t, model, t0, n_steps)
    return state0.with_excited_phase(angle)


def _oscillatory_paper(transition, elements, t):
    return _phase.mixing_angle(transition, elements, t).mixing_oscillatory


def analytic_mixing_angle(transition, elements, t, model="paper", t0=0.0, n_steps=None) -> float:
    """Unwrapped rotating-frame relative phase accumulated from t0 to t."""
    if model == "paper":
        return (_phase.secular_rate(transition, elements) * (t - t0)
                + _oscillatory_paper(transition, elements, t)
                - _oscillatory_paper(transition, elements, t0))
    return _phase.mixing_phase_numeric(transition, elements, t, model, n_steps, t0)


def numerical_mixing_angle(transition, elements, t, model="paper", dt=None, t0=0.0) -> float:
    """Unwrapped relative phase from midpoint stepping with step <= dt."""
    span = t - t0
    if dt is None:
        dt = elements.period / 1e6
    if not (dt > 0.0 and dt <= elements.period / 1e3 * (1 + 1e-12)):
        raise ConfigurationError(f"dt must satisfy 0 < dt <= T/1000, got {dt!r}", field="dt")
    if span < 0.0:
        raise ConfigurationError("t must not precede t0", field="t")
    if span == 0.0:
        return 0.0
    n = max(1, math.ceil(span / dt - 1e-9))
    return _phase.midpoint_mixing_phase(transition, elements, t0, span / n, n, model)


def propagate_numerical(state0: TwoLevelState, transition: ClockTransition, elements: OrbitalElements,
                        t, model="paper", dt=None, t0=0.0) -> TwoLevelState:
    """Step-wise rotating-frame propagation using the midpoint potential.

    Each step multiplies c_f by ``exp(-i (delta_m / hbar) Phi(t_mid) h)``;
    the phases are accumulated with compensated summation and applied once,
    which is the same product.  The step is ``dt`` shrunk so that it
    divides ``t - t0`` evenly.
    """
    return state0.with_excited_phase(numerical_mixing_angle(transition, elements, t, model, dt, t0))


def redshifted_transition_energy(transition: ClockTransition, elements: OrbitalElements):
    """(Delta E, fractional shift) of the n = 0 line.

    ``Delta E = Delta E0 (1 + mu/(r0 c^2))``, relative to the transition at
    zero potential.  Comparison with a ground clock is in
    :func:`gravab.missions.ground_relative_shift`.
    """
    frac = elements.mu / (elements.r0 * C * C)
    return transition.delta_E0 * (1.0 + frac), frac


def redshifted_transition_frequency(transition: ClockTransition, elements: OrbitalElements) -> float:
    """Frequency of the n = 0 line, Delta E / h."""
    delta_e, _ = redshifted_transition_energy(transition, elements)
    return delta_e / H

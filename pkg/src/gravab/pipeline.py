"""Run configuration and the orbit -> alpha -> spectrum -> synthesis -> estimate pipeline.

Every number in a report comes from a library call; this module only wires
stages together and records their inputs.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass

from gravab import constants
from gravab.clock import (
    ClockTransition,
    analytic_mixing_angle,
    numerical_mixing_angle,
    redshifted_transition_energy,
    redshifted_transition_frequency,
)
from gravab.errors import ConfigurationError, GravABError, PipelineError
from gravab.missions import ClockSpec, get_preset, ground_relative_shift
from gravab.orbit import MODELS, OrbitalElements, from_apsides, time_average_inverse_radius
from gravab.phase import modulation_index
from gravab.spectrum import default_n_max, jacobi_anger_spectrum, regime_classify, significant_band
from gravab.synthesis import (
    NYQUIST_EPSILON,
    add_white_noise,
    dft,
    estimate_modulation_index,
    extract_sideband_amplitudes,
    nyquist_requirements,
    synthesize_beat,
)

REPORT_SCHEMA = "gravab-report-1"
#: alpha values differing by more than this (relative) are both reported
KEPLER_ALPHA_REPORT_THRESHOLD = 0.01
#: predicted lines weaker than this are left out of the comparison table
COMPARISON_MIN_AMPLITUDE = 1e-2


@dataclass
class RunConfig:
    """One pipeline run.

    Exactly one of ``preset`` and ``elements`` is set.  ``elements`` is a
    dict with ``r_perigee``, ``r_apogee`` and optionally ``mu`` and
    ``period_override``; ``clock_freq`` then gives the transition frequency.
    Synthesis fields left as None are chosen automatically.
    """

    preset: str | None = "iss"
    elements: dict | None = None
    clock: str | None = None
    clock_freq: float | None = None
    model: str = "paper"
    kepler_period: bool = False
    r_ground: float = constants.R_EARTH_MEAN
    n_max: int | None = None
    sample_rate: float | None = None
    n_periods: int = 1
    offset_freq: float = 0.0
    snr_db: float | None = None
    seed: int = 0
    alpha_bracket: list | None = None
    out: str | None = None
    format: str = "json"

    def validate(self) -> None:
        if (self.preset is None) == (self.elements is None):
            raise ConfigurationError("exactly one of 'preset' and 'elements' must be given", field="preset")
        if self.elements is not None and self.clock_freq is None:
            raise ConfigurationError("explicit elements need 'clock_freq'", field="clock_freq")
        if self.model not in MODELS:
            raise ConfigurationError(f"model must be one of {MODELS}, got {self.model!r}", field="model")
        if self.format not in ("json", "csv"):
            raise ConfigurationError("format must be 'json' or 'csv'", field="format")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ConfigurationError("seed must be an unsigned 64-bit integer", field="seed")
        if int(self.n_periods) != self.n_periods or self.n_periods < 1:
            raise ConfigurationError("n_periods must be a positive integer", field="n_periods")
        if self.alpha_bracket is not None and len(self.alpha_bracket) != 2:
            raise ConfigurationError("alpha_bracket must be [lo, hi]", field="alpha_bracket")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}", field=sorted(unknown)[0])
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config is not valid JSON: {exc}", field="config") from exc
        if not isinstance(data, dict):
            raise ConfigurationError("config must be a JSON object", field="config")
        return cls.from_dict(data)


def resolve(config: RunConfig) -> tuple[OrbitalElements, ClockSpec]:
    """Orbital elements and clock selected by a config."""
    config.validate()
    if config.preset is not None:
        preset = get_preset(config.preset)
        elements = preset.elements
        clock = preset.clock(config.clock)
    else:
        el = config.elements
        try:
            elements = from_apsides(
                el["r_perigee"], el["r_apogee"], el.get("mu", constants.MU_EARTH), el.get("period_override")
            )
        except KeyError as exc:
            raise ConfigurationError(f"elements missing {exc.args[0]!r}", field=exc.args[0]) from exc
        clock = ClockSpec(config.clock or "clock", float(config.clock_freq))
    if config.kepler_period:
        elements = elements.with_kepler_period()
    return elements, clock


def auto_synthesis(alpha, orbital_freq, offset_freq=0.0, n_periods=1):
    """Smallest power-of-two sample rate (in units of orbital_freq) clearing Nyquist."""
    band = significant_band(alpha, NYQUIST_EPSILON) if alpha > 0 else 0
    need = 2.0 * (offset_freq / orbital_freq + band) + 1.0
    per_period = 1 << max(4, math.ceil(math.log2(need)))
    if per_period <= need:
        per_period *= 2
    return per_period * orbital_freq


def modulation_summary(transition, elements) -> dict:
    """alpha and alpha per Hz; with a pinned period, also the third-law alpha if it differs by > 1%."""
    alpha = modulation_index(transition, elements)
    block = {"alpha": alpha, "alpha_per_hz": alpha / transition.f_ph0}
    if elements.period_override is not None:
        alpha_k = modulation_index(transition, elements.with_kepler_period())
        if abs(alpha_k - alpha) > KEPLER_ALPHA_REPORT_THRESHOLD * max(alpha, 1e-300):
            block["alpha_kepler_period"] = alpha_k
            block["kepler_period_s"] = elements.kepler_period
    return block


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except GravABError as exc:
        raise PipelineError(name, exc) from exc


def run_pipeline(config: RunConfig) -> dict:
    """Full report as a JSON-ready dict; deterministic for a given config and seed."""
    elements, clock = _stage("config", resolve, config)
    transition = _stage("clock", ClockTransition, clock.f_ph0)
    alpha = _stage("alpha", modulation_index, transition, elements)
    f_orb = elements.orbital_freq

    alpha_block = modulation_summary(transition, elements)

    delta_e, frac = redshifted_transition_energy(transition, elements)
    carrier = redshifted_transition_frequency(transition, elements)
    spec = _stage("spectrum", jacobi_anger_spectrum, alpha, f_orb, carrier, config.n_max)
    peak = spec.peak_line()
    nyq = _stage("nyquist", nyquist_requirements, alpha, f_orb)

    inv_r = _stage("orbit", time_average_inverse_radius, elements, config.model)
    t_check = elements.period
    phase_check = {
        "model": config.model,
        "t_s": t_check,
        "dt_s": t_check / 1e6,
        "analytic_rad": _stage("phase", analytic_mixing_angle, transition, elements, t_check, config.model),
        "numerical_rad": _stage(
            "phase", numerical_mixing_angle, transition, elements, t_check, config.model, t_check / 1e6
        ),
    }
    phase_check["difference_rad"] = phase_check["numerical_rad"] - phase_check["analytic_rad"]

    report = {
        "schema": REPORT_SCHEMA,
        "constants": constants.table(),
        "config": config.to_dict(),
        "elements": elements.to_dict(),
        "clock": {"label": clock.label, "f_ph0_hz": clock.f_ph0},
        "modulation": alpha_block,
        "regime": regime_classify(alpha).value,
        "redshift": {
            "delta_E_J": delta_e,
            "fractional_shift_zero_potential": frac,
            "ground_relative_shift": ground_relative_shift(elements, config.r_ground),
            "r_ground_m": config.r_ground,
        },
        "mean_inverse_radius_per_m": inv_r,
        "truncation": {
            "n_max": spec.n_max,
            "default_rule": "ceil(alpha + 10 + 5 alpha^(1/3))",
            "default_n_max": default_n_max(alpha),
            "nyquist_epsilon": NYQUIST_EPSILON,
        },
        "spectrum": {
            "carrier_freq_hz": spec.carrier_freq,
            "orbital_freq_hz": spec.orbital_freq,
            "total_power": spec.total_power(),
            "peak_line": {"n": peak.n, "offset_hz": peak.offset, "power": peak.power},
            "lines": spec.to_rows(),
        },
        "nyquist": nyq.to_dict(),
        "phase_check": phase_check,
    }

    if alpha == 0.0:
        report["synthesis"] = None
        report["estimation"] = {"skipped": True, "reason": "alpha = 0: no sidebands, nothing to fit"}
        report["comparison"] = []
        return report

    offset = float(config.offset_freq)
    rate = config.sample_rate or auto_synthesis(alpha, f_orb, offset, config.n_periods)
    series = _stage("synthesis", synthesize_beat, alpha, f_orb, offset, rate, config.n_periods)
    if config.snr_db is not None:
        series = add_white_noise(series, config.snr_db, config.seed)
    dspec = _stage("dft", dft, series)
    band = significant_band(alpha, NYQUIST_EPSILON)
    measured = _stage("extract", extract_sideband_amplitudes, dspec, offset, f_orb, range(-band, band + 1))
    bracket = config.alpha_bracket or [0.5 * alpha, 1.5 * alpha + 0.5]
    est = _stage("estimate", estimate_modulation_index, measured, bracket)

    report["synthesis"] = {
        "sample_rate_hz": rate,
        "n_periods": config.n_periods,
        "offset_freq_hz": offset,
        "n_samples": len(series),
        "snr_db": config.snr_db,
        "seed": config.seed,
        "generator": "numpy PCG64",
        "dft_normalization": "unitary (1/sqrt(N))",
    }
    report["estimation"] = dict(est.to_dict(config.seed), skipped=False, alpha_bracket=list(bracket))
    comparison = []
    for n, m in measured:
        pred = abs(spec.line(n).amplitude) if abs(n) <= spec.n_max else 0.0
        if pred > COMPARISON_MIN_AMPLITUDE:
            comparison.append({"n": n, "predicted": pred, "measured": m, "abs_error": abs(m - pred)})
    report["comparison"] = comparison
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"

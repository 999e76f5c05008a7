"""Command-line interface.

Settings are resolved as: built-in defaults, then ``--config`` (a JSON
RunConfig document), then explicit flags.  Exit codes: 0 success,
2 configuration error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from gravab import __version__
from gravab.clock import ClockTransition, redshifted_transition_frequency
from gravab.errors import ConfigurationError, GravABError, NumericalError, PipelineError
from gravab.missions import builtin_presets, get_preset
from gravab.orbit import sample_orbit
from gravab.phase import potential_exact, potential_paper
from gravab.pipeline import (
    RunConfig,
    auto_synthesis,
    modulation_summary,
    report_json,
    resolve,
    run_pipeline,
)
from gravab.spectrum import jacobi_anger_spectrum, regime_classify, significant_band
from gravab.synthesis import (
    NYQUIST_EPSILON,
    TimeSeries,
    add_white_noise,
    dft,
    estimate_modulation_index,
    estimation_report_json,
    extract_sideband_amplitudes,
    synthesize_beat,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

DEFAULT_FORMAT = {"orbit": "csv", "spectrum": "csv", "synth": "csv"}

# flag dests copied onto RunConfig fields
_FLAG_FIELDS = (
    "preset", "clock", "model", "out", "format", "seed", "kepler_period", "r_ground",
    "n_max", "sample_rate", "n_periods", "offset_freq", "snr_db", "clock_freq",
)


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    d = argparse.SUPPRESS
    p.add_argument("--preset", default=d, help="mission preset (iss, galileo)")
    p.add_argument("--clock", default=d, help="clock label within the preset")
    p.add_argument("--model", choices=("exact", "paper"), default=d, help="radius/potential model")
    p.add_argument("--config", default=None, help="JSON run configuration")
    p.add_argument("--out", default=d, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=d)
    p.add_argument("--seed", type=int, default=d, help="noise seed (unsigned 64-bit)")
    p.add_argument("--kepler-period", dest="kepler_period", action="store_true", default=d,
                   help="use the third-law period even if the preset pins one")
    p.add_argument("--r-ground", dest="r_ground", type=float, default=d, help="ground clock radius, m")
    p.add_argument("--n-max", dest="n_max", type=int, default=d, help="sideband truncation order")
    p.add_argument("--sample-rate", dest="sample_rate", type=float, default=d, help="synthesis rate, Hz")
    p.add_argument("--n-periods", dest="n_periods", type=int, default=d)
    p.add_argument("--offset-freq", dest="offset_freq", type=float, default=d, help="downconverted offset, Hz")
    p.add_argument("--snr-db", dest="snr_db", type=float, default=d, help="add white noise at this SNR")
    p.add_argument("--r-perigee", dest="r_perigee", type=float, default=None)
    p.add_argument("--r-apogee", dest="r_apogee", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--period-override", dest="period_override", type=float, default=None)
    p.add_argument("--clock-freq", dest="clock_freq", type=float, default=d, help="clock frequency for explicit elements, Hz")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="gravab",
        description="Gravitational AB phase, redshift and sideband spectrum of an orbiting clock.",
    )
    parser.add_argument("--version", action="version", version=f"gravab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("presets", parents=[common], help="list built-in mission presets")
    orbit = sub.add_parser("orbit", parents=[common], help="r(t) table over one orbit (CSV)")
    orbit.add_argument("--n-samples", dest="n_samples", type=int, default=257)
    sub.add_parser("alpha", parents=[common], help="modulation index per clock")
    sub.add_parser("spectrum", parents=[common], help="predicted sideband spectrum")
    sub.add_parser("synth", parents=[common], help="synthesized beat time series (CSV)")
    est = sub.add_parser("estimate", parents=[common], help="estimate alpha from a time series")
    est.add_argument("--input", default=None, help="time-series CSV (t_s,re,im); synthesized if omitted")
    sub.add_parser("pipeline", parents=[common], help="full report")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {args.config!r}: {exc}", field="config") from exc
        from_file = RunConfig.from_json(text)
        data = from_file.to_dict()
        format_given = "format" in json.loads(text)
    else:
        data = RunConfig().to_dict()
        format_given = False
    if not format_given:
        data["format"] = DEFAULT_FORMAT.get(args.command, "json")
    for name in _FLAG_FIELDS:
        if hasattr(args, name):
            data[name] = getattr(args, name)
    if args.r_perigee is not None or args.r_apogee is not None:
        if args.r_perigee is None or args.r_apogee is None:
            raise ConfigurationError("--r-perigee and --r-apogee go together", field="r_perigee")
        elements = {"r_perigee": args.r_perigee, "r_apogee": args.r_apogee}
        if args.mu is not None:
            elements["mu"] = args.mu
        if args.period_override is not None:
            elements["period_override"] = args.period_override
        data["elements"] = elements
        if not hasattr(args, "preset"):
            data["preset"] = None
    config = RunConfig.from_dict(data)
    config.validate()
    return config


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def cmd_presets(config: RunConfig, args) -> str:
    presets = builtin_presets()
    if config.format == "csv":
        rows = [
            (p.name, c.label, c.f_ph0, p.elements.r_perigee, p.elements.r_apogee, p.elements.e, p.elements.period)
            for p in presets for c in p.clocks
        ]
        return _rows_csv(["preset", "clock", "f_ph0_hz", "r_perigee_m", "r_apogee_m", "e", "period_s"], rows)
    return json.dumps([p.to_dict() for p in presets], indent=2, sort_keys=True) + "\n"


def cmd_orbit(config: RunConfig, args) -> str:
    elements, _ = resolve(config)
    t, r_exact, r_paper = sample_orbit(elements, args.n_samples)
    phi_e = potential_exact(elements, t)
    phi_p = potential_paper(elements, t)
    rows = zip(t.tolist(), r_exact.tolist(), r_paper.tolist(), phi_e.tolist(), phi_p.tolist())
    header = ["t_s", "r_exact_m", "r_paper_m", "potential_exact_m2_s2", "potential_paper_m2_s2"]
    if config.format == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    return _rows_csv(header, rows)


def _clock_rows(config: RunConfig):
    elements, clock = resolve(config)
    if config.preset is not None and config.clock is None:
        clocks = get_preset(config.preset).clocks
    else:
        clocks = (clock,)
    return elements, clocks


def cmd_alpha(config: RunConfig, args) -> str:
    elements, clocks = _clock_rows(config)
    out = []
    for c in clocks:
        block = modulation_summary(ClockTransition(c.f_ph0), elements)
        out.append(dict(block, clock=c.label, f_ph0_hz=c.f_ph0, regime=regime_classify(block["alpha"]).value,
                        period_s=elements.period, e=elements.e))
    if config.format == "csv":
        return _rows_csv(["clock", "f_ph0_hz", "alpha", "alpha_per_hz", "regime"],
                         [(o["clock"], o["f_ph0_hz"], o["alpha"], o["alpha_per_hz"], o["regime"]) for o in out])
    return json.dumps(out, indent=2, sort_keys=True) + "\n"


def _spectrum(config: RunConfig):
    elements, clock = resolve(config)
    transition = ClockTransition(clock.f_ph0)
    alpha = modulation_summary(transition, elements)["alpha"]
    carrier = redshifted_transition_frequency(transition, elements)
    return elements, alpha, jacobi_anger_spectrum(alpha, elements.orbital_freq, carrier, config.n_max)


def cmd_spectrum(config: RunConfig, args) -> str:
    _, _, spec = _spectrum(config)
    return spec.to_csv() if config.format == "csv" else spec.to_json()


def _synthesize(config: RunConfig):
    elements, alpha, _ = _spectrum(config)
    f_orb = elements.orbital_freq
    rate = config.sample_rate or auto_synthesis(alpha, f_orb, config.offset_freq, config.n_periods)
    series = synthesize_beat(alpha, f_orb, config.offset_freq, rate, config.n_periods)
    if config.snr_db is not None:
        series = add_white_noise(series, config.snr_db, config.seed)
    return elements, alpha, series


def cmd_synth(config: RunConfig, args) -> str:
    _, _, series = _synthesize(config)
    return series.to_csv()


def cmd_estimate(config: RunConfig, args) -> str:
    if args.input:
        elements, alpha, _ = _spectrum(config)
        try:
            series = TimeSeries.from_csv(Path(args.input).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigurationError(f"cannot read {args.input!r}: {exc}", field="input") from exc
    else:
        elements, alpha, series = _synthesize(config)
    if alpha == 0.0:
        raise ConfigurationError("alpha = 0: no sidebands to estimate from", field="alpha")
    band = significant_band(alpha, NYQUIST_EPSILON)
    measured = extract_sideband_amplitudes(
        dft(series), config.offset_freq, elements.orbital_freq, range(-band, band + 1)
    )
    bracket = config.alpha_bracket or [0.5 * alpha, 1.5 * alpha + 0.5]
    result = estimate_modulation_index(measured, bracket)
    return estimation_report_json(result, config.seed)


def cmd_pipeline(config: RunConfig, args) -> str:
    report = run_pipeline(config)
    if config.format == "csv":
        return _rows_csv(["n", "predicted", "measured", "abs_error"],
                         [(r["n"], r["predicted"], r["measured"], r["abs_error"]) for r in report["comparison"]])
    return report_json(report)


COMMANDS = {
    "presets": cmd_presets,
    "orbit": cmd_orbit,
    "alpha": cmd_alpha,
    "spectrum": cmd_spectrum,
    "synth": cmd_synth,
    "estimate": cmd_estimate,
    "pipeline": cmd_pipeline,
}


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, PipelineError):
        exc = exc.cause
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_CONFIG


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        text = COMMANDS[args.command](config, args)
        _emit(text, config.out)
    except GravABError as exc:
        stage = f" [{exc.stage}]" if isinstance(exc, PipelineError) else ""
        print(f"gravab {args.command}{stage}: error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from gravab.errors import ConfigurationError, EstimationError, SpectrumRangeError
from gravab.spectrum import significant_band
from gravab.synthesis import (
    NYQUIST_EPSILON,
    DiscreteSpectrum,
    EstimationResult,
    TimeSeries,
    add_white_noise,
    dft,
    estimate_modulation_index,
    estimation_report_json,
    extract_sideband_amplitudes,
    golden_section,
    nyquist_requirements,
    synthesize_beat,
)

F_ORB = 1.0


def roundtrip(alpha, snr_db=None, seed=0, rate=None, offset=0.0):
    band = significant_band(alpha, NYQUIST_EPSILON)
    if rate is None:
        rate = 2.0 ** math.ceil(math.log2(2 * (offset + band) + 1))
    series = synthesize_beat(alpha, F_ORB, offset, rate)
    if snr_db is not None:
        series = add_white_noise(series, snr_db, seed)
    measured = extract_sideband_amplitudes(dft(series), offset, F_ORB, range(-band, band + 1))
    return estimate_modulation_index(measured, (0.5 * alpha, 1.5 * alpha + 0.5))


class TestTimeSeries:
    def test_validation(self):
        with pytest.raises(ConfigurationError):
            TimeSeries(0.0, 0.0, np.ones(4, complex))
        with pytest.raises(ConfigurationError):
            TimeSeries(0.0, 1.0, np.ones(1, complex))
        with pytest.raises(ConfigurationError):
            TimeSeries(0.0, 1.0, np.array([1, np.nan], complex))

    def test_csv_round_trip(self):
        s = synthesize_beat(1.3, 1.0, 3.0, 32.0)
        text = s.to_csv()
        assert text.splitlines()[0] == "t_s,re,im"
        back = TimeSeries.from_csv(text)
        assert back.dt == s.dt and back.t0 == s.t0
        np.testing.assert_array_equal(back.samples, s.samples)

    def test_from_csv_rejects_uneven_sampling(self):
        with pytest.raises(ConfigurationError):
            TimeSeries.from_csv("t_s,re,im\n0.0,1.0,0.0\n1.0,1.0,0.0\n3.0,1.0,0.0\n")


class TestSynthesize:
    def test_unit_magnitude(self):
        s = synthesize_beat(23.8, 1.0, 0.0, 128.0)
        np.testing.assert_allclose(np.abs(s.samples), 1.0, rtol=0, atol=1e-15)

    def test_pure_tone(self):
        s = synthesize_beat(0.0, 1.0, 5.0, 16.0, n_periods=2)
        np.testing.assert_allclose(s.samples, np.exp(2j * np.pi * 5.0 * s.times()), atol=1e-13)

    def test_definition(self):
        s = synthesize_beat(3.7, 0.25, 1.5, 16.0, n_periods=3)
        t = s.times()
        ref = np.exp(1j * (2 * np.pi * 1.5 * t + 3.7 * np.sin(2 * np.pi * 0.25 * t)))
        np.testing.assert_allclose(s.samples, ref, atol=1e-12)

    def test_nyquist_violation(self):
        with pytest.raises(ConfigurationError, match="Nyquist") as info:
            synthesize_beat(3.7, 1.0, 0.0, 16.0)
        assert info.value.field == "sample_rate"

    def test_bin_misalignment(self):
        with pytest.raises(ConfigurationError, match="bin width") as info:
            synthesize_beat(1.0, 1.0, 2.5, 32.0)
        assert info.value.field == "offset_freq"

    def test_sample_count_alignment(self):
        with pytest.raises(ConfigurationError):
            synthesize_beat(1.0, 1.0, 0.0, 32.5)

    @pytest.mark.parametrize("kwargs", [
        {"alpha": -1.0}, {"orbital_freq": 0.0}, {"offset_freq": -1.0}, {"n_periods": 0}, {"n_periods": 1.5},
    ])
    def test_bad_arguments(self, kwargs):
        args = {"alpha": 1.0, "orbital_freq": 1.0, "offset_freq": 0.0, "sample_rate": 64.0, "n_periods": 1}
        args.update(kwargs)
        with pytest.raises(ConfigurationError):
            synthesize_beat(**args)


class TestDft:
    def test_constant_series(self):
        spec = dft(TimeSeries(0.0, 1.0, np.ones(16, complex)))
        assert abs(spec.values[0]) == pytest.approx(4.0)
        assert np.all(np.abs(spec.values[1:]) < 1e-14)

    def test_single_tone(self):
        spec = dft(synthesize_beat(0.0, 1.0, 3.0, 16.0))
        mags = np.abs(spec.values)
        assert int(np.argmax(mags)) == 3
        assert np.sum(mags > 1e-12) == 1
        assert spec.line_magnitude(3) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("n", [64, 100, 1024])
    def test_parseval(self, n):
        rng = np.random.default_rng(n)
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        spec = dft(TimeSeries(0.0, 0.1, x))
        assert np.sum(np.abs(spec.values) ** 2) == pytest.approx(np.sum(np.abs(x) ** 2), rel=1e-10)

    def test_matches_numpy(self):
        x = synthesize_beat(2.1, 1.0, 2.0, 64.0).samples
        spec = dft(TimeSeries(0.0, 1 / 64, x))
        np.testing.assert_allclose(spec.values, np.fft.fft(x, norm="ortho"), atol=1e-12)

    def test_direct_fallback_and_limit(self):
        x = np.exp(2j * np.pi * 3 * np.arange(12) / 12)
        spec = dft(TimeSeries(0.0, 1.0, x))
        assert spec.line_magnitude(3) == pytest.approx(1.0, abs=1e-13)
        with pytest.raises(ConfigurationError):
            dft(TimeSeries(0.0, 1.0, np.ones(4097, complex)))

    def test_alpha_one_bins(self):
        spec = dft(synthesize_beat(1.0, 1.0, 0.0, 32.0))
        for n in range(-5, 6):
            assert spec.line_magnitude(n) == pytest.approx(abs(jv(n, 1.0)), abs=1e-3)

    def test_csv_header(self):
        text = dft(synthesize_beat(0.0, 1.0, 1.0, 4.0)).to_csv()
        assert text.splitlines()[0] == "freq_hz,re,im,mag"
        assert len(text.splitlines()) == 5


class TestExtract:
    def test_alpha_zero(self):
        spec = dft(synthesize_beat(0.0, 1.0, 4.0, 32.0))
        for n, a in extract_sideband_amplitudes(spec, 4.0, 1.0, range(-5, 6)):
            assert a == pytest.approx(1.0 if n == 0 else 0.0, abs=1e-10)

    def test_alpha_3_7(self):
        spec = dft(synthesize_beat(3.7, 1.0, 0.0, 64.0))
        for n, a in extract_sideband_amplitudes(spec, 0.0, 1.0, range(0, 7)):
            assert a == pytest.approx(abs(jv(n, 3.7)), abs=1e-3)

    def test_carrier_is_j0(self):
        spec = dft(synthesize_beat(3.7, 0.5, 2.0, 64.0, n_periods=2))
        ((_, a),) = extract_sideband_amplitudes(spec, 2.0, 0.5, [0])
        assert a == pytest.approx(abs(jv(0, 3.7)), abs=1e-3)

    @pytest.mark.parametrize("alpha", [0.5, 3.7, 23.8])
    def test_symmetry_and_power(self, alpha):
        band = significant_band(alpha, 1e-12)
        spec = dft(synthesize_beat(alpha, 1.0, 0.0, 2.0 ** math.ceil(math.log2(2 * band + 1))))
        got = dict(extract_sideband_amplitudes(spec, 0.0, 1.0, range(-band, band + 1)))
        for n in range(1, band + 1):
            assert got[-n] == pytest.approx(got[n], abs=1e-6)
        assert sum(a * a for a in got.values()) == pytest.approx(1.0, abs=1e-6)

    def test_out_of_range(self):
        spec = dft(synthesize_beat(1.0, 1.0, 0.0, 16.0))
        with pytest.raises(SpectrumRangeError):
            extract_sideband_amplitudes(spec, 0.0, 1.0, range(-9, 9))


class TestEstimate:
    def test_exact_measurements(self):
        measured = [(n, abs(jv(n, 23.8))) for n in range(-40, 41)]
        res = estimate_modulation_index(measured, (10.0, 40.0))
        assert res.alpha_hat == pytest.approx(23.8, abs=1e-6)
        assert res.n_lines_used == 81 and res.residual_norm >= 0

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 3.7, 23.8])
    def test_noiseless_roundtrip(self, alpha):
        assert roundtrip(alpha).alpha_hat == pytest.approx(alpha, rel=1e-3)

    def test_noiseless_with_offset(self):
        assert roundtrip(3.7, offset=5.0).alpha_hat == pytest.approx(3.7, rel=1e-3)

    def test_noise_degrades_monotonically(self):
        medians = []
        for snr in (60, 40, 20):
            errs = [abs(roundtrip(3.7, snr, seed).alpha_hat - 3.7) for seed in range(30)]
            medians.append(float(np.median(errs)))
        assert medians[0] <= medians[1] <= medians[2]

    def test_deterministic_noise(self):
        assert roundtrip(3.7, 30, 17) == roundtrip(3.7, 30, 17)
        a = add_white_noise(synthesize_beat(1.0, 1.0, 0.0, 16.0), 10, 5).samples
        b = add_white_noise(synthesize_beat(1.0, 1.0, 0.0, 16.0), 10, 6).samples
        assert not np.array_equal(a, b)

    def test_noise_power(self):
        s = synthesize_beat(0.0, 1.0, 0.0, 4096.0)
        noisy = add_white_noise(s, 20.0, 1)
        assert np.mean(np.abs(noisy.samples - s.samples) ** 2) == pytest.approx(0.01, rel=0.1)

    def test_monotone_residual_raises(self):
        measured = [(n, abs(jv(n, 3.7))) for n in range(-8, 9)]
        with pytest.raises(EstimationError) as info:
            estimate_modulation_index(measured, (5.0, 5.05))
        assert info.value.residual > 0

    def test_preconditions(self):
        with pytest.raises(ConfigurationError):
            estimate_modulation_index([(0, 1.0), (1, 0.0)], (0.0, 1.0))
        with pytest.raises(ConfigurationError):
            estimate_modulation_index([(0, 1.0), (1, 0.0), (-1, 0.0)], (1.0, 1.0))

    def test_report_json(self):
        doc = json.loads(estimation_report_json(EstimationResult(3.7, 1e-9, 17), seed=42))
        assert doc == {"alpha_hat": 3.7, "residual_norm": 1e-9, "n_lines_used": 17, "seed": 42}

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.3, 30.0))
    def test_exact_fixed_point(self, alpha):
        measured = [(n, abs(jv(n, alpha))) for n in range(-int(alpha) - 12, int(alpha) + 13)]
        res = estimate_modulation_index(measured, (0.5 * alpha, 1.5 * alpha + 0.5))
        assert res.alpha_hat == pytest.approx(alpha, abs=1e-6)


def test_golden_section_quadratic():
    a, b, _, _ = golden_section(lambda x: (x - 1.234) ** 2, 0.0, 3.0, 1e-9)
    assert b - a <= 1e-9 and a <= 1.234 <= b


class TestNyquist:
    def test_galileo(self, galileo, h_maser):
        from gravab.phase import modulation_index

        req = nyquist_requirements(modulation_index(h_maser, galileo), galileo.orbital_freq)
        assert req.peak_sideband_freq == pytest.approx(36.5e-3, abs=1.5e-3)
        assert 13.0 <= req.max_averaging_interval <= 14.0
        assert req.max_averaging_interval == pytest.approx(13.71, abs=0.01)

    def test_iss_cs(self, iss, cs_clock):
        from gravab.phase import modulation_index

        req = nyquist_requirements(modulation_index(cs_clock, iss), iss.orbital_freq)
        assert req.peak_sideband_freq == pytest.approx(4.4e-3, rel=0.01)
        assert req.max_averaging_interval == pytest.approx(113.6, rel=0.01)

    def test_direct_values(self):
        req = nyquist_requirements(23.8, 1.85e-4)
        assert req.peak_sideband_freq == pytest.approx(4.403e-3, rel=1e-12)
        assert req.max_averaging_interval == pytest.approx(113.56, abs=0.01)

    def test_zero_alpha_flagged(self):
        req = nyquist_requirements(0.0, 1e-4)
        assert req.peak_sideband_freq == 0.0 and not req.bounded
        assert math.isinf(req.max_averaging_interval)
        assert req.to_dict()["max_averaging_interval_s"] is None
        json.dumps(req.to_dict(), allow_nan=False)


def test_discrete_spectrum_bin_width():
    spec = DiscreteSpectrum(8.0, np.zeros(16, complex))
    assert spec.bin_width == 0.5
    assert spec.freqs()[1] == 0.5 and spec.freqs()[-1] == -0.5

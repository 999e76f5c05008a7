import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gravab.clock import (
    ClockTransition,
    TwoLevelState,
    analytic_mixing_angle,
    level_energies,
    numerical_mixing_angle,
    propagate_analytic,
    propagate_numerical,
    redshifted_transition_energy,
    redshifted_transition_frequency,
)
from gravab.constants import C, H
from gravab.errors import ConfigurationError
from gravab.orbit import from_apsides


class TestTransition:
    def test_derived(self, h_maser):
        assert h_maser.delta_E0 == H * 1.42e9
        assert h_maser.delta_m == h_maser.delta_E0 / C**2
        assert h_maser.m_e_star > h_maser.m_e
        assert h_maser.E_f0 - h_maser.E_i0 == pytest.approx(h_maser.delta_E0, rel=1e-15)

    @pytest.mark.parametrize("f", [0.0, -1.0, math.inf])
    def test_rejects_bad_frequency(self, f):
        with pytest.raises(ConfigurationError):
            ClockTransition(f)


class TestState:
    def test_normalization_enforced(self):
        with pytest.raises(ConfigurationError):
            TwoLevelState(1.0, 1.0)

    def test_default_superposition(self):
        s = TwoLevelState.superposition()
        assert s.norm == pytest.approx(1.0, abs=1e-15)
        assert s.relative_phase == 0.0


class TestLevelEnergies:
    def test_negligible_potential(self, h_maser):
        el = from_apsides(7e6, 7.1e6, mu=1e-300, period_override=6000.0)
        e_i, e_f = level_energies(h_maser, el, 100.0)
        assert e_i == h_maser.E_i0 and e_f == pytest.approx(h_maser.E_f0, rel=1e-15)

    @pytest.mark.parametrize("model", ["paper", "exact"])
    def test_gap(self, galileo, h_maser, model):
        from gravab.phase import potential

        for t in (0.0, 1000.0, 0.6 * galileo.period):
            e_i, e_f = level_energies(h_maser, galileo, t, model)
            phi = potential(galileo, t, model)
            # the gap sits on top of a ~1e-23 J level shift, so compare relative to that scale
            scale = abs(h_maser.m_e * phi)
            assert (e_f - e_i) == pytest.approx(h_maser.delta_E0 + h_maser.delta_m * phi, abs=4e-16 * scale)

    def test_galileo_perigee_gap(self, galileo, h_maser):
        e_i, e_f = level_energies(h_maser, galileo, 0.0, "paper")
        reduction = h_maser.delta_m * (galileo.mu / galileo.r0) * (1 + galileo.e)
        scale = abs(h_maser.m_e * galileo.mu / galileo.r0)
        assert (e_f - e_i) == pytest.approx(h_maser.delta_E0 - reduction, abs=4e-16 * scale)


class TestPropagation:
    def test_identity_at_zero(self, iss, cs_clock):
        s0 = TwoLevelState(0.6, 0.8j)
        assert propagate_analytic(s0, cs_clock, iss, 0.0) == s0

    def test_negligible_potential(self, cs_clock):
        el = from_apsides(7e6, 7.1e6, mu=1e-300, period_override=6000.0)
        s0 = TwoLevelState.superposition()
        s = propagate_analytic(s0, cs_clock, el, 4000.0)
        assert abs(s.c_f - s0.c_f) < 1e-15 and s.c_i == s0.c_i

    def test_full_orbit_is_secular_only(self, iss, cs_clock):
        from gravab.phase import secular_rate

        T = iss.period
        angle = analytic_mixing_angle(cs_clock, iss, T)
        assert angle == pytest.approx(secular_rate(cs_clock, iss) * T, abs=1e-9)
        assert numerical_mixing_angle(cs_clock, iss, T, dt=T / 1e5) == pytest.approx(angle, abs=1e-8)

    def test_constant_potential_exact_match(self, circular, h_maser):
        t = 0.42 * circular.period
        a = analytic_mixing_angle(h_maser, circular, t)
        n = numerical_mixing_angle(h_maser, circular, t, dt=circular.period / 1e4)
        assert n == pytest.approx(a, rel=1e-14)

    def test_circular_pure_secular(self, circular, h_maser):
        from gravab.phase import secular_rate

        t = 0.77 * circular.period
        s = propagate_numerical(TwoLevelState.superposition(), h_maser, circular, t, dt=circular.period / 1e4)
        expected = cmath.exp(-1j * secular_rate(h_maser, circular) * t) / math.sqrt(2)
        assert abs(s.c_f - expected) < 1e-9

    def test_ground_amplitude_untouched(self, galileo, h_maser):
        s0 = TwoLevelState(0.6, 0.8)
        for s in (propagate_analytic(s0, h_maser, galileo, 1e4, "exact"),
                  propagate_numerical(s0, h_maser, galileo, 1e4, "exact", dt=galileo.period / 1e4)):
            assert s.c_i == s0.c_i

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.0, 2 * math.pi), st.floats(0.0, 1.0), st.floats(0.0, 3.0))
    def test_norm_preserved(self, theta, p, frac):
        iss = from_apsides(6.8e6, 6.81e6, period_override=5400.0)
        clock = ClockTransition(9.19263177e9)
        s0 = TwoLevelState(math.sqrt(p), math.sqrt(1 - p) * cmath.exp(1j * theta))
        t = frac * iss.period
        for s in (propagate_analytic(s0, clock, iss, t),
                  propagate_numerical(s0, clock, iss, t, dt=iss.period / 2000)):
            assert abs(s.norm - 1.0) <= 1e-12

    def test_second_order_convergence(self, iss, cs_clock):
        t = 0.37 * iss.period
        exact = analytic_mixing_angle(cs_clock, iss, t)
        errs = [numerical_mixing_angle(cs_clock, iss, t, dt=iss.period / k) - exact for k in (1e3, 2e3, 4e3, 8e3)]
        orders = [math.log2(abs(errs[i] / errs[i + 1])) for i in range(3)]
        assert all(abs(o - 2.0) < 0.05 for o in orders)

    @pytest.mark.parametrize("model", ["paper", "exact"])
    def test_group_action(self, galileo, h_maser, model):
        s0 = TwoLevelState.superposition()
        t1, t2 = 0.2 * galileo.period, 0.9 * galileo.period
        direct = analytic_mixing_angle(h_maser, galileo, t2, model, n_steps=20000)
        split = (analytic_mixing_angle(h_maser, galileo, t1, model, n_steps=20000)
                 + analytic_mixing_angle(h_maser, galileo, t2, model, t0=t1, n_steps=20000))
        assert split == pytest.approx(direct, abs=1e-9)
        a = propagate_analytic(propagate_analytic(s0, h_maser, galileo, t1, model, n_steps=20000),
                               h_maser, galileo, t2, model, t0=t1, n_steps=20000)
        b = propagate_analytic(s0, h_maser, galileo, t2, model, n_steps=20000)
        assert abs(a.c_f - b.c_f) < 1e-9

    def test_exact_model_numerical_vs_quadrature(self, galileo, h_maser):
        t = 0.61 * galileo.period
        quad = analytic_mixing_angle(h_maser, galileo, t, "exact", n_steps=40000)
        step = numerical_mixing_angle(h_maser, galileo, t, "exact", dt=galileo.period / 1e5)
        assert step == pytest.approx(quad, abs=1e-6)

    @pytest.mark.parametrize("dt", [0.0, -1.0, 10.0])
    def test_bad_dt(self, iss, cs_clock, dt):
        with pytest.raises(ConfigurationError) as info:
            numerical_mixing_angle(cs_clock, iss, 100.0, dt=dt)
        assert info.value.field == "dt"


class TestRedshift:
    def test_far_orbit_limit(self, h_maser):
        el = from_apsides(1e30, 1e30)
        delta_e, frac = redshifted_transition_energy(h_maser, el)
        assert delta_e == pytest.approx(h_maser.delta_E0, rel=1e-15)

    def test_galileo(self, galileo, h_maser):
        _, frac = redshifted_transition_energy(h_maser, galileo)
        assert frac == pytest.approx(1.585e-10, rel=1e-3)

    def test_iss(self, iss, h_maser):
        _, frac = redshifted_transition_energy(h_maser, iss)
        assert frac == pytest.approx(6.52e-10, rel=1e-3)

    def test_frequency(self, galileo, h_maser):
        delta_e, frac = redshifted_transition_energy(h_maser, galileo)
        assert redshifted_transition_frequency(h_maser, galileo) == pytest.approx(1.42e9 * (1 + frac), rel=1e-15)

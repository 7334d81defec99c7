"""Exact vs adiabatic vs analytic squeezed-reservoir dynamics."""

import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cavsqueeze import dynamics as dyn
from cavsqueeze import hilbert as hb
from cavsqueeze import model as md
from cavsqueeze import squeezedbath as sb
from cavsqueeze.errors import AdvisoryWarning, ConfigError, UnphysicalBathError

rng = np.random.default_rng(772401)


def _benchmark_params(phi=0.0, gamma=0.0):
    return sb.bath_params(0.04, 40.0, gamma, 1.5, phi)


class TestBathParams:
    def test_engineered_rate_value(self):
        bp = _benchmark_params()
        assert bp.gamma_eng == pytest.approx(1.6e-4, rel=1e-12)
        assert bp.big_n == pytest.approx(math.sinh(1.5) ** 2, rel=1e-12)
        assert abs(bp.big_m) == pytest.approx(
            math.sinh(1.5) * math.cosh(1.5), rel=1e-12
        )

    def test_correlation_saturates_bound(self):
        for r in (0.0, 0.4, 1.5, 2.3):
            bp = sb.bath_params(0.02, 30.0, 0.0, r, 0.7)
            assert abs(bp.big_m) ** 2 - bp.big_n * (bp.big_n + 1) == pytest.approx(
                0.0, abs=1e-10
            )

    def test_zero_squeezing(self):
        bp = sb.bath_params(0.05, 20.0, 0.0, 0.0, 1.0)
        assert bp.big_n == 0.0
        assert bp.big_m == 0.0

    def test_invalid_rates(self):
        with pytest.raises(UnphysicalBathError):
            sb.bath_params(0.04, 0.0, 0.0, 1.0, 0.0)
        with pytest.raises(UnphysicalBathError):
            sb.bath_params(0.04, 40.0, -0.1, 1.0, 0.0)
        with pytest.raises(UnphysicalBathError):
            sb.bath_params(0.04, 40.0, 0.0, -1.0, 0.0)

    def test_bad_cavity_advisory(self):
        with pytest.warns(AdvisoryWarning):
            sb.bath_params(0.04, 0.3, 0.0, 1.0, 0.0)


class TestAnalyticLaw:
    def test_normalized_at_zero(self):
        for phi in (0.0, 0.9, math.pi):
            assert sb.sigma_x_analytic(0.0, 1.6e-4, 1.5, phi) == 1.0

    def test_pure_exponential_limits(self):
        t = np.linspace(0.0, 5000.0, 7)
        ge, r = 1.6e-4, 1.5
        assert_allclose(
            sb.sigma_x_analytic(t, ge, r, 0.0),
            np.exp(-ge * math.exp(2 * r) * t / 2),
            atol=1e-14,
        )
        assert_allclose(
            sb.sigma_x_analytic(t, ge, r, math.pi),
            np.exp(-ge * math.exp(-2 * r) * t / 2),
            atol=1e-14,
        )

    def test_right_angle_is_equal_mixture(self):
        t = np.linspace(0.0, 2e5, 11)
        ge, r = 1.6e-4, 1.5
        mix = 0.5 * (
            sb.sigma_x_analytic(t, ge, r, 0.0) + sb.sigma_x_analytic(t, ge, r, math.pi)
        )
        assert_allclose(sb.sigma_x_analytic(t, ge, r, math.pi / 2), mix, atol=1e-14)


class TestRunExact:
    def test_zero_coupling_freezes_atom(self):
        bp = sb.bath_params(0.0, 40.0, 0.0, 0.0, 0.0)
        series = sb.run_exact(bp, t_end=50.0)
        assert np.max(np.abs(series.channels["sigma_x"] - 1.0)) < 1e-9

    def test_window_requires_decay(self):
        bp = sb.bath_params(0.0, 40.0, 0.0, 0.0, 0.0)
        with pytest.raises(ConfigError):
            sb.run_exact(bp)

    def test_confined_to_low_fock_block(self):
        series = sb.run_exact(_benchmark_params())
        assert np.max(series.channels["n_field"]) < 0.05
        assert np.max(series.channels["p_above1"]) < 1e-3

    def test_matches_analytic_at_benchmark_point(self):
        phi = math.pi / 2
        bp = _benchmark_params(phi)
        series = sb.run_exact(bp)
        analytic = sb.sigma_x_analytic(series.times, bp.gamma_eng, bp.r, phi)
        assert np.max(np.abs(series.channels["sigma_x"] - analytic)) < 0.01

    def test_effective_form_matches_engineered_frame(self):
        # the rotating dispersive form differs from the engineered form
        # by the level-shift frame only; undo it on <sigma_minus>
        # the identity is Gamma-independent; a moderate Gamma keeps the
        # stepping path for the time-dependent form affordable
        des = md.design_couplings(1.0, scale=0.1)
        spec = des.spec
        bp = sb.bath_params(spec.lam, 1.0, 0.0, spec.r, spec.phi)
        t_end = 300.0
        eng = sb.run_exact(bp, t_end=t_end, sample_points=1000)
        eff = sb.run_exact(
            bp,
            t_end=t_end,
            h_form="effective",
            eff=des.eff,
            sample_points=300,
        )
        d1 = md.detuning_condition_deltas(des.eff)[0]
        x_d, y_d = eff.channels["sigma_x"], eff.channels["sigma_y"]
        sx_static = x_d * np.cos(d1 * eff.times) + y_d * np.sin(d1 * eff.times)
        sx_eng = np.interp(eff.times, eng.times, eng.channels["sigma_x"])
        assert np.max(np.abs(sx_static - sx_eng)) < 1e-3

    def test_effective_form_requires_couplings(self):
        with pytest.raises(ConfigError):
            sb.run_exact(_benchmark_params(), t_end=10.0, h_form="effective")

    def test_unknown_form_rejected(self):
        with pytest.raises(ConfigError):
            sb.run_exact(_benchmark_params(), t_end=10.0, h_form="raw")


class TestRunAdiabatic:
    def test_vacuum_limit_t1_t2(self):
        # N = M = 0: transverse rate is half the longitudinal rate
        ge = 0.08
        bp = sb.bath_params(math.sqrt(ge * 30.0) / 2.0, 30.0, 0.0, 0.0, 0.0)
        assert bp.gamma_eng == pytest.approx(ge, rel=1e-12)
        rho0 = hb.QuantumState(
            np.array([[0.3, 0.25 + 0.1j], [0.25 - 0.1j, 0.7]]), (2,), kind="mixed"
        )
        series = sb.run_adiabatic(bp, atom0=rho0, t_end=40.0, dt=0.05)
        t = series.times
        x0, z0 = series.channels["sigma_x"][0], series.channels["sigma_z"][0]
        assert_allclose(
            series.channels["sigma_x"], x0 * np.exp(-ge * t / 2), atol=1e-8
        )
        assert_allclose(
            series.channels["sigma_z"], -1 + (z0 + 1) * np.exp(-ge * t), atol=1e-8
        )

    def test_dominant_intrinsic_decay(self):
        # the engineered channel still contributes its fast-quadrature
        # rate gamma_eng e^{2r}/2 = 0.0016, bounding the residual at
        # roughly 2 * 0.0016 / gamma
        bp = _benchmark_params(gamma=0.5)
        series = sb.run_adiabatic(bp, t_end=20.0, dt=0.02)
        assert np.max(
            np.abs(series.channels["sigma_x"] - np.exp(-0.5 * series.times / 2))
        ) < 4e-3

    def test_thermal_bath_has_no_phase(self):
        # with M = 0 the angle cannot enter; decay is the N-thermal form
        big_n = 1.3
        series = dyn.evolve_effective_atom(
            0.1, big_n, 0.0, 0.0, _random_atom(), 12.0, dt=0.02, sample_every=50
        )
        x0 = series.channels["sigma_x"][0]
        assert_allclose(
            series.channels["sigma_x"],
            x0 * np.exp(-0.1 * (2 * big_n + 1) * series.times / 2),
            atol=1e-8,
        )

    def test_bloch_ball_confinement(self):
        bp = _benchmark_params(math.pi / 2, gamma=0.01)
        series = sb.run_adiabatic(bp, t_end=8000.0)
        norms = (
            series.channels["sigma_x"] ** 2
            + series.channels["sigma_y"] ** 2
            + series.channels["sigma_z"] ** 2
        )
        assert np.max(norms) <= 1 + 1e-8


def _random_atom():
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = m @ m.conj().T
    return hb.QuantumState(rho / np.trace(rho).real, (2,), kind="mixed")


class TestBlockEquations:
    def test_rhs_matches_full_generator(self):
        bp = sb.bath_params(0.04, 40.0, 0.3, 1.5, 0.8)
        n_max = 3
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho00 = a + a.conj().T
        rho11 = b + b.conj().T
        rho10 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))

        full = np.zeros((2 * (n_max + 1),) * 2, dtype=complex)
        view = full.reshape(2, n_max + 1, 2, n_max + 1)
        view[:, 0, :, 0] = rho00
        view[:, 1, :, 0] = rho10
        view[:, 0, :, 1] = rho10.conj().T
        view[:, 1, :, 1] = rho11

        h = md.build_H_bath(bp.lam, bp.r, bp.phi, n_max)
        channels = [
            dyn.CollapseChannel(hb.tensor(hb.identity(2), hb.destroy(n_max)), bp.Gamma),
            dyn.CollapseChannel(
                hb.tensor(hb.sigma_minus(), hb.identity(n_max + 1)), bp.gamma
            ),
        ]
        out = dyn.apply_liouvillian(h, channels, full).reshape(
            2, n_max + 1, 2, n_max + 1
        )
        d00, d10, d11 = sb.block_equations_rhs(bp, rho00, rho10, rho11)
        assert np.max(np.abs(out[:, 0, :, 0] - d00)) < 1e-10
        assert np.max(np.abs(out[:, 1, :, 0] - d10)) < 1e-10
        assert np.max(np.abs(out[:, 1, :, 1] - d11)) < 1e-10


class TestPhaseReport:
    def test_benchmark_phase_comparison(self):
        report = sb.phase_sensitivity_report(_benchmark_params())
        assert report.ordering_ok
        assert len(report.cases) == 3
        for case in report.cases:
            assert case.dev_exact_analytic < 0.05
            assert case.dev_exact_adiabatic < 0.05
            assert case.dev_adiabatic_analytic < 0.05
            assert case.max_n_field < 0.05
            assert case.max_p_above1 < 1e-3
        ratio = report.cases[2].t_half_exact / report.cases[0].t_half_exact
        assert ratio == pytest.approx(math.exp(6.0), rel=0.2)

    def test_gamma_doubling_collapses_on_rescaled_time(self):
        # doubling Gamma halves gamma_eng; curves match at equal gamma_eng t
        lam, r, phi = 0.04, 1.0, 0.0
        bp1 = sb.bath_params(lam, 40.0, 0.0, r, phi)
        bp2 = sb.bath_params(lam, 80.0, 0.0, r, phi)
        s1 = sb.run_exact(bp1, sample_points=400)
        s2 = sb.run_exact(bp2, sample_points=400)
        tau1 = s1.times * bp1.gamma_eng
        tau2 = s2.times * bp2.gamma_eng
        sx2 = np.interp(tau1, tau2, s2.channels["sigma_x"])
        assert np.max(np.abs(s1.channels["sigma_x"] - sx2)) < 0.02

    def test_step_halving_leaves_observables_unchanged(self):
        # t_end and dt chosen so both runs sample the same instants
        bp = _benchmark_params(phi=math.pi / 2)
        coarse = sb.run_exact(bp, t_end=480000.0, dt=0.0025)
        fine = sb.run_exact(bp, t_end=480000.0, dt=0.00125)
        assert np.array_equal(coarse.times, fine.times)
        for name in coarse.channels:
            shift = np.max(np.abs(coarse.channels[name] - fine.channels[name]))
            assert shift < 1e-6, name

    def test_degradation_outside_bad_cavity(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AdvisoryWarning)
            bad = sb.bath_params(0.04, 4 * 0.04, 0.0, 1.5, 0.0)
        t_end = sb._default_window(bad)
        exact = sb.run_exact(bad, n_max=8, t_end=t_end)
        adiab = sb.run_adiabatic(bad, t_end=t_end, sample_points=20000)
        dev = max(
            np.max(
                np.abs(
                    exact.channels[k]
                    - np.interp(exact.times, adiab.times, adiab.channels[k])
                )
            )
            for k in ("sigma_x", "sigma_y", "sigma_z")
        )
        assert dev > 0.1

"""End-to-end acceptance gate for the two protocols.

Each test prints one verdict line (visible with ``pytest -s``) and
asserts the same condition, so ``pytest tests/test_acceptance.py -v``
reads as the checklist.  Benchmark operating points: the beam protocol
at r = 1 with the dominant coupling 0.1 and per-atom kick 0.2, and the
engineered-bath protocol at r = 1.5, lam = 0.04, Gamma = 40.
"""

import math
import time
import warnings

import numpy as np
import pytest

from cavsqueeze import beam as bm
from cavsqueeze import cli
from cavsqueeze import dynamics as dyn
from cavsqueeze import hilbert as hb
from cavsqueeze import model as md
from cavsqueeze import squeezedbath as sb
from cavsqueeze.errors import AdvisoryWarning, TruncationWarning

R_BEAM = 1.0
N_TARGET = math.sinh(R_BEAM) ** 2          # 1.3811
VX1_TARGET = math.exp(2.0 * R_BEAM) / 4.0  # 1.8473
VX2_TARGET = math.exp(-2.0 * R_BEAM) / 4.0  # 0.0338
LAM_DOM = 0.1
TAU = 2.0 * math.cosh(R_BEAM)  # per-atom kick |lam| tau = 0.2


def _verdict(label, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"{label}: {detail}"


def _beam_eff():
    return md.EffectiveParams(
        lambda1=LAM_DOM * math.tanh(R_BEAM), lambda2=-LAM_DOM
    )


@pytest.fixture(scope="module")
def beam_run():
    cfg = bm.BeamConfig(eff=_beam_eff(), tau=TAU, n_atoms=400, n_max=30)
    start = time.perf_counter()
    result = bm.run_beam(cfg, capture_at=(200, 400))
    return result, time.perf_counter() - start


@pytest.fixture(scope="module")
def bath_report():
    bp = sb.bath_params(0.04, 40.0, 0.0, 1.5, 0.0)
    start = time.perf_counter()
    report = sb.phase_sensitivity_report(bp)
    return report, time.perf_counter() - start


class TestBeamProtocol:
    def test_mean_photon_number_after_200_atoms(self, beam_run):
        result, elapsed = beam_run
        value = result.n_mean[200]
        ok = abs(value - N_TARGET) < 0.10 and elapsed < 120.0
        _verdict(
            "beam <n> after 200 atoms",
            ok,
            f"{value:.4f} vs sinh^2(1) = {N_TARGET:.4f} "
            f"(tol 0.10), run took {elapsed:.1f}s (budget 120s)",
        )

    def test_quadrature_variances_after_200_atoms(self, beam_run):
        result, _ = beam_run
        v1, v2 = result.var_x1[200], result.var_x2[200]
        ok = abs(v1 - VX1_TARGET) < 0.15 and abs(v2 - VX2_TARGET) < 0.01
        _verdict(
            "beam quadrature variances after 200 atoms",
            ok,
            f"(dX1)^2 = {v1:.4f} vs {VX1_TARGET:.4f} (tol 0.15), "
            f"(dX2)^2 = {v2:.4f} vs {VX2_TARGET:.4f} (tol 0.01)",
        )

    def test_purity_and_fidelity_after_400_atoms(self, beam_run):
        result, _ = beam_run
        purity = result.purity[400]
        with warnings.catch_warnings():
            # the 3e-5 tail above the cutoff is irrelevant at this tolerance
            warnings.simplefilter("ignore", TruncationWarning)
            target = md.target_state(0.0, R_BEAM, 0.0, n_max=30)
        fid = hb.fidelity(result.captured[400], target)
        ok = purity > 0.97 and fid > 0.97
        _verdict(
            "beam steady-state purity and fidelity after 400 atoms",
            ok,
            f"purity = {purity:.4f}, fidelity = {fid:.4f} (both > 0.97)",
        )

    def test_truncation_convergence(self, beam_run):
        # doubling the cutoff must move each headline observable by
        # less than a tenth of its tolerance
        result, _ = beam_run
        wide = bm.run_beam(
            bm.BeamConfig(eff=_beam_eff(), tau=TAU, n_atoms=200, n_max=60)
        )
        dn = abs(wide.n_mean[200] - result.n_mean[200])
        d1 = abs(wide.var_x1[200] - result.var_x1[200])
        d2 = abs(wide.var_x2[200] - result.var_x2[200])
        ok = dn < 0.010 and d1 < 0.015 and d2 < 0.001
        _verdict(
            "beam truncation convergence (n_max 30 -> 60)",
            ok,
            f"shifts <n> {dn:.2e}, (dX1)^2 {d1:.2e}, (dX2)^2 {d2:.2e}",
        )


class TestBathProtocol:
    def test_exact_polarization_matches_analytic_law(self, bath_report):
        report, elapsed = bath_report
        devs = {c.phi: c.dev_exact_analytic for c in report.cases}
        worst = max(devs.values())
        ok = worst < 0.05 and elapsed < 300.0
        detail = ", ".join(
            f"phi = {phi:.3f}: {dev:.2e}" for phi, dev in devs.items()
        )
        _verdict(
            "bath exact <sigma_x> vs closed form",
            ok,
            f"{detail} (tol 0.05), runs took {elapsed:.1f}s (budget 300s)",
        )

    def test_adiabatic_elimination_holds_in_bad_cavity(self, bath_report):
        report, _ = bath_report
        worst = max(c.dev_exact_adiabatic for c in report.cases)
        _verdict(
            "bath adiabatic elimination at Gamma = 1000 |lam|",
            worst <= 0.05,
            f"max Bloch deviation {worst:.2e} (tol 0.05)",
        )

    def test_adiabatic_elimination_degrades_at_small_gamma(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AdvisoryWarning)
            bp = sb.bath_params(0.04, 4 * 0.04, 0.0, 1.5, 0.0)
        t_end = 5.0 / (bp.gamma_eng * math.exp(-2.0 * bp.r))
        exact = sb.run_exact(bp, n_max=8, t_end=t_end)
        adiab = sb.run_adiabatic(bp, t_end=t_end, sample_points=20000)
        dev = max(
            np.max(
                np.abs(
                    exact.channels[k]
                    - np.interp(exact.times, adiab.times, adiab.channels[k])
                )
            )
            for k in ("sigma_x", "sigma_y", "sigma_z")
        )
        _verdict(
            "bath adiabatic elimination degrades at Gamma = 4 |lam|",
            dev > 0.1,
            f"max Bloch deviation {dev:.3f} (must exceed 0.1)",
        )

    def test_truncation_convergence(self):
        # doubling the field cutoff must not move the polarization by
        # more than a tenth of the comparison tolerance
        bp = sb.bath_params(0.04, 40.0, 0.0, 1.5, math.pi / 2)
        narrow = sb.run_exact(bp, n_max=3, t_end=480000.0, dt=0.00125)
        wide = sb.run_exact(bp, n_max=6, t_end=480000.0, dt=0.00125)
        shift = max(
            np.max(np.abs(narrow.channels[k] - wide.channels[k]))
            for k in ("sigma_x", "sigma_y", "sigma_z")
        )
        _verdict(
            "bath truncation convergence (n_max 3 -> 6)",
            shift < 0.005,
            f"max Bloch shift {shift:.2e} (tol 5e-03)",
        )


class TestStructuralInvariants:
    def test_transformed_static_form_is_exchange_form(self):
        # squeeze the static form into the excitation-exchange frame and
        # compare matrices block by block, away from the cutoff
        n_max = 60
        cut = 31  # n <= n_max / 2
        idx = np.concatenate([np.arange(cut), n_max + 1 + np.arange(cut)])
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(20):
            r = rng.uniform(0.01, 0.1)
            lam2 = rng.uniform(0.02, 0.12) * np.exp(2j * np.pi * rng.random())
            ratio = math.tanh(r) * np.exp(2j * np.pi * rng.random())
            eff = md.EffectiveParams(lambda1=ratio * lam2, lambda2=lam2)
            spec = md.squeeze_spec(eff)
            h_tilde = md.transform_to_jc_frame(
                md.build_H_eff_static(eff, n_max), spec
            )
            h_jc = md.build_H_transformed(spec.lam, n_max)
            diff = np.abs(h_tilde.mat - h_jc.mat)[np.ix_(idx, idx)]
            worst = max(worst, float(np.max(diff)))
        _verdict(
            "unitary equivalence of the two coupling forms",
            worst < 1e-6,
            f"max element deviation {worst:.2e} over 20 draws on n <= 30",
        )

    def test_closed_form_oracles(self):
        # damped cavity from |1>
        h = 0.0 * hb.number(10)
        channels = [dyn.CollapseChannel(hb.destroy(10), 0.3)]
        _, series = dyn.evolve_master(
            h, channels, hb.fock(1, 10), t_end=10.0, sample_every=5,
            observables={"n": hb.number(10)},
        )
        dev_cavity = float(
            np.max(np.abs(series.channels["n"].real - np.exp(-0.3 * series.times)))
        )

        # spontaneous decay of an excited two-level atom
        channels = [dyn.CollapseChannel(hb.sigma_minus(), 0.25)]
        _, series = dyn.evolve_master(
            0.0 * hb.sigma_z(), channels, hb.atom_basis(hb.EXCITED),
            t_end=12.0, sample_every=5,
            observables={"pe": hb.atomic_projector(hb.EXCITED, hb.EXCITED)},
        )
        dev_decay = float(
            np.max(np.abs(series.channels["pe"].real - np.exp(-0.25 * series.times)))
        )

        # resonant exchange pi pulse |e,0> -> |g,1>
        lam = 0.1
        psi0 = hb.tensor_state(hb.atom_basis(hb.EXCITED), hb.fock(0, 4))
        psi = dyn.propagate_unitary(
            md.build_H_transformed(lam, 4), psi0, t_end=math.pi / (2 * lam)
        )
        target = hb.tensor_state(hb.atom_basis(hb.GROUND), hb.fock(1, 4))
        dev_pulse = abs(1.0 - hb.fidelity(psi, target))

        # squeezed-vacuum moments at a truncation-safe squeezing
        st = md.target_state(0.0, 1.0, 0.0, n_max=64)
        dev_moments = max(
            abs(hb.expect(hb.number(64), st).real - math.sinh(1.0) ** 2),
            abs(hb.variance(hb.quad_x1(64), st) - math.exp(2.0) / 4),
            abs(hb.variance(hb.quad_x2(64), st) - math.exp(-2.0) / 4),
            abs(hb.expect(hb.quad_x1(64), st)),
        )

        worst = max(dev_cavity, dev_decay, dev_pulse, dev_moments)
        _verdict(
            "closed-form oracles",
            worst < 1e-5,
            f"damped cavity {dev_cavity:.1e}, two-level decay {dev_decay:.1e}, "
            f"pi pulse {dev_pulse:.1e}, squeezed moments {dev_moments:.1e} "
            f"(tol 1e-05)",
        )

    def test_invariant_suite_via_validate(self, capsys):
        exit_code = cli.main(["validate"])
        out = capsys.readouterr().out
        checks = cli.run_validation()
        bad = [name for name, ok, _ in checks if not ok]
        ok = exit_code == 0 and not bad and out.count("PASS") == len(checks)
        _verdict(
            "invariant suite via the validate command",
            ok,
            f"exit code {exit_code}, "
            f"{len(checks) - len(bad)}/{len(checks)} checks passed",
        )

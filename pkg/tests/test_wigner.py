"""Displaced-parity phase-space maps against Gaussian oracles."""

import math
import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cavsqueeze import beam as bm
from cavsqueeze import hilbert as hb
from cavsqueeze import model as md
from cavsqueeze import wigner as wg
from cavsqueeze.errors import ConfigError, TruncationWarning


def _quiet_grid(state, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return wg.wigner_grid(state, **kwargs)


def _grid_moments(grid, axis):
    pts, density = grid.marginal(axis)
    step = pts[1] - pts[0]
    mean = float(np.sum(pts * density) * step)
    var = float(np.sum((pts - mean) ** 2 * density) * step)
    return mean, var


class TestVacuum:
    def test_matches_gaussian_everywhere(self):
        grid = _quiet_grid(hb.fock(0, 30))
        x, p = np.meshgrid(grid.x_axis, grid.p_axis, indexing="ij")
        oracle = (2 / np.pi) * np.exp(-2 * (x**2 + p**2))
        assert_allclose(grid.values, oracle, atol=1e-13)

    def test_peak_and_mass(self):
        grid = _quiet_grid(hb.fock(0, 30))
        assert grid.values.max() == pytest.approx(2 / np.pi, abs=1e-12)
        assert grid.total_mass() == pytest.approx(1.0, abs=0.01)
        assert grid.imag_residue < 1e-10

    def test_axes_and_cell(self):
        grid = _quiet_grid(hb.fock(0, 20), resolution=41)
        assert grid.values.shape == (41, 41)
        assert grid.x_axis[0] == -4.0 and grid.x_axis[-1] == 4.0
        assert grid.cell_area == pytest.approx(0.2 * 0.2, rel=1e-12)
        assert grid.values.dtype == np.float64

    def test_deterministic(self):
        a = _quiet_grid(hb.fock(0, 20))
        b = _quiet_grid(hb.fock(0, 20))
        assert np.array_equal(a.values, b.values)


class TestFockOne:
    def test_central_negativity(self):
        grid = _quiet_grid(hb.fock(1, 20), resolution=81)
        i0 = np.argmin(np.abs(grid.x_axis))
        j0 = np.argmin(np.abs(grid.p_axis))
        assert grid.values[i0, j0] == pytest.approx(-2 / np.pi, abs=1e-12)
        assert grid.total_mass() == pytest.approx(1.0, abs=0.01)


class TestSqueezedVacuum:
    def test_marginals_match_quadrature_moments(self):
        st = md.target_state(0.0, 1.0, 0.0, n_max=60)
        grid = _quiet_grid(st, x_range=(-6, 6), p_range=(-6, 6), resolution=101)
        assert grid.total_mass() == pytest.approx(1.0, abs=0.01)
        mean_x, var_x = _grid_moments(grid, "x")
        mean_p, var_p = _grid_moments(grid, "p")
        assert mean_x == pytest.approx(0.0, abs=1e-6)
        assert mean_p == pytest.approx(0.0, abs=1e-6)
        assert var_x == pytest.approx(hb.variance(hb.quad_x1(60), st), rel=0.01)
        assert var_p == pytest.approx(hb.variance(hb.quad_x2(60), st), rel=0.01)

    def test_contour_axis_ratio(self):
        # widths scale as e^{r} and e^{-r}: the phi = 0 state stretches
        # x and compresses p by e^{2r} overall
        st = md.target_state(0.0, 1.0, 0.0, n_max=60)
        grid = _quiet_grid(st, x_range=(-6, 6), p_range=(-6, 6), resolution=101)
        _, var_x = _grid_moments(grid, "x")
        _, var_p = _grid_moments(grid, "p")
        assert math.sqrt(var_x / var_p) == pytest.approx(math.exp(2.0), rel=0.01)

    def test_gaussian_positivity(self):
        floor = -1e-9
        assert _quiet_grid(hb.fock(0, 30)).values.min() >= floor
        squeezed = md.target_state(0.0, 0.5, 0.0, n_max=60)
        assert (
            _quiet_grid(squeezed, x_range=(-5, 5), p_range=(-5, 5)).values.min()
            >= floor
        )
        displaced = md.target_state(1.0 + 0.5j, 0.5, 0.3, n_max=80)
        assert (
            _quiet_grid(displaced, x_range=(-4, 6), p_range=(-4, 5)).values.min()
            >= floor
        )


class TestDisplacementCovariance:
    def test_shifted_grid_matches(self):
        # displacing the state and shifting the window by the same
        # alpha_0 lands on identical grid points
        alpha0 = 0.7 - 0.4j
        vac = hb.fock(0, 40)
        shifted = hb.QuantumState(hb.displacement(alpha0, 40).mat[:, 0], (41,))
        base = _quiet_grid(vac)
        moved = _quiet_grid(
            shifted, x_range=(-4 + 0.7, 4 + 0.7), p_range=(-4 - 0.4, 4 - 0.4)
        )
        assert np.max(np.abs(moved.values - base.values)) < 1e-3


class TestValidation:
    def test_rejects_composite_states(self):
        joint = hb.tensor_state(hb.atom_basis(hb.GROUND), hb.fock(0, 5))
        with pytest.raises(ConfigError):
            wg.wigner_grid(joint)

    def test_rejects_bad_grid(self):
        with pytest.raises(ConfigError):
            wg.wigner_grid(hb.fock(0, 5), resolution=1)
        with pytest.raises(ConfigError):
            wg.wigner_grid(hb.fock(0, 5), x_range=(2, -2))

    def test_marginal_axis_name(self):
        grid = _quiet_grid(hb.fock(0, 10), x_range=(-2, 2), p_range=(-2, 2))
        with pytest.raises(ValueError):
            grid.marginal("q")

    def test_truncation_note(self):
        with pytest.warns(TruncationWarning):
            grid = wg.wigner_grid(hb.fock(0, 10))
        assert len(grid.notes) == 1
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            quiet = wg.wigner_grid(hb.fock(0, 30), x_range=(-2, 2), p_range=(-2, 2))
        assert quiet.notes == []


class TestBeamSnapshots:
    def test_squeezing_progression(self):
        eff = md.EffectiveParams(lambda1=0.1 * math.tanh(1.0), lambda2=-0.1)
        tau = 0.2 / (0.1 / math.cosh(1.0))
        cfg = bm.BeamConfig(eff=eff, tau=tau, n_atoms=100, n_max=30)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            grids = wg.beam_snapshots(cfg, checkpoints=(50, 100))
        assert len(grids) == 3
        # initial snapshot is bare vacuum
        x, p = np.meshgrid(grids[0].x_axis, grids[0].p_axis, indexing="ij")
        assert_allclose(
            grids[0].values, (2 / np.pi) * np.exp(-2 * (x**2 + p**2)), atol=1e-10
        )
        # the minor axis keeps shrinking as atoms accumulate
        minor = [_grid_moments(g, "p")[1] for g in grids]
        assert minor[0] > minor[1] > minor[2]

    def test_checkpoint_bounds(self):
        eff = md.EffectiveParams(lambda1=0.05, lambda2=-0.1)
        cfg = bm.BeamConfig(eff=eff, tau=1.0, n_atoms=10, n_max=8)
        with pytest.raises(ConfigError):
            wg.beam_snapshots(cfg, checkpoints=(0, 5))
        with pytest.raises(ConfigError):
            wg.beam_snapshots(cfg, checkpoints=(5, 11))

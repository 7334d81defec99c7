"""Exit codes, artifact writing and overrides for the command line."""

import subprocess
import sys

import pytest

from cavsqueeze import cli
from cavsqueeze import io as cio
from cavsqueeze.errors import AdvisoryWarning

TINY_BEAM = (
    "[beam]\n"
    "lambda1 = 0.02\n"
    "lambda2 = -0.05\n"
    "tau = 1.0\n"
    "n_atoms = 8\n"
    "n_max = 8\n"
)


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestArgumentHandling:
    def test_no_arguments(self, capsys):
        assert cli.main([]) == 1
        assert "no experiment requested" in capsys.readouterr().err

    def test_missing_config_file(self, capsys):
        assert cli.main(["--config", "/no/such/file.ini"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_config_reports_line(self, tmp_path, capsys):
        path = _write(tmp_path, "bad.ini", "[beam]\nfoo = 1\n")
        assert cli.main(["--config", path]) == 1
        assert "line 2: unknown key 'foo'" in capsys.readouterr().err

    def test_positional_config_mismatch(self, tmp_path, capsys):
        path = _write(tmp_path, "d.ini", "[design]\n")
        assert cli.main(["beam", "--config", path]) == 1
        assert "declares [design]" in capsys.readouterr().err

    def test_positional_config_match(self, tmp_path, capsys):
        path = _write(tmp_path, "d.ini", "[design]\n")
        assert cli.main(["design", "--config", path]) == 0
        assert "realized: r = 1" in capsys.readouterr().out

    def test_nmax_rejected_where_meaningless(self, capsys):
        assert cli.main(["design", "--nmax", "12"]) == 1
        assert "--nmax does not apply" in capsys.readouterr().err

    def test_dt_rejected_where_meaningless(self, capsys):
        assert cli.main(["validate", "--dt", "0.1"]) == 1
        assert "--dt does not apply" in capsys.readouterr().err


class TestDesign:
    def test_default_run_passes_regime_check(self, capsys):
        assert cli.main(["design"]) == 0
        out = capsys.readouterr().out
        assert "regime check" in out and "passed" in out

    def test_flagged_run_warns_but_exits_zero(self, tmp_path, capsys):
        path = _write(tmp_path, "d.ini", "[design]\nscale = 0.4\n")
        with pytest.warns(AdvisoryWarning, match="regime check flagged"):
            assert cli.main(["--config", path]) == 0
        assert "FLAGGED" in capsys.readouterr().out

    def test_strict_escalates_flags(self, tmp_path, capsys):
        path = _write(tmp_path, "d.ini", "[design]\nscale = 0.4\n")
        assert cli.main(["--config", path, "--strict"]) == 2
        assert "advisory escalated by --strict" in capsys.readouterr().err

    def test_unreachable_scale_is_an_error_either_way(self, tmp_path, capsys):
        path = _write(tmp_path, "d.ini", "[design]\nscale = 5\n")
        assert cli.main(["--config", path]) == 1
        assert "outside the dispersive regime" in capsys.readouterr().err
        assert cli.main(["--config", path, "--strict"]) == 1


class TestValidate:
    def test_all_checks_pass(self, capsys):
        assert cli.main(["validate"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 5
        assert "FAIL" not in out
        assert "all 5 checks passed" in out

    def test_run_validation_names(self):
        checks = cli.run_validation()
        assert [name for name, _, _ in checks] == [
            "trace preservation",
            "bloch-ball confinement",
            "wigner normalization",
            "squeeze correlation bound",
            "design round-trip",
        ]
        assert all(ok for _, ok, _ in checks)
        assert all(isinstance(detail, str) and detail for _, _, detail in checks)


class TestBeamRun:
    def test_writes_observables(self, tmp_path, capsys):
        path = _write(tmp_path, "b.ini", TINY_BEAM)
        out_dir = tmp_path / "run"
        assert cli.main(["--config", path, "--out", str(out_dir)]) == 0
        csv = out_dir / "beam_observables.csv"
        assert csv.exists()
        lines = [ln for ln in csv.read_text().splitlines() if not ln.startswith("#")]
        assert lines[0] == "atom_index,n_mean,var_x1,var_x2,fidelity,purity"
        assert len(lines) == 1 + 9
        assert "final purity" in capsys.readouterr().out

    def test_output_dir_from_config(self, tmp_path, capsys):
        out_dir = tmp_path / "from_config"
        path = _write(tmp_path, "b.ini", TINY_BEAM + f"output_dir = {out_dir}\n")
        assert cli.main(["--config", path]) == 0
        assert (out_dir / "beam_observables.csv").exists()
        capsys.readouterr()

    def test_nmax_override_lands_in_metadata(self, tmp_path, capsys):
        path = _write(tmp_path, "b.ini", TINY_BEAM)
        out_dir = tmp_path / "run"
        assert cli.main(["--config", path, "--out", str(out_dir), "--nmax", "12"]) == 0
        text = (out_dir / "beam_observables.csv").read_text()
        assert "# n_max = 12" in text
        capsys.readouterr()

    def test_runs_are_byte_identical(self, tmp_path, capsys):
        path = _write(tmp_path, "b.ini", TINY_BEAM)
        a, b = tmp_path / "a", tmp_path / "b"
        assert cli.main(["--config", path, "--out", str(a)]) == 0
        assert cli.main(["--config", path, "--out", str(b)]) == 0
        assert (a / "beam_observables.csv").read_bytes() == (
            b / "beam_observables.csv"
        ).read_bytes()
        capsys.readouterr()


class TestBathRun:
    def test_writes_cases_and_summary(self, tmp_path, capsys):
        text = (
            "[bath]\n"
            "lam = 0.04\n"
            "Gamma = 1.0\n"
            "r = 1.0\n"
            "phis = 0, 3.141592653589793\n"
            "t_end = 50\n"
        )
        path = _write(tmp_path, "bath.ini", text)
        out_dir = tmp_path / "run"
        assert cli.main(["--config", path, "--out", str(out_dir)]) == 0
        assert (out_dir / "bath_phi_0.csv").exists()
        assert (out_dir / "bath_phi_1.csv").exists()
        summary = (out_dir / "bath_summary.csv").read_text().splitlines()
        assert summary[0].startswith("phi,dev_exact_analytic")
        assert len(summary) == 3
        out = capsys.readouterr().out
        assert "phi = 0" in out


class TestWignerRun:
    def test_writes_snapshot_grids(self, tmp_path, capsys):
        text = (
            "[wigner]\n"
            "lambda1 = 0.02\n"
            "lambda2 = -0.05\n"
            "tau = 1.0\n"
            "n_atoms = 4\n"
            "n_max = 16\n"
            "checkpoints = 2, 4\n"
            "resolution = 11\n"
            "extent = 2.0\n"
        )
        path = _write(tmp_path, "w.ini", text)
        out_dir = tmp_path / "run"
        assert cli.main(["--config", path, "--out", str(out_dir)]) == 0
        for count in (0, 2, 4):
            grid_path = out_dir / f"wigner_atoms_{count}.grid"
            assert grid_path.exists()
            grid, meta = cio.read_wigner_grid(grid_path)
            assert meta["atoms"] == str(count)
            assert grid.values.shape == (11, 11)
            assert grid.total_mass() == pytest.approx(1.0, abs=0.02)
        assert "mass" in capsys.readouterr().out


class TestModuleInvocation:
    def test_python_dash_m(self):
        proc = subprocess.run(
            [sys.executable, "-m", "cavsqueeze.cli", "design"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "realized: r = 1" in proc.stdout

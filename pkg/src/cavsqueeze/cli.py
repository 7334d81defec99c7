"""Command-line entry point: run experiments, write artifacts.

Usage:
    cavsqueeze beam                      # built-in benchmark parameters
    cavsqueeze --config run.ini --out runs/
    cavsqueeze validate --strict

The experiment comes from the config's single [section], or from the
positional name with every parameter at its default.  Exit codes:
0 success, 1 failure, 2 a regime advisory escalated by --strict.
"""

import argparse
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import beam as bm
from . import dynamics as dyn
from . import hilbert as hb
from . import io as cio
from . import model as md
from . import squeezedbath as sb
from . import wigner as wg
from .errors import AdvisoryWarning, CavsqueezeError, TruncationWarning
from .io import RunConfig, default_config, parse_config, serialize_config

__all__ = [
    "RunConfig",
    "parse_config",
    "serialize_config",
    "default_config",
    "run",
    "run_validation",
    "main",
]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cavsqueeze",
        description="Reservoir-engineering experiments: beam, bath, wigner, "
        "design, validate.",
    )
    parser.add_argument(
        "experiment",
        nargs="?",
        choices=sorted(cio.SCHEMAS),
        help="experiment to run with default parameters (omit when --config is given)",
    )
    parser.add_argument("--config", help="path to a config file")
    parser.add_argument("--out", help="output directory (overrides the config)")
    parser.add_argument(
        "--strict",
        action="store_true",
        help="treat regime advisories as errors (exit 2)",
    )
    parser.add_argument("--nmax", type=int, help="override the Fock cutoff")
    parser.add_argument("--dt", type=float, help="override the integrator step")
    return parser


def _load_config(args):
    if args.config is not None:
        text = Path(args.config).read_text()
        cfg = parse_config(text)
        if args.experiment is not None and args.experiment != cfg.experiment:
            raise cio.ConfigError(
                f"command line asks for {args.experiment!r} but the config "
                f"declares [{cfg.experiment}]"
            )
        return cfg
    if args.experiment is None:
        raise cio.ConfigError(
            "no experiment requested: name one "
            f"({', '.join(sorted(cio.SCHEMAS))}) or pass --config"
        )
    return default_config(args.experiment)


def _apply_overrides(cfg, args):
    if args.out is not None:
        cfg.output_dir = args.out
    for flag, key, value in (("--nmax", "n_max", args.nmax), ("--dt", "dt", args.dt)):
        if value is None:
            continue
        if key not in cio.SCHEMAS[cfg.experiment]:
            raise cio.ConfigError(
                f"{flag} does not apply to the {cfg.experiment!r} experiment"
            )
        cfg.params[key] = value
    return cfg


def _beam_config(params):
    eff = md.EffectiveParams(
        lambda1=complex(params["lambda1"]),
        lambda2=complex(params["lambda2"]),
        beta=complex(params["beta"]),
    )
    return bm.BeamConfig(
        eff=eff,
        tau=params["tau"],
        n_atoms=params["n_atoms"],
        hamiltonian=params["hamiltonian"],
        n_max=params["n_max"],
        r_at=params.get("r_at"),
        g=params.get("g", 1.0),
        Delta1=params.get("Delta1"),
        Delta2=params.get("Delta2"),
        phase_clock=params.get("phase_clock", "global"),
        kappa=params.get("kappa", 0.0),
        dt=params["dt"],
    )


def _run_beam(cfg, out):
    result = bm.run_beam(_beam_config(cfg.params))
    path = out / "beam_observables.csv"
    cio.write_beam_csv(path, result)
    spec = result.spec
    print(
        f"beam: {cfg.params['n_atoms']} atoms, tau = "
        f"{cio.format_number(cfg.params['tau'])}, n_max = {cfg.params['n_max']}, "
        f"{cfg.params['hamiltonian']} form"
    )
    if spec is not None:
        print(
            f"  target: r = {cio.format_number(spec.r)}, phi = "
            f"{cio.format_number(spec.phi)}, alpha = "
            f"{cio.format_number(spec.alpha)}, gamma_eng = "
            f"{cio.format_number(result.gamma_eng)}"
        )
        print(
            f"  final <n>      = {result.n_mean[-1]:10.6f}   "
            f"(sinh^2 r = {math.sinh(spec.r) ** 2:.6f})"
        )
        print(
            f"  final (dX1)^2  = {result.var_x1[-1]:10.6f}   "
            f"(e^{{2r}}/4 = {math.exp(2 * spec.r) / 4:.6f})"
        )
        print(
            f"  final (dX2)^2  = {result.var_x2[-1]:10.6f}   "
            f"(e^{{-2r}}/4 = {math.exp(-2 * spec.r) / 4:.6f})"
        )
        print(f"  final fidelity = {result.fidelity[-1]:10.6f}")
    else:
        print(f"  final <n>      = {result.n_mean[-1]:10.6f}")
    print(f"  final purity   = {result.purity[-1]:10.6f}")
    print(f"wrote {path}")
    return 0


def _run_bath(cfg, out):
    params = cfg.params
    bp = sb.bath_params(
        params["lam"], params["Gamma"], params["gamma"], params["r"], 0.0
    )
    report = sb.phase_sensitivity_report(
        bp,
        phis=params["phis"],
        t_end=params["t_end"],
        n_max=params["n_max"],
        keep_series=True,
        dt=params["dt"],
    )
    paths = []
    for i, case in enumerate(report.cases):
        case_bp = sb.bath_params(
            params["lam"], params["Gamma"], params["gamma"], params["r"], case.phi
        )
        path = out / f"bath_phi_{i}.csv"
        cio.write_bath_case_csv(path, case, case_bp)
        paths.append(path)
    summary = out / "bath_summary.csv"
    cio.write_bath_summary_csv(summary, report)
    print(
        f"bath: lam = {cio.format_number(params['lam'])}, Gamma = "
        f"{cio.format_number(params['Gamma'])}, gamma = "
        f"{cio.format_number(params['gamma'])}, r = "
        f"{cio.format_number(params['r'])}, gamma_eng = "
        f"{cio.format_number(bp.gamma_eng)}"
    )
    for line in report.lines():
        print("  " + line)
    for path in paths + [summary]:
        print(f"wrote {path}")
    return 0


def _run_wigner(cfg, out):
    params = cfg.params
    beam_params = dict(params)
    checkpoints = beam_params.pop("checkpoints")
    resolution = beam_params.pop("resolution")
    extent = beam_params.pop("extent")
    grids = wg.beam_snapshots(
        _beam_config(beam_params),
        checkpoints=checkpoints,
        x_range=(-extent, extent),
        p_range=(-extent, extent),
        resolution=resolution,
    )
    print(
        f"wigner: snapshots at 0, "
        f"{', '.join(str(k) for k in checkpoints)} atoms, "
        f"{resolution}x{resolution} over [-{cio.format_number(extent)}, "
        f"{cio.format_number(extent)}]^2"
    )
    for count, grid in zip([0] + list(checkpoints), grids):
        path = out / f"wigner_atoms_{count}.grid"
        cio.write_wigner_grid(
            path, grid, metadata={"atoms": count, "n_max": params["n_max"]}
        )
        print(
            f"  atoms {count:4d}: peak = {grid.values.max():8.6f}, "
            f"mass = {grid.total_mass():8.6f}"
        )
        print(f"wrote {path}")
    return 0


def _run_design(cfg, out):
    params = cfg.params
    des = md.design_couplings(
        params["r"],
        phi=params["phi"],
        alpha=complex(params["alpha"]),
        scale=params["scale"],
        threshold=params["threshold"],
    )
    phys, eff, spec, report = des.phys, des.eff, des.spec, des.report
    print(
        f"design: target r = {cio.format_number(params['r'])}, phi = "
        f"{cio.format_number(params['phi'])}, alpha = "
        f"{cio.format_number(complex(params['alpha']))}, scale = "
        f"{cio.format_number(params['scale'])}"
    )
    print("  drives:")
    for name in ("Omega1", "Omega2", "Omega3", "Omega4"):
        print(f"    {name} = {cio.format_number(getattr(phys, name))}")
    for name in ("Delta1", "Delta2", "Delta3", "delta1", "delta2", "delta3"):
        print(f"    {name} = {cio.format_number(getattr(phys, name))}")
    print(
        f"  effective: lambda1 = {cio.format_number(eff.lambda1)}, lambda2 = "
        f"{cio.format_number(eff.lambda2)}, beta = {cio.format_number(eff.beta)}"
    )
    print(
        f"  realized: r = {cio.format_number(spec.r)}, phi = "
        f"{cio.format_number(spec.phi)}, alpha = {cio.format_number(spec.alpha)}"
    )
    flagged = ", ".join(report.flags) if report.flags else "none"
    print(
        f"  regime check (threshold {cio.format_number(report.threshold)}): "
        f"{'passed' if report.passed else 'FLAGGED'} - {flagged}"
    )
    if not report.passed:
        warnings.warn(
            f"regime check flagged: {flagged}", AdvisoryWarning, stacklevel=2
        )
    return 0


def run_validation(n_max=30):
    """The invariant suite behind the validate experiment.

    Returns a list of (name, passed, detail) triples.
    """
    checks = []

    # trace preservation along the engineered-bath master equation
    h = md.build_H_bath(0.04, 1.5, 0.0, 3)
    atom0 = hb.QuantumState(np.array([1.0, 1.0]) / math.sqrt(2), (2,))
    rho0 = hb.tensor_state(atom0, hb.fock(0, 3)).as_mixed()
    channels = [dyn.CollapseChannel(hb.tensor(hb.identity(2), hb.destroy(3)), 40.0)]
    _, series = dyn.evolve_master(
        h,
        channels,
        rho0,
        t_end=20000.0,
        sample_every=80000,
        observables={"trace": hb.identity(8)},
    )
    drift = float(np.max(np.abs(series.channels["trace"] - 1.0)))
    checks.append(
        ("trace preservation", drift < 1e-7, f"max |tr - 1| = {drift:.3g} (tol 1e-07)")
    )

    # Bloch-ball confinement of the adiabatic solution
    bp = sb.bath_params(0.04, 40.0, 0.01, 1.5, math.pi / 2)
    adiab = sb.run_adiabatic(bp, t_end=8000.0)
    norm = np.sqrt(
        adiab.channels["sigma_x"] ** 2
        + adiab.channels["sigma_y"] ** 2
        + adiab.channels["sigma_z"] ** 2
    )
    top = float(np.max(norm))
    checks.append(
        ("bloch-ball confinement", top <= 1 + 1e-8, f"max |s| = {top:.9f}")
    )

    # Wigner grids integrate to one
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        mass_vac = wg.wigner_grid(hb.fock(0, n_max)).total_mass()
        squeezed = md.target_state(0.0, 1.0, 0.0, n_max=max(60, n_max))
        mass_sq = wg.wigner_grid(
            squeezed, x_range=(-6, 6), p_range=(-6, 6)
        ).total_mass()
    ok = abs(mass_vac - 1) < 0.01 and abs(mass_sq - 1) < 0.01
    checks.append(
        (
            "wigner normalization",
            ok,
            f"vacuum {mass_vac:.4f}, squeezed {mass_sq:.4f} (tol 0.01)",
        )
    )

    # squeezed-reservoir correlation saturates |M|^2 = N(N+1)
    devs = []
    for r in np.linspace(0.0, 2.5, 11):
        case = sb.bath_params(0.02, 30.0, 0.0, float(r), 0.7)
        devs.append(abs(abs(case.big_m) ** 2 - case.big_n * (case.big_n + 1)))
    worst = float(max(devs))
    checks.append(
        (
            "squeeze correlation bound",
            worst < 1e-10,
            f"max ||M|^2 - N(N+1)| = {worst:.3g}",
        )
    )

    # design inversion round-trips through the effective couplings
    errs = []
    for r, phi, alpha in (
        (1.0, 0.0, 0.0j),
        (0.8, 1.1, 0.3 + 0.2j),
        (1.5, -2.0, -0.4j),
    ):
        des = md.design_couplings(r, phi=phi, alpha=alpha, scale=0.1)
        spec = md.squeeze_spec(md.effective_params(des.phys))
        wrap = (spec.phi - phi + math.pi) % (2 * math.pi) - math.pi
        errs.extend([abs(spec.r - r), abs(wrap), abs(spec.alpha - alpha)])
    worst = float(max(errs))
    checks.append(
        ("design round-trip", worst < 1e-9, f"max parameter error = {worst:.3g}")
    )
    return checks


def _run_validate(cfg, out):
    checks = run_validation(n_max=cfg.params["n_max"])
    width = max(len(name) for name, _, _ in checks)
    for name, ok, detail in checks:
        print(f"  {name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    failed = [name for name, ok, _ in checks if not ok]
    if failed:
        print(f"validate: {len(failed)} of {len(checks)} checks FAILED")
        return 1
    print(f"validate: all {len(checks)} checks passed")
    return 0


_RUNNERS = {
    "beam": _run_beam,
    "bath": _run_bath,
    "wigner": _run_wigner,
    "design": _run_design,
    "validate": _run_validate,
}


def run(cfg):
    """Execute a RunConfig; returns the process exit code."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _RUNNERS[cfg.experiment](cfg, out)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(_load_config(args), args)
        if args.strict:
            with warnings.catch_warnings():
                warnings.simplefilter("error", AdvisoryWarning)
                return run(cfg)
        return run(cfg)
    except AdvisoryWarning as advisory:
        print(f"advisory escalated by --strict: {advisory}", file=sys.stderr)
        return 2
    except (CavsqueezeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

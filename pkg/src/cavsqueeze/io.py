"""Config files and text artifacts.

Configs are line-oriented ``key = value`` under a single ``[experiment]``
section header; all rates and times are plain numbers in units of g
(g = 1), so values carrying unit suffixes are rejected rather than
guessed at.  Output tables are comma-separated with a header row, LF
line endings and 12 significant digits; Wigner grids are written as
'#'-prefixed header lines followed by one whitespace-separated row per
x-axis point.
"""

import math
import re
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import ConfigError
from .wigner import WignerGrid

# benchmark couplings: tanh r = |lambda1 / lambda2| with r = 1, and
# tau chosen so |lambda| tau = 0.2 in the transformed frame
_BENCH_LAM1 = 0.1 * math.tanh(1.0)
_BENCH_TAU = 2.0 * math.cosh(1.0)

_BEAM_KEYS = {
    "lambda1": ("complex", _BENCH_LAM1),
    "lambda2": ("complex", -0.1),
    "beta": ("complex", 0.0),
    "tau": ("float", _BENCH_TAU),
    "n_atoms": ("int", 200),
    "n_max": ("int", 30),
    "hamiltonian": ("str", "static"),
    "phase_clock": ("str", "global"),
    "kappa": ("float", 0.0),
    "r_at": ("float", None),
    "g": ("float", 1.0),
    "Delta1": ("float", None),
    "Delta2": ("float", None),
    "dt": ("float", None),
}

SCHEMAS = {
    "beam": dict(_BEAM_KEYS),
    "bath": {
        "lam": ("float", 0.04),
        "Gamma": ("float", 40.0),
        "gamma": ("float", 0.0),
        "r": ("float", 1.5),
        "phis": ("floats", (0.0, math.pi / 2, math.pi)),
        "n_max": ("int", 3),
        "t_end": ("float", None),
        "dt": ("float", None),
    },
    "wigner": {
        "lambda1": ("complex", _BENCH_LAM1),
        "lambda2": ("complex", -0.1),
        "beta": ("complex", 0.0),
        "tau": ("float", _BENCH_TAU),
        "n_atoms": ("int", 200),
        "n_max": ("int", 30),
        "hamiltonian": ("str", "static"),
        "kappa": ("float", 0.0),
        "checkpoints": ("ints", (50, 100, 200)),
        "resolution": ("int", 81),
        "extent": ("float", 4.0),
        "dt": ("float", None),
    },
    "design": {
        "r": ("float", 1.0),
        "phi": ("float", 0.0),
        "alpha": ("complex", 0.0),
        "scale": ("float", 0.1),
        "threshold": ("float", 0.15),
    },
    "validate": {
        "n_max": ("int", 30),
    },
}

_UNIT_SUFFIX = re.compile(r"[\d.)]\s*/?\s*[a-zA-Z]+\s*$")


@dataclass
class RunConfig:
    """One experiment with its resolved parameter block."""

    experiment: str
    params: dict = dc_field(default_factory=dict)
    output_dir: str = "."


def default_config(experiment):
    """RunConfig for an experiment with every parameter at its default."""
    if experiment not in SCHEMAS:
        raise ConfigError(
            f"unknown experiment {experiment!r}; "
            f"choose from {', '.join(sorted(SCHEMAS))}"
        )
    params = {key: default for key, (_, default) in SCHEMAS[experiment].items()}
    return RunConfig(experiment=experiment, params=params)


def _parse_scalar(val, kind):
    if kind == "int":
        return int(val, 10)
    if kind == "float":
        return float(val)
    if kind == "complex":
        return complex(val.replace(" ", ""))
    raise AssertionError(kind)


def _parse_value(val, kind, key, lineno):
    if kind == "str":
        return val
    try:
        if kind == "floats":
            out = tuple(float(tok) for tok in val.split(","))
        elif kind == "ints":
            out = tuple(int(tok, 10) for tok in val.split(","))
        else:
            out = _parse_scalar(val, kind)
        return out
    except ValueError:
        pass
    # classify the failure for a useful message
    if kind == "int":
        try:
            float(val)
        except ValueError:
            pass
        else:
            raise ConfigError(f"line {lineno}: key {key!r} expects an integer, got {val!r}")
    if kind in ("int", "float", "floats"):
        try:
            complex(val.replace(" ", ""))
        except ValueError:
            pass
        else:
            raise ConfigError(
                f"line {lineno}: key {key!r} expects a real value, got complex {val!r}"
            )
    if _UNIT_SUFFIX.search(val):
        raise ConfigError(
            f"line {lineno}: value {val!r} for key {key!r} carries a unit "
            f"suffix; rates and times are plain numbers in units of g (g = 1)"
        )
    raise ConfigError(f"line {lineno}: cannot parse {val!r} as {kind} for key {key!r}")


def parse_config(text):
    """Parse the line-oriented config format into a RunConfig.

    One [experiment] section, ``key = value`` lines, '#' comments.
    Unknown sections, unknown keys, duplicate keys and malformed values
    are hard errors naming the offending line.
    """
    experiment = None
    params = {}
    output_dir = "."
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed section header {raw.strip()!r}")
            name = line[1:-1].strip()
            if name not in SCHEMAS:
                raise ConfigError(
                    f"line {lineno}: unknown experiment section [{name}]; "
                    f"choose from {', '.join(sorted(SCHEMAS))}"
                )
            if experiment is not None:
                raise ConfigError(
                    f"line {lineno}: second section [{name}]; exactly one "
                    f"experiment section is allowed"
                )
            experiment = name
            continue
        if experiment is None:
            raise ConfigError(f"line {lineno}: key outside any experiment section")
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in seen:
            raise ConfigError(
                f"line {lineno}: duplicate key {key!r} (first set on line {seen[key]})"
            )
        seen[key] = lineno
        if key == "output_dir":
            if not val:
                raise ConfigError(f"line {lineno}: output_dir must not be empty")
            output_dir = val
            continue
        schema = SCHEMAS[experiment]
        if key not in schema:
            raise ConfigError(
                f"line {lineno}: unknown key {key!r} for experiment {experiment!r}"
            )
        if not val:
            raise ConfigError(f"line {lineno}: key {key!r} has no value")
        params[key] = _parse_value(val, schema[key][0], key, lineno)
    if experiment is None:
        raise ConfigError(
            "no experiment section; start the file with one of "
            + " ".join(f"[{name}]" for name in sorted(SCHEMAS))
        )
    full = {key: default for key, (_, default) in SCHEMAS[experiment].items()}
    full.update(params)
    return RunConfig(experiment=experiment, params=full, output_dir=output_dir)


def _format_value(value, kind):
    if kind == "str":
        return str(value)
    if kind == "int":
        return str(int(value))
    if kind == "ints":
        return ", ".join(str(int(v)) for v in value)
    if kind == "floats":
        return ", ".join(format_number(v) for v in value)
    return format_number(value)


def serialize_config(cfg):
    """Config text that parses back to an equal RunConfig.

    Unset optional parameters (None) stay implicit.
    """
    if cfg.experiment not in SCHEMAS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    lines = [f"[{cfg.experiment}]"]
    for key, (kind, default) in SCHEMAS[cfg.experiment].items():
        value = cfg.params.get(key, default)
        if value is None:
            continue
        lines.append(f"{key} = {_format_value(value, kind)}")
    if cfg.output_dir != ".":
        lines.append(f"output_dir = {cfg.output_dir}")
    return "\n".join(lines) + "\n"


def format_number(value):
    """12-significant-digit text for a real or complex number.

    Negative zeros are flushed so equal values serialize identically.
    """
    if isinstance(value, complex) or isinstance(value, np.complexfloating):
        z = complex(value)
        if z.imag == 0.0:
            return f"{z.real + 0.0:.12g}"
        return f"{z.real + 0.0:.12g}{z.imag + 0.0:+.12g}j"
    return f"{float(value) + 0.0:.12g}"


def _write_metadata(handle, pairs):
    for key, value in pairs:
        if isinstance(value, str):
            handle.write(f"# {key} = {value}\n")
        else:
            handle.write(f"# {key} = {format_number(value)}\n")


def write_beam_csv(path, result):
    """Per-atom observable table with the run's target in the metadata."""
    spec = result.spec
    cfg = result.config
    meta = [
        ("r", spec.r if spec is not None else math.nan),
        ("phi", spec.phi if spec is not None else math.nan),
        ("alpha_re", spec.alpha.real if spec is not None else math.nan),
        ("alpha_im", spec.alpha.imag if spec is not None else math.nan),
        ("lambda_abs", abs(spec.lam) if spec is not None else 0.0),
        ("tau", cfg.tau),
        ("n_atoms", cfg.n_atoms),
        ("n_max", cfg.n_max),
        ("gamma_eng", result.gamma_eng),
        ("hamiltonian", cfg.hamiltonian),
    ]
    with open(path, "w", newline="") as handle:
        _write_metadata(handle, meta)
        handle.write("atom_index,n_mean,var_x1,var_x2,fidelity,purity\n")
        for k in range(len(result.n_mean)):
            row = (
                str(k),
                format_number(result.n_mean[k]),
                format_number(result.var_x1[k]),
                format_number(result.var_x2[k]),
                format_number(result.fidelity[k]),
                format_number(result.purity[k]),
            )
            handle.write(",".join(row) + "\n")


_BATH_COLUMNS = (
    "time",
    "sx_exact",
    "sy_exact",
    "sz_exact",
    "sx_adiabatic",
    "sy_adiabatic",
    "sz_adiabatic",
    "sx_analytic",
)


def write_bath_case_csv(path, case, bp):
    """One squeezing angle: exact, adiabatic and analytic curves."""
    if case.series is None:
        raise ValueError("case carries no series; rerun with keep_series=True")
    meta = [
        ("phi", case.phi),
        ("r", bp.r),
        ("gamma_eng", bp.gamma_eng),
        ("Gamma", bp.Gamma),
        ("gamma", bp.gamma),
        ("lambda_abs", abs(bp.lam)),
    ]
    columns = [case.series[name] for name in _BATH_COLUMNS]
    with open(path, "w", newline="") as handle:
        _write_metadata(handle, meta)
        handle.write(",".join(_BATH_COLUMNS) + "\n")
        for values in zip(*columns):
            handle.write(",".join(format_number(v) for v in values) + "\n")


def write_bath_summary_csv(path, report):
    """Deviation and crossing-time table, one row per squeezing angle."""
    header = (
        "phi,dev_exact_analytic,dev_exact_adiabatic,dev_adiabatic_analytic,"
        "t_half_exact,max_n_field,max_p_above1"
    )
    with open(path, "w", newline="") as handle:
        handle.write(header + "\n")
        for c in report.cases:
            row = (
                c.phi,
                c.dev_exact_analytic,
                c.dev_exact_adiabatic,
                c.dev_adiabatic_analytic,
                c.t_half_exact,
                c.max_n_field,
                c.max_p_above1,
            )
            handle.write(",".join(format_number(v) for v in row) + "\n")


def write_wigner_grid(path, grid, metadata=None):
    """Header lines, axis descriptors, then one row per x-axis point."""
    with open(path, "w", newline="") as handle:
        _write_metadata(handle, list((metadata or {}).items()))
        for note in grid.notes:
            handle.write(f"# note = {note}\n")
        handle.write(
            f"# x: {format_number(grid.x_axis[0])} "
            f"{format_number(grid.x_axis[-1])} {len(grid.x_axis)}\n"
        )
        handle.write(
            f"# p: {format_number(grid.p_axis[0])} "
            f"{format_number(grid.p_axis[-1])} {len(grid.p_axis)}\n"
        )
        for row in grid.values:
            handle.write(" ".join(format_number(v) for v in row) + "\n")


def read_wigner_grid(path):
    """Inverse of write_wigner_grid.

    Returns (WignerGrid, metadata dict of strings).
    """
    metadata = {}
    axes = {}
    rows = []
    with open(path) as handle:
        for raw in handle:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                axis = re.match(r"([xp]):\s+(\S+)\s+(\S+)\s+(\d+)$", body)
                if axis:
                    lo, hi, count = axis.group(2, 3, 4)
                    axes[axis.group(1)] = np.linspace(float(lo), float(hi), int(count))
                elif "=" in body:
                    key, val = (part.strip() for part in body.split("=", 1))
                    metadata[key] = val
                continue
            rows.append([float(tok) for tok in line.split()])
    if "x" not in axes or "p" not in axes:
        raise ConfigError(f"{path}: missing x/p axis descriptors")
    values = np.array(rows)
    if values.shape != (len(axes["x"]), len(axes["p"])):
        raise ConfigError(
            f"{path}: value block is {values.shape}, axes promise "
            f"({len(axes['x'])}, {len(axes['p'])})"
        )
    cell = float(
        (axes["x"][1] - axes["x"][0]) * (axes["p"][1] - axes["p"][0])
    )
    grid = WignerGrid(
        x_axis=axes["x"], p_axis=axes["p"], values=values, cell_area=cell
    )
    return grid, metadata

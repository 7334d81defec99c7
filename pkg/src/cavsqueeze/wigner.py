"""Phase-space maps of field states via the displaced-parity form.

W(x, p) = (2/pi) Tr[rho D(alpha) Pi D_dag(alpha)] with alpha = x + i p,
normalized so the grid sums to 1.  Using Pi D_dag(alpha) Pi = D(alpha)
the trace collapses to Tr[Pi rho D(2 alpha)], which only needs the
displacement matrix elements on the state's own Fock block,

    <m + d| D(beta) |m> = sqrt(m!/(m+d)!) beta^d e^{-|beta|^2 / 2}
                          L_m^{(d)}(|beta|^2).

These are taken in closed form (never by exponentiating the truncated
ladder, whose unitarity reflects amplitude off the cutoff and corrupts
the far field), with the scaled polynomials

    A_m = sqrt(d! m! / (m+d)!) L_m^{(d)}(x)

built by the three-term recurrence

    A_m = [(2m + d - 1 - x) A_{m-1}
           - sqrt((m-1)(m-1+d)) A_{m-2}] / sqrt(m (m+d)),

which keeps every intermediate within float range for any grid the
cutoff can support.  Each diagonal offset d of Pi rho then contributes
one vectorized sweep over the grid, O(dim^2) work per point in total.
"""

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import beam as bm
from . import hilbert as hb
from .errors import ConfigError, TruncationWarning

_NORM_TOL = 0.01


@dataclass
class WignerGrid:
    """Quasiprobability values on a rectangular phase-space grid.

    values[i, j] is W(x_axis[i], p_axis[j]); x = Re alpha and
    p = Im alpha, so the x marginal reproduces the X1 quadrature
    statistics.  cell_area is the Riemann weight dx * dp and
    imag_residue the largest imaginary part discarded when the
    displaced-parity trace was taken (an internal consistency check,
    not physics).
    """

    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    cell_area: float
    imag_residue: float = 0.0
    notes: list = dc_field(default_factory=list)

    def total_mass(self):
        """Riemann sum of the grid; 1 for well-contained states."""
        return float(np.sum(self.values) * self.cell_area)

    def marginal(self, axis):
        """Integrate out one axis; axis is 'x' or 'p'.

        Returns (grid, density) where density integrates to the grid's
        total mass.
        """
        if axis == "x":
            return self.x_axis, self.values.sum(axis=1) * self._dp
        if axis == "p":
            return self.p_axis, self.values.sum(axis=0) * self._dx
        raise ValueError(f"axis must be 'x' or 'p', got {axis!r}")

    @property
    def _dx(self):
        return float(self.x_axis[1] - self.x_axis[0])

    @property
    def _dp(self):
        return float(self.p_axis[1] - self.p_axis[0])


def _axis(rng_pair, resolution, label):
    lo, hi = float(rng_pair[0]), float(rng_pair[1])
    if not hi > lo:
        raise ConfigError(f"{label} range must satisfy max > min, got {rng_pair}")
    return np.linspace(lo, hi, resolution)


def wigner_grid(state, x_range=(-4.0, 4.0), p_range=(-4.0, 4.0), resolution=81):
    """Evaluate the Wigner function of a single-mode state on a grid.

    Parameters
    ----------
    state : QuantumState
        Field-only state (one tensor factor), pure or mixed.
    x_range, p_range : (float, float)
        Axis bounds; alpha = x + i p.
    resolution : int
        Points per axis, at least 2.

    Returns
    -------
    WignerGrid

    Warns
    -----
    TruncationWarning
        When the grid reaches |alpha|^2 > n_max / 2, where the Fock
        cutoff can no longer represent the displaced vacuum reliably.
        The same message is appended to the grid's notes.
    """
    if len(state.dims) != 1:
        raise ConfigError(
            f"wigner_grid expects a single-mode state, got factors {state.dims}"
        )
    if resolution < 2:
        raise ConfigError(f"resolution must be >= 2, got {resolution}")
    n_max = state.dim - 1
    xs = _axis(x_range, resolution, "x")
    ps = _axis(p_range, resolution, "p")

    rho = state.density()
    beta = 2.0 * (xs[:, None] + 1j * ps[None, :])
    babs2 = np.abs(beta) ** 2
    signs = (-1.0) ** np.arange(n_max + 1)

    # Tr[Pi rho D(beta)] = S_0 + 2 Re sum_{d>=1} S_d with
    # S_d = (beta^d / sqrt(d!)) sum_m (-1)^m rho_{m, m+d} A_m; the
    # subdiagonals contribute the conjugates, so only the Hermiticity
    # dirt on rho's main diagonal survives as an imaginary residue
    acc = np.zeros(beta.shape)
    residue = np.zeros(beta.shape)
    prefactor = np.ones(beta.shape, dtype=complex)
    for d in range(n_max + 1):
        if d > 0:
            prefactor = prefactor * beta / np.sqrt(d)
        diag = np.diagonal(rho, offset=d) * signs[: n_max + 1 - d]
        if not np.any(diag):
            continue
        a_prev = np.zeros_like(babs2)
        a_cur = np.ones_like(babs2)
        series = diag[0] * a_cur
        for m in range(1, len(diag)):
            a_next = (
                (2 * m + d - 1 - babs2) * a_cur
                - np.sqrt((m - 1) * (m - 1 + d)) * a_prev
            ) / np.sqrt(m * (m + d))
            a_prev, a_cur = a_cur, a_next
            series = series + diag[m] * a_cur
        contrib = prefactor * series
        if d == 0:
            acc += contrib.real
            residue = np.abs(contrib.imag)
        else:
            acc += 2.0 * contrib.real
    damp = (2.0 / np.pi) * np.exp(-0.5 * babs2)
    vals = damp * acc
    residue = damp * residue

    notes = []
    corner = max(np.max(np.abs(xs)), 0.0) ** 2 + max(np.max(np.abs(ps)), 0.0) ** 2
    if corner > n_max / 2:
        msg = (
            f"grid reaches |alpha|^2 = {corner:.3g}, beyond the "
            f"truncation-reliable n_max / 2 = {n_max / 2:.3g}"
        )
        notes.append(msg)
        warnings.warn(msg, TruncationWarning, stacklevel=2)

    cell = float((xs[1] - xs[0]) * (ps[1] - ps[0]))
    return WignerGrid(
        x_axis=xs,
        p_axis=ps,
        values=vals,
        cell_area=cell,
        imag_residue=float(np.max(residue)),
        notes=notes,
    )


def beam_snapshots(
    cfg,
    checkpoints=(50, 100, 200),
    x_range=(-4.0, 4.0),
    p_range=(-4.0, 4.0),
    resolution=81,
):
    """Wigner grids of the beam-driven field at chosen atom counts.

    Runs the beam once and maps the initial field plus the field after
    each checkpoint atom.  Returns len(checkpoints) + 1 grids, initial
    state first, then the checkpoints in the order given.
    """
    marks = [int(k) for k in checkpoints]
    for k in marks:
        if k < 1 or k > cfg.n_atoms:
            raise ConfigError(
                f"checkpoint {k} outside the run's 1..{cfg.n_atoms} atoms"
            )
    result = bm.run_beam(cfg, capture_at=set(marks) | {0})
    return [
        wigner_grid(
            result.captured[k],
            x_range=x_range,
            p_range=p_range,
            resolution=resolution,
        )
        for k in [0] + marks
    ]

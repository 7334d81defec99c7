"""Time evolution engines: unitary propagation and Lindblad integration.

Both engines use fixed-step classical Runge-Kutta (RK4).  For a constant
Hamiltonian the RK4 update of the linear master equation is itself a
fixed linear map on the vectorized density matrix (the degree-4 Taylor
polynomial of the step generator), so small systems are advanced by
applying that map, composed between sampling points by binary powering.
That path is the same discrete trajectory the step-by-step loop would
produce, up to floating-point associativity, and it makes decay-window
runs with billions of nominal steps affordable.  Time-dependent
Hamiltonians and large spaces take the explicit stepping path.

Step control is deliberately simple: dt defaults to 0.05 over the
largest Hamiltonian norm (and the largest decay rate, for the master
equation); supplying a dt with dt * scale > 0.1 is an error rather than
a warning, since fixed-step RK4 silently degrades beyond that.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import hilbert as hb
from .errors import (
    DimensionMismatchError,
    NormDriftError,
    StateValidationError,
    StepSizeError,
    UnphysicalBathError,
)

_STEP_FRACTION = 0.05
_STEP_LIMIT = 0.1
_TRACE_TOL = 1e-7
_HERM_TOL = 1e-7
_NORM_TOL = 1e-8
_POSITIVITY_FLOOR = -1e-6
_SUPEROP_DIM_LIMIT = 32


@dataclass(frozen=True)
class CollapseChannel:
    """A Lindblad jump operator with its decay rate."""

    op: hb.Operator
    rate: float

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError(f"collapse rate must be >= 0, got {self.rate}")


@dataclass
class TimeSeries:
    """Uniformly sampled observables along one evolution.

    Attributes
    ----------
    times : ndarray
        Strictly increasing sample times (units 1/g).
    channels : dict of str to ndarray
        One sequence per named observable, aligned with times.
    meta : dict
        Run parameters worth carrying to output files.
    """

    times: np.ndarray
    channels: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.ndim != 1:
            raise ValueError("times must be a 1-d array")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        self.channels = {k: np.asarray(v) for k, v in self.channels.items()}
        for name, vals in self.channels.items():
            if len(vals) != len(self.times):
                raise ValueError(
                    f"channel {name!r} has {len(vals)} samples for "
                    f"{len(self.times)} times"
                )

    def __len__(self):
        return len(self.times)


def _as_h_fn(h):
    """Normalize a Hamiltonian source to (callable, static matrix or None)."""
    if isinstance(h, hb.Operator):
        mat = h.mat
        return (lambda t: mat), mat
    if callable(h):
        def fn(t, _h=h):
            op = _h(t)
            return op.mat if isinstance(op, hb.Operator) else np.asarray(op)

        return fn, None
    raise TypeError("Hamiltonian must be an Operator or a callable t -> Operator")


def _max_h_norm(h_fn, static_mat, t0, t_end):
    if static_mat is not None:
        return float(np.linalg.norm(static_mat, 2))
    ts = np.linspace(t0, t_end, 33)
    return max(float(np.linalg.norm(h_fn(t), 2)) for t in ts)


def _resolve_steps(span, dt, max_h, rate_max):
    """Pick (n_steps, h_step) honoring the stability bound."""
    scale = max(max_h, rate_max)
    if dt is None:
        if scale <= 0.0:
            return 1, span
        dt = _STEP_FRACTION / scale
    else:
        if dt <= 0:
            raise StepSizeError(f"dt must be positive, got {dt}")
        if dt * scale > _STEP_LIMIT * (1 + 1e-12):
            raise StepSizeError(
                f"dt = {dt:g} violates dt * max(|H|, rate) = "
                f"{dt * scale:g} <= {_STEP_LIMIT}"
            )
    n_steps = max(1, math.ceil(span / dt - 1e-9))
    return n_steps, span / n_steps


def _rk4_step(rhs, t, h_step, y):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h_step, y + (0.5 * h_step) * k1)
    k3 = rhs(t + 0.5 * h_step, y + (0.5 * h_step) * k2)
    k4 = rhs(t + h_step, y + h_step * k3)
    return y + (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def propagate_unitary(h, state0, t_end, dt=None, t0=0.0):
    """Integrate the Schrodinger (pure) or von Neumann (mixed) equation.

    Parameters
    ----------
    h : Operator or callable t -> Operator
        Hamiltonian; time-dependent sources are sampled at the RK4
        substage times.
    state0 : QuantumState
    t_end : float
        Final time; evolution runs over [t0, t_end].
    dt : float, optional
        Step size.  Defaults to 0.05 / max|H|; values with
        dt * max|H| > 0.1 raise StepSizeError.

    Returns
    -------
    QuantumState
        State at t_end, same kind as the input.  Pure-state norm drift
        beyond 1e-8 during the run raises NormDriftError; the returned
        state is renormalized (the drift is RK4's slight contraction).
    """
    if t_end < t0:
        raise ValueError("t_end must be >= t0")
    h_fn, static = _as_h_fn(h)
    if state0.dim != (static.shape[0] if static is not None else h_fn(t0).shape[0]):
        raise DimensionMismatchError("Hamiltonian and state dimensions differ")
    if t_end == t0:
        return state0

    span = t_end - t0
    max_h = _max_h_norm(h_fn, static, t0, t_end)
    n_steps, h_step = _resolve_steps(span, dt, max_h, 0.0)

    if state0.kind == "pure":
        psi = np.array(state0.data)

        def rhs(t, y):
            return -1j * (h_fn(t) @ y)

        t = t0
        for _ in range(n_steps):
            psi = _rk4_step(rhs, t, h_step, psi)
            t += h_step
            drift = abs(np.linalg.norm(psi) - 1.0)
            if drift > _NORM_TOL:
                raise NormDriftError(
                    f"pure-state norm drifted by {drift:.3g} "
                    f"(> {_NORM_TOL}); reduce dt or split the run"
                )
        psi = psi / np.linalg.norm(psi)
        return hb.QuantumState(psi, state0.dims, kind="pure")

    rho = np.array(state0.data)

    def rhs(t, y):
        hm = h_fn(t)
        return -1j * (hm @ y - y @ hm)

    t = t0
    for _ in range(n_steps):
        rho = _rk4_step(rhs, t, h_step, rho)
        t += h_step
    tr = np.trace(rho).real
    if abs(tr - 1.0) > _TRACE_TOL:
        raise NormDriftError(f"trace drifted by {abs(tr - 1.0):.3g} (> {_TRACE_TOL})")
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return hb.QuantumState(rho, state0.dims, kind="mixed")


def apply_liouvillian(h, channels, rho):
    """One right-hand-side evaluation of the master equation.

    Testing and analysis hook: returns -i[H, rho] plus the dissipators
    sum (rate/2)(2 L rho Ldag - LdagL rho - rho LdagL) as a plain array.
    """
    hm = h.mat if isinstance(h, hb.Operator) else np.asarray(h)
    rho = np.asarray(rho)
    out = -1j * (hm @ rho - rho @ hm)
    for ch in channels:
        lm = ch.op.mat
        ldl = lm.conj().T @ lm
        out = out + (ch.rate / 2.0) * (
            2.0 * (lm @ rho @ lm.conj().T) - ldl @ rho - rho @ ldl
        )
    return out


def _vec_liouvillian(h_mat, channels):
    """Row-major vectorized generator: vec(A rho B) = (A kron B^T) vec(rho)."""
    d = h_mat.shape[0]
    eye = np.eye(d)
    gen = -1j * (np.kron(h_mat, eye) - np.kron(eye, h_mat.T))
    for ch in channels:
        lm = ch.op.mat
        ldl = lm.conj().T @ lm
        gen = gen + (ch.rate / 2.0) * (
            2.0 * np.kron(lm, lm.conj())
            - np.kron(ldl, eye)
            - np.kron(eye, ldl.T)
        )
    return gen


def _rk4_step_map(gen, h_step):
    """The exact linear map one RK4 step applies to a linear system."""
    z = h_step * gen
    out = np.eye(gen.shape[0], dtype=complex)
    term = np.eye(gen.shape[0], dtype=complex)
    for k in (1, 2, 3, 4):
        term = term @ z / k
        out = out + term
    return out


def _mat_power(mat, k):
    """mat**k by binary powering."""
    out = np.eye(mat.shape[0], dtype=complex)
    base = mat
    while k > 0:
        if k & 1:
            out = out @ base
        base = base @ base
        k >>= 1
    return out


def plan_steps(h, channels, t0, t_end, dt=None):
    """Preview the (n_steps, step) an evolve_master call would take.

    Useful for choosing sample_every when the run length is set by the
    physics (pass the returned step back as dt to keep them in sync).
    """
    if t_end <= t0:
        raise ValueError("t_end must be > t0")
    h_fn, static = _as_h_fn(h)
    max_h = _max_h_norm(h_fn, static, t0, t_end)
    rate_max = max((ch.rate for ch in channels), default=0.0)
    return _resolve_steps(t_end - t0, dt, max_h, rate_max)


def _sample_steps(n_steps, sample_every):
    """Step indices at which observables are recorded (always 0 and end)."""
    if sample_every is None:
        marks = [0, n_steps]
    else:
        sample_every = int(sample_every)
        if sample_every < 1:
            raise ValueError("sample_every must be >= 1")
        marks = list(range(0, n_steps + 1, sample_every))
        if marks[-1] != n_steps:
            marks.append(n_steps)
    return marks


def evolve_master(
    h,
    channels,
    rho0,
    t_end,
    dt=None,
    sample_every=None,
    observables=None,
    check_positivity=False,
    t0=0.0,
):
    """Integrate the Lindblad master equation.

    Parameters
    ----------
    h : Operator or callable t -> Operator
    channels : sequence of CollapseChannel
    rho0 : QuantumState
        Pure inputs are promoted to density matrices.
    t_end, t0 : float
        Evolution window [t0, t_end].
    dt : float, optional
        Step; defaults to 0.05 / max(|H|, rates).  Oversized steps raise
        StepSizeError.
    sample_every : int, optional
        Record observables every that many steps (plus the endpoints).
        Default records the endpoints only.
    observables : dict of str to Operator, optional
        Named expectation values to record at sample times.
    check_positivity : bool
        Also verify the smallest eigenvalue of rho stays above -1e-6 at
        sample times.

    Returns
    -------
    (QuantumState, TimeSeries)
        Final state (mixed kind, renormalized) and the sampled series.

    Notes
    -----
    Trace drift beyond 1e-7 or Hermiticity drift beyond 1e-7 at any
    sample time raises.  For a constant Hamiltonian on a space of
    dimension <= 32 the evolution is advanced with the exact per-step
    RK4 map of the vectorized generator (binary-powered between sample
    times); the trajectory is the plain RK4 one.
    """
    if t_end < t0:
        raise ValueError("t_end must be >= t0")
    channels = list(channels)
    for ch in channels:
        if not isinstance(ch, CollapseChannel):
            raise TypeError("channels must be CollapseChannel instances")
    h_fn, static = _as_h_fn(h)
    dim = static.shape[0] if static is not None else h_fn(t0).shape[0]
    if rho0.dim != dim:
        raise DimensionMismatchError("Hamiltonian and state dimensions differ")
    for ch in channels:
        if ch.op.dim != dim:
            raise DimensionMismatchError("collapse operator dimension differs")

    rho = np.array(rho0.density())
    observables = dict(observables or {})
    obs_mats = {name: op.mat for name, op in observables.items()}

    if t_end == t0:
        times = np.array([t0])
        data = {name: np.array([np.trace(m @ rho)]) for name, m in obs_mats.items()}
        return (
            hb.QuantumState(rho, rho0.dims, kind="mixed"),
            TimeSeries(times, data, meta={"dt": 0.0, "n_steps": 0}),
        )

    span = t_end - t0
    max_h = _max_h_norm(h_fn, static, t0, t_end)
    rate_max = max((ch.rate for ch in channels), default=0.0)
    n_steps, h_step = _resolve_steps(span, dt, max_h, rate_max)
    marks = _sample_steps(n_steps, sample_every)

    times = []
    data = {name: [] for name in obs_mats}

    def record_and_check(step, rho_now):
        t_now = t0 + step * h_step
        tr = np.trace(rho_now)
        if abs(tr - 1.0) > _TRACE_TOL:
            raise NormDriftError(
                f"trace drifted by {abs(tr - 1.0):.3g} at t = {t_now:g}"
            )
        herm = np.max(np.abs(rho_now - rho_now.conj().T))
        if herm > _HERM_TOL:
            raise StateValidationError(
                f"density matrix Hermiticity drifted by {herm:.3g} at t = {t_now:g}"
            )
        if check_positivity:
            low = float(np.linalg.eigvalsh(0.5 * (rho_now + rho_now.conj().T))[0])
            if low < _POSITIVITY_FLOOR:
                raise StateValidationError(
                    f"density matrix eigenvalue {low:.3g} below {_POSITIVITY_FLOOR} "
                    f"at t = {t_now:g}"
                )
        times.append(t_now)
        for name, m in obs_mats.items():
            data[name].append(complex(np.trace(m @ rho_now)))

    use_map = static is not None and dim <= _SUPEROP_DIM_LIMIT
    if use_map:
        gen = _vec_liouvillian(static, channels)
        step_map = _rk4_step_map(gen, h_step)
        power_cache = {}
        vec = rho.reshape(-1)
        record_and_check(0, rho)
        for prev, nxt in zip(marks[:-1], marks[1:]):
            jump = nxt - prev
            if jump not in power_cache:
                power_cache[jump] = _mat_power(step_map, jump)
            vec = power_cache[jump] @ vec
            rho = vec.reshape(dim, dim)
            record_and_check(nxt, rho)
    else:
        def rhs(t, y):
            hm = h_fn(t)
            out = -1j * (hm @ y - y @ hm)
            for lm, ldl, rate in chan_mats:
                out = out + (rate / 2.0) * (
                    2.0 * (lm @ y @ lm.conj().T) - ldl @ y - y @ ldl
                )
            return out

        chan_mats = [
            (ch.op.mat, ch.op.mat.conj().T @ ch.op.mat, ch.rate) for ch in channels
        ]
        record_and_check(0, rho)
        mark_set = set(marks)
        t = t0
        for step in range(1, n_steps + 1):
            rho = _rk4_step(rhs, t, h_step, rho)
            t += h_step
            if step in mark_set:
                record_and_check(step, rho)

    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    series = TimeSeries(
        np.array(times),
        {name: np.array(vals) for name, vals in data.items()},
        meta={"dt": h_step, "n_steps": n_steps},
    )
    return hb.QuantumState(rho, rho0.dims, kind="mixed"), series


def evolve_effective_atom(
    gamma_eng,
    big_n,
    big_m,
    gamma,
    rho_at0,
    t_end,
    dt=None,
    sample_every=None,
    sample_points=2000,
    t0=0.0,
):
    """Two-level dynamics under a broadband squeezed reservoir.

    The generator is the phase-sensitive Lindbladian with thermal-like
    weight N and correlation M,

        (gamma_eng/2) [ (N+1) D[sigma_minus] + N D[sigma_plus] ] rho
        - (gamma_eng/2) [ 2 M sigma_plus rho sigma_plus
                          + 2 M* sigma_minus rho sigma_minus ]
        + (gamma/2) D[sigma_minus] rho,

    with D[L] rho = 2 L rho Ldag - LdagL rho - rho LdagL.  An ideal
    engineered bath has N = sinh^2 r and |M| = sinh r cosh r, saturating
    |M|^2 = N(N+1).

    Records <sigma_x>, <sigma_y>, <sigma_z>.  The sign convention is
    sigma_y = i(sigma_minus - sigma_plus), under which the polarization
    equations of motion read

        d<sx>/dt = -(gamma_eng/2) [(2N+1+2|M|cos phi)<sx> - 2|M|sin phi <sy>]
                   - (gamma/2)<sx>,

    and symmetrically for <sy> with cos phi negated, phi = arg M.

    Raises
    ------
    UnphysicalBathError
        If |M|^2 > N(N+1), or any rate is negative.
    """
    big_n = float(big_n)
    big_m = complex(big_m)
    if gamma_eng < 0 or gamma < 0 or big_n < 0:
        raise UnphysicalBathError("rates and N must be nonnegative")
    if abs(big_m) ** 2 > big_n * (big_n + 1.0) + 1e-12:
        raise UnphysicalBathError(
            f"|M|^2 = {abs(big_m) ** 2:.6g} exceeds N(N+1) = "
            f"{big_n * (big_n + 1.0):.6g}"
        )
    if rho_at0.dim != 2:
        raise DimensionMismatchError("effective-atom evolution needs a 2-level state")
    if t_end < t0:
        raise ValueError("t_end must be >= t0")

    sm = hb.sigma_minus().mat
    sp = hb.sigma_plus().mat
    eye = np.eye(2)

    def dissipator(lm):
        ldl = lm.conj().T @ lm
        return (
            2.0 * np.kron(lm, lm.conj()) - np.kron(ldl, eye) - np.kron(eye, ldl.T)
        )

    gen = (gamma_eng / 2.0) * (
        (big_n + 1.0) * dissipator(sm) + big_n * dissipator(sp)
    )
    gen = gen - (gamma_eng / 2.0) * (
        2.0 * big_m * np.kron(sp, sp.T) + 2.0 * np.conj(big_m) * np.kron(sm, sm.T)
    )
    gen = gen + (gamma / 2.0) * dissipator(sm)

    rate_scale = gamma_eng * (2.0 * big_n + 1.0 + 2.0 * abs(big_m)) + gamma
    span = t_end - t0
    if span == 0.0 or rate_scale == 0.0:
        n_steps, h_step = 1, span if span > 0 else 1.0
    else:
        n_steps, h_step = _resolve_steps(span, dt, 0.0, rate_scale)
    marks = _sample_steps(
        n_steps,
        sample_every
        if sample_every is not None
        else max(1, n_steps // max(1, sample_points)),
    )

    sx = hb.sigma_x().mat
    sy = hb.sigma_y().mat
    sz = hb.sigma_z().mat

    step_map = _rk4_step_map(gen, h_step)
    power_cache = {}
    vec = np.array(rho_at0.density()).reshape(-1)
    times = []
    xs, ys, zs = [], [], []

    def record(step):
        rho = vec.reshape(2, 2)
        tr = np.trace(rho)
        if abs(tr - 1.0) > _TRACE_TOL:
            raise NormDriftError(f"trace drifted by {abs(tr - 1.0):.3g}")
        times.append(t0 + (step * h_step if span > 0 else 0.0))
        xs.append(float(np.real(np.trace(sx @ rho))))
        ys.append(float(np.real(np.trace(sy @ rho))))
        zs.append(float(np.real(np.trace(sz @ rho))))

    record(0)
    if span > 0:
        for prev, nxt in zip(marks[:-1], marks[1:]):
            jump = nxt - prev
            if jump not in power_cache:
                power_cache[jump] = _mat_power(step_map, jump)
            vec = power_cache[jump] @ vec
            record(nxt)

    return TimeSeries(
        np.array(times),
        {
            "sigma_x": np.array(xs),
            "sigma_y": np.array(ys),
            "sigma_z": np.array(zs),
        },
        meta={
            "gamma_eng": float(gamma_eng),
            "big_n": big_n,
            "big_m": big_m,
            "gamma": float(gamma),
            "dt": h_step,
            "n_steps": n_steps,
        },
    )

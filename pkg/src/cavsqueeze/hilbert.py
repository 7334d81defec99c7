"""Dense operators and states on truncated atom-field Hilbert spaces.

Everything downstream builds on this module: Fock-space ladder operators,
few-level atomic operators, Kronecker composition with the fixed ordering
atom (first factor) tensor field (second factor), displacement and squeeze
unitaries, and the handful of expectation-value helpers the simulations
need.  All matrices are dense complex double precision and immutable after
construction.

Sign convention for squeezing, used everywhere downstream:

    squeeze(xi) = expm((xi a_dag^2 - conj(xi) a^2) / 2),   xi = r e^{i phi}

so that S(xi)^dag a S(xi) = a cosh r + a_dag e^{i phi} sinh r, and the
squeezed vacuum S(r)|0> (phi = 0) has quadrature variances
(dX1)^2 = e^{2r}/4 and (dX2)^2 = e^{-2r}/4 with X1 = (a + a_dag)/2,
X2 = -i(a - a_dag)/2.
"""

import warnings

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    StateValidationError,
    TruncationWarning,
)

GROUND = 0
EXCITED = 1
AUX = 2

_PURE_NORM_TOL = 1e-10
_HERM_TOL = 1e-10
_TRACE_TOL = 1e-8
_DIAG_TOL = 1e-10


class HilbertConfig:
    """Truncation bookkeeping for a composite atom-field space.

    Parameters
    ----------
    n_max : int
        Highest retained Fock level; the field factor has dimension
        n_max + 1.
    atom_levels : int
        Number of atomic levels, 2 or 3.
    """

    __slots__ = ("n_max", "atom_levels")

    def __init__(self, n_max, atom_levels=2):
        n_max = int(n_max)
        atom_levels = int(atom_levels)
        if n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {n_max}")
        if atom_levels not in (2, 3):
            raise ValueError(f"atom_levels must be 2 or 3, got {atom_levels}")
        self.n_max = n_max
        self.atom_levels = atom_levels

    @property
    def field_dim(self):
        return self.n_max + 1

    @property
    def dim(self):
        return self.atom_levels * (self.n_max + 1)

    @property
    def dims(self):
        return (self.atom_levels, self.n_max + 1)

    def __repr__(self):
        return f"HilbertConfig(n_max={self.n_max}, atom_levels={self.atom_levels})"


class Operator:
    """Dense operator on a finite Hilbert space.

    Parameters
    ----------
    mat : (d, d) array_like
        Complex matrix elements.
    dims : tuple of int, optional
        Dimensions of the tensor factors; their product must equal d.
        Defaults to the single factor (d,).

    Notes
    -----
    The stored matrix is a read-only copy, so operators can be shared
    freely between simulations.
    """

    __slots__ = ("mat", "dims")

    def __init__(self, mat, dims=None):
        m = np.array(mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(
                f"operator matrix must be square, got shape {m.shape}"
            )
        if dims is None:
            dims = (m.shape[0],)
        dims = tuple(int(d) for d in dims)
        if int(np.prod(dims)) != m.shape[0]:
            raise DimensionMismatchError(
                f"factor dims {dims} do not multiply to matrix side {m.shape[0]}"
            )
        m.flags.writeable = False
        self.mat = m
        self.dims = dims

    @property
    def dim(self):
        return self.mat.shape[0]

    def dag(self):
        """Hermitian conjugate."""
        return Operator(self.mat.conj().T, self.dims)

    def is_hermitian(self, tol=1e-10):
        return bool(np.max(np.abs(self.mat - self.mat.conj().T)) <= tol)

    def is_unitary(self, tol=1e-10):
        eye = np.eye(self.dim)
        return bool(np.max(np.abs(self.mat @ self.mat.conj().T - eye)) <= tol)

    def spectral_norm(self):
        """Largest singular value, used for integrator step bounds."""
        return float(np.linalg.norm(self.mat, 2))

    def _check_same_space(self, other):
        if self.dims != other.dims:
            raise DimensionMismatchError(
                f"operators live on different spaces: {self.dims} vs {other.dims}"
            )

    def __add__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._check_same_space(other)
        return Operator(self.mat + other.mat, self.dims)

    def __sub__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._check_same_space(other)
        return Operator(self.mat - other.mat, self.dims)

    def __neg__(self):
        return Operator(-self.mat, self.dims)

    def __mul__(self, scalar):
        if isinstance(scalar, Operator):
            return NotImplemented
        return Operator(self.mat * complex(scalar), self.dims)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Operator(self.mat / complex(scalar), self.dims)

    def __matmul__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        self._check_same_space(other)
        return Operator(self.mat @ other.mat, self.dims)

    def __repr__(self):
        return f"Operator(dim={self.dim}, dims={self.dims})"


class QuantumState:
    """Pure state vector or density matrix.

    Parameters
    ----------
    data : array_like
        1-d amplitudes for a pure state, or a square density matrix.
    dims : tuple of int, optional
        Tensor-factor dimensions, defaults to a single factor.
    kind : {'pure', 'mixed'}, optional
        Inferred from the array rank when omitted.

    Raises
    ------
    StateValidationError
        Pure states must be normalized within 1e-10.  Density matrices
        must be Hermitian within 1e-10, have unit trace within 1e-8 and
        diagonal entries >= -1e-10.
    """

    __slots__ = ("data", "dims", "kind")

    def __init__(self, data, dims=None, kind=None):
        arr = np.array(data, dtype=complex)
        if kind is None:
            kind = "pure" if arr.ndim == 1 else "mixed"
        if kind == "pure":
            if arr.ndim != 1:
                raise StateValidationError("pure state must be a 1-d amplitude vector")
            norm = np.linalg.norm(arr)
            if abs(norm - 1.0) > _PURE_NORM_TOL:
                raise StateValidationError(
                    f"pure state norm {norm:.12g} deviates from 1 beyond {_PURE_NORM_TOL}"
                )
            side = arr.shape[0]
        elif kind == "mixed":
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise StateValidationError("density matrix must be square")
            herm = np.max(np.abs(arr - arr.conj().T))
            if herm > _HERM_TOL:
                raise StateValidationError(
                    f"density matrix non-Hermitian by {herm:.3g}"
                )
            tr = np.trace(arr)
            if abs(tr - 1.0) > _TRACE_TOL:
                raise StateValidationError(
                    f"density matrix trace {tr:.12g} deviates from 1 beyond {_TRACE_TOL}"
                )
            diag_min = float(np.min(arr.diagonal().real))
            if diag_min < -_DIAG_TOL:
                raise StateValidationError(
                    f"density matrix diagonal entry {diag_min:.3g} below -{_DIAG_TOL}"
                )
            side = arr.shape[0]
        else:
            raise StateValidationError(f"unknown state kind {kind!r}")
        if dims is None:
            dims = (side,)
        dims = tuple(int(d) for d in dims)
        if int(np.prod(dims)) != side:
            raise DimensionMismatchError(
                f"factor dims {dims} do not multiply to state dimension {side}"
            )
        arr.flags.writeable = False
        self.data = arr
        self.dims = dims
        self.kind = kind

    @property
    def dim(self):
        return self.data.shape[0]

    def density(self):
        """Density matrix as a plain ndarray, regardless of kind."""
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return np.asarray(self.data)

    def as_mixed(self):
        """Promote to a mixed-kind state (no-op copy if already mixed)."""
        if self.kind == "mixed":
            return self
        return QuantumState(self.density(), self.dims, kind="mixed")

    def __repr__(self):
        return f"QuantumState(kind={self.kind!r}, dim={self.dim}, dims={self.dims})"


def destroy(n_max):
    """Annihilation operator on the Fock space {|0>, ..., |n_max>}.

    <n-1|a|n> = sqrt(n) for 1 <= n <= n_max, all other entries zero.
    """
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    mat = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)
    return Operator(mat, (n_max + 1,))


def create(n_max):
    """Creation operator, Hermitian conjugate of destroy(n_max)."""
    return destroy(n_max).dag()


def number(n_max):
    """Photon-number operator diag(0, 1, ..., n_max)."""
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    return Operator(np.diag(np.arange(n_max + 1, dtype=float)), (n_max + 1,))


def parity(n_max):
    """Photon-number parity operator diag((-1)^n)."""
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    signs = np.where(np.arange(n_max + 1) % 2 == 0, 1.0, -1.0)
    return Operator(np.diag(signs), (n_max + 1,))


def quad_x1(n_max):
    """Quadrature X1 = (a + a_dag)/2."""
    a = destroy(n_max)
    return 0.5 * (a + a.dag())


def quad_x2(n_max):
    """Quadrature X2 = -i(a - a_dag)/2."""
    a = destroy(n_max)
    return -0.5j * (a - a.dag())


def identity(dims):
    """Identity operator; dims is an int or a tuple of factor dims."""
    if np.isscalar(dims):
        dims = (int(dims),)
    dims = tuple(int(d) for d in dims)
    d = int(np.prod(dims))
    return Operator(np.eye(d), dims)


def atomic_projector(l, m, levels=2):
    """Atomic transition operator |l><m| on a `levels`-dimensional atom."""
    levels = int(levels)
    if not (0 <= l < levels and 0 <= m < levels):
        raise ValueError(f"level indices ({l}, {m}) out of range for {levels} levels")
    mat = np.zeros((levels, levels))
    mat[l, m] = 1.0
    return Operator(mat, (levels,))


def sigma_minus(levels=2):
    """Lowering operator |g><e|."""
    return atomic_projector(GROUND, EXCITED, levels)


def sigma_plus(levels=2):
    """Raising operator |e><g|."""
    return atomic_projector(EXCITED, GROUND, levels)


def sigma_x(levels=2):
    return sigma_minus(levels) + sigma_plus(levels)


def sigma_y(levels=2):
    # sigma_pm = (sigma_x +- i sigma_y)/2 fixes the sign
    return 1j * (sigma_minus(levels) - sigma_plus(levels))


def sigma_z(levels=2):
    """Population inversion |e><e| - |g><g|."""
    return atomic_projector(EXCITED, EXCITED, levels) - atomic_projector(
        GROUND, GROUND, levels
    )


def tensor(a, b):
    """Kronecker product of two operators.

    The artifact-wide ordering convention is atom as the first factor and
    field as the second; every composite operator in the package is built
    through this function to keep that ordering consistent.
    """
    return Operator(np.kron(a.mat, b.mat), a.dims + b.dims)


def tensor_state(a, b):
    """Tensor product of two states; mixed if either factor is mixed."""
    if a.kind == "pure" and b.kind == "pure":
        return QuantumState(np.kron(a.data, b.data), a.dims + b.dims, kind="pure")
    return QuantumState(
        np.kron(a.density(), b.density()), a.dims + b.dims, kind="mixed"
    )


def expm(op):
    """Matrix exponential of an Operator (scaling and squaring)."""
    if not np.all(np.isfinite(op.mat)):
        raise ValueError("expm requires finite matrix entries")
    return Operator(scipy.linalg.expm(op.mat), op.dims)


def fock(n, n_max):
    """Number state |n> on the truncated Fock space."""
    n = int(n)
    n_max = int(n_max)
    if not (0 <= n <= n_max):
        raise ValueError(f"Fock index {n} outside [0, {n_max}]")
    vec = np.zeros(n_max + 1)
    vec[n] = 1.0
    return QuantumState(vec, (n_max + 1,), kind="pure")


def atom_basis(level, levels=2):
    """Atomic basis state |level>."""
    levels = int(levels)
    if not (0 <= level < levels):
        raise ValueError(f"level {level} out of range for {levels} levels")
    vec = np.zeros(levels)
    vec[level] = 1.0
    return QuantumState(vec, (levels,), kind="pure")


def displacement(alpha, n_max):
    """Displacement operator D(alpha) = expm(alpha a_dag - conj(alpha) a).

    Warns when |alpha|^2 exceeds n_max/4; the truncated matrix stops
    being reliably unitary well before |alpha|^2 reaches n_max.
    """
    alpha = complex(alpha)
    if abs(alpha) ** 2 > n_max / 4:
        warnings.warn(
            f"displacement with |alpha|^2 = {abs(alpha) ** 2:.3g} at n_max = {n_max} "
            "is close to the truncation edge",
            TruncationWarning,
            stacklevel=2,
        )
    a = destroy(n_max)
    return expm(alpha * a.dag() - np.conj(alpha) * a)


def squeeze(xi, n_max):
    """Squeeze operator S(xi) = expm((xi a_dag^2 - conj(xi) a^2) / 2).

    With xi = r e^{i phi} this convention gives
    S(xi)^dag a S(xi) = a cosh r + a_dag e^{i phi} sinh r, so the phi = 0
    squeezed vacuum S(r)|0> has (dX1)^2 = e^{2r}/4 and (dX2)^2 = e^{-2r}/4.
    Warns when sinh^2 r exceeds n_max/2 (mean photon number too close to
    the cutoff for faithful moments).
    """
    xi = complex(xi)
    r = abs(xi)
    if np.sinh(r) ** 2 > n_max / 2:
        warnings.warn(
            f"squeeze with sinh^2(r) = {np.sinh(r) ** 2:.3g} at n_max = {n_max} "
            "is close to the truncation edge",
            TruncationWarning,
            stacklevel=2,
        )
    a = destroy(n_max)
    ad = a.dag()
    return expm(0.5 * (xi * (ad @ ad) - np.conj(xi) * (a @ a)))


def partial_trace(state, keep):
    """Reduced state of one factor of a two-factor composite.

    Parameters
    ----------
    state : QuantumState
        State on a space with exactly two tensor factors (atom, field).
        Pure states are promoted to density matrices first.
    keep : {'atom', 'field'}
        Which factor survives; 'atom' is factor 0, 'field' is factor 1.

    Returns
    -------
    QuantumState
        Mixed-kind reduced density matrix; trace is preserved.
    """
    if len(state.dims) != 2:
        raise DimensionMismatchError(
            f"partial_trace needs exactly 2 factors, state has dims {state.dims}"
        )
    da, df = state.dims
    rho = state.density().reshape(da, df, da, df)
    if keep == "atom":
        red = np.einsum("ijkj->ik", rho)
        dims = (da,)
    elif keep == "field":
        red = np.einsum("ijil->jl", rho)
        dims = (df,)
    else:
        raise ValueError(f"keep must be 'atom' or 'field', got {keep!r}")
    # guard against accumulated asymmetry before validation
    red = 0.5 * (red + red.conj().T)
    return QuantumState(red, dims, kind="mixed")


def apply_unitary(u, state):
    """U |psi> for pure states, U rho U_dag for mixed states."""
    if u.dim != state.dim:
        raise DimensionMismatchError(
            f"unitary dim {u.dim} does not match state dim {state.dim}"
        )
    if state.kind == "pure":
        vec = u.mat @ state.data
        vec = vec / np.linalg.norm(vec)
        return QuantumState(vec, state.dims, kind="pure")
    rho = u.mat @ state.data @ u.mat.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return QuantumState(rho, state.dims, kind="mixed")


def expect(op, state):
    """Expectation value Tr(rho op); complex in general."""
    if op.dim != state.dim:
        raise DimensionMismatchError(
            f"operator dim {op.dim} does not match state dim {state.dim}"
        )
    if state.kind == "pure":
        return complex(np.vdot(state.data, op.mat @ state.data))
    return complex(np.trace(op.mat @ state.data))


def variance(op, state):
    """<op^2> - <op>^2 for a Hermitian observable; returns a real float."""
    mean = expect(op, state)
    second = expect(op @ op, state)
    return float((second - mean**2).real)


def fidelity(state, target):
    """Overlap <psi|rho|psi> with a pure target state."""
    if target.kind != "pure":
        raise ValueError("fidelity target must be a pure state")
    if state.dim != target.dim:
        raise DimensionMismatchError(
            f"state dim {state.dim} does not match target dim {target.dim}"
        )
    if state.kind == "pure":
        return float(abs(np.vdot(target.data, state.data)) ** 2)
    return float(np.real(np.vdot(target.data, state.data @ target.data)))


def purity(state):
    """Tr(rho^2); exactly 1.0 for pure-kind states."""
    if state.kind == "pure":
        return 1.0
    rho = state.data
    return float(np.real(np.sum(rho * rho.T)))

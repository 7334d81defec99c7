"""Drive parameters, effective couplings and Hamiltonian builders.

The physical setting is a three-level atom in a Lambda configuration
whose two lower levels |g>, |e> are coupled to a common auxiliary level
|i> by four classical drives and one cavity mode, all far detuned from
the auxiliary level.  Adiabatic elimination of |i> leaves an effective
two-level dynamics containing three processes at tunable strengths:

    anti-JC   lambda1 a sigma_minus + h.c.     (joint lowering)
    JC        lambda2 a_dag sigma_minus + h.c. (excitation exchange)
    rotation  beta sigma_minus + h.c.

A Bogoliubov transformation of the field (displacement then squeeze)
maps the static effective Hamiltonian onto a plain Jaynes-Cummings form
whenever |lambda1| < |lambda2|; the transformation parameters (r, phi,
alpha) are the squeezing and displacement of the protected target state.

Everything is expressed in units of the atom-cavity coupling g: rates in
g, times in 1/g, hbar = 1.
"""

from dataclasses import dataclass, field

import numpy as np

from . import hilbert as hb
from .errors import (
    DesignError,
    DimensionMismatchError,
    InfiniteSqueezingError,
    TruncationLossError,
)
from .errors import TruncationWarning
import warnings

_BARE_FIELDS = (
    "omega_g",
    "omega_e",
    "omega_i",
    "omega_c",
    "omega_1",
    "omega_2",
    "omega_3",
    "omega_4",
)


@dataclass(frozen=True)
class PhysicalParams:
    """Drive amplitudes and detunings of the Lambda scheme.

    Parameters
    ----------
    g : complex
        Atom-cavity coupling; the package unit scale.
    Omega1, Omega2, Omega3, Omega4 : complex
        Classical Rabi amplitudes.  Drives 1, 3 address the |g>-|i| leg,
        drives 2, 4 the |e>-|i> leg.
    Delta1, Delta2, Delta3 : float
        Large one-photon detunings from the auxiliary level, one per
        Raman channel; must be nonzero.
    delta1, delta2, delta3 : float
        Small two-photon detunings left over in each channel.
    omega_g ... omega_4 : float, optional
        Bare frequencies (levels, cavity, drives).  Only used by
        :meth:`bare_frequency_residuals` to cross-check the detuning
        definitions; simulations never read them.
    """

    g: complex = 1.0
    Omega1: complex = 0.0
    Omega2: complex = 0.0
    Omega3: complex = 0.0
    Omega4: complex = 0.0
    Delta1: float = 100.0
    Delta2: float = 150.0
    Delta3: float = 200.0
    delta1: float = 0.0
    delta2: float = 0.0
    delta3: float = 0.0
    omega_g: float | None = None
    omega_e: float | None = None
    omega_i: float | None = None
    omega_c: float | None = None
    omega_1: float | None = None
    omega_2: float | None = None
    omega_3: float | None = None
    omega_4: float | None = None

    def __post_init__(self):
        for name in ("Delta1", "Delta2", "Delta3"):
            if getattr(self, name) == 0.0:
                raise ValueError(f"{name} must be nonzero (dispersive regime)")

    def bare_frequency_residuals(self):
        """Residuals of the detuning definitions against bare frequencies.

        Each large detuning has two equivalent closed forms (cavity side
        and drive side); all six residuals vanish for a consistent
        frequency assignment.

        Returns
        -------
        dict of str to float
        """
        missing = [n for n in _BARE_FIELDS if getattr(self, n) is None]
        if missing:
            raise ValueError(f"bare frequencies missing: {', '.join(missing)}")
        w_ig = self.omega_i - self.omega_g
        w_ie = self.omega_i - self.omega_e
        return {
            "Delta1_cavity": self.Delta1 - (self.omega_c - w_ie),
            "Delta1_drive": self.Delta1 - (self.omega_1 - w_ig - self.delta1),
            "Delta2_cavity": self.Delta2 - (w_ig - self.omega_c - self.delta2),
            "Delta2_drive": self.Delta2 - (w_ie - self.omega_2),
            "Delta3_drive_g": self.Delta3 - (w_ig - self.omega_3 - self.delta3),
            "Delta3_drive_e": self.Delta3 - (w_ie - self.omega_4),
        }


@dataclass(frozen=True)
class EffectiveParams:
    """Couplings of the adiabatically eliminated two-level model."""

    lambda1: complex = 0.0
    lambda2: complex = 0.0
    beta: complex = 0.0
    varpi_g: float = 0.0
    varpi_e: float = 0.0


@dataclass(frozen=True)
class SqueezeSpec:
    """Bogoliubov parameters extracted from a set of effective couplings.

    Attributes
    ----------
    r : float
        Squeezing factor, tanh r = |lambda_sub / lambda_dom|.
    phi : float
        Squeezing angle in (-pi, pi], fixed by the requirement that the
        transformed Hamiltonian contains a single ladder process.
    alpha : complex
        Displacement solving alpha lambda1 + conj(alpha) lambda2 = -beta.
    lam : complex
        Transformed coupling lambda_dom / cosh r (keeps the dominant
        coupling's phase).
    dominant : str
        'lambda2' when the excitation-exchange coupling dominates (the
        transformed Hamiltonian is the JC form lam a_dag sigma_minus +
        h.c., and a normalizable dark state exists); 'lambda1' when the
        joint-lowering coupling dominates (anti-JC form, no dark state).
    eff : EffectiveParams
        The couplings the spec was extracted from.
    """

    r: float
    phi: float
    alpha: complex
    lam: complex
    dominant: str
    eff: EffectiveParams = field(repr=False, default=EffectiveParams())

    @property
    def xi(self):
        """Complex squeeze argument r e^{i phi}."""
        return self.r * np.exp(1j * self.phi)


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of the dispersive-regime bookkeeping.

    ratios are small-is-good (flagged above the threshold), separations
    are large-is-good (flagged below it), residuals are small-is-good
    and normalized by the largest effective coupling.
    """

    threshold: float
    ratios: dict
    separations: dict
    residuals: dict
    flags: tuple
    passed: bool

    def lines(self):
        """Human-readable report, one string per quantity."""
        out = []
        for name, val in sorted(self.ratios.items()):
            mark = "FLAG" if name in self.flags else "ok"
            out.append(f"ratio      {name:<22} {val:10.4g}  [{mark}]")
        for name, val in sorted(self.separations.items()):
            mark = "FLAG" if name in self.flags else "ok"
            out.append(f"separation {name:<22} {val:10.4g}  [{mark}]")
        for name, val in sorted(self.residuals.items()):
            mark = "FLAG" if name in self.flags else "ok"
            out.append(f"residual   {name:<22} {val:10.4g}  [{mark}]")
        verdict = "pass" if self.passed else "FAIL"
        out.append(f"regime check: {verdict} at threshold {self.threshold:g}")
        return out


@dataclass(frozen=True)
class DesignResult:
    """Drive configuration realizing a requested target state."""

    phys: PhysicalParams
    eff: EffectiveParams
    spec: SqueezeSpec
    report: ValidityReport


def effective_params(phys):
    """Closed-form effective couplings of the eliminated dynamics.

    lambda1 = g Omega1* / Delta1, lambda2 = -g* Omega2 / Delta2,
    beta = -Omega3* Omega4 / Delta3, and the level shifts
    varpi_g = |Omega1|^2/Delta1 - |Omega3|^2/Delta3,
    varpi_e = -|Omega2|^2/Delta2 - |Omega4|^2/Delta3.
    """
    g = complex(phys.g)
    lam1 = g * np.conj(phys.Omega1) / phys.Delta1
    lam2 = -np.conj(g) * complex(phys.Omega2) / phys.Delta2
    beta = -np.conj(phys.Omega3) * complex(phys.Omega4) / phys.Delta3
    varpi_g = abs(phys.Omega1) ** 2 / phys.Delta1 - abs(phys.Omega3) ** 2 / phys.Delta3
    varpi_e = (
        -abs(phys.Omega2) ** 2 / phys.Delta2 - abs(phys.Omega4) ** 2 / phys.Delta3
    )
    return EffectiveParams(
        lambda1=complex(lam1),
        lambda2=complex(lam2),
        beta=complex(beta),
        varpi_g=float(varpi_g),
        varpi_e=float(varpi_e),
    )


def detuning_condition_deltas(eff):
    """Small detunings that cancel the residual level shifts.

    Returns (delta1, delta2, delta3) with delta1 = -delta2 = -delta3 =
    varpi_e - varpi_g, the choice that makes the rotating-frame effective
    Hamiltonian time independent.
    """
    d1 = eff.varpi_e - eff.varpi_g
    return (d1, -d1, -d1)


def _branch_angle(z):
    """np.angle with the branch pinned to (-pi, pi] (negative-zero imaginary
    parts otherwise land on -pi); also flushes -0.0 to 0.0."""
    ang = float(np.angle(z))
    return np.pi if ang == -np.pi else ang + 0.0


def squeeze_spec(eff):
    """Extract (r, phi, alpha, lam) from effective couplings.

    The larger-magnitude coupling takes the surviving-ladder role; which
    one it was is recorded in ``dominant``.  Only the lambda2-dominant
    case maps onto the excitation-exchange (JC) form with its dark state;
    the mirrored case is returned for completeness with the same formal
    r, phi, |lam| definitions.

    Raises
    ------
    InfiniteSqueezingError
        If |lambda1| = |lambda2| (r would diverge and the displacement
        system is singular), or both couplings vanish.
    """
    lam1 = complex(eff.lambda1)
    lam2 = complex(eff.lambda2)
    beta = complex(eff.beta)
    scale_sq = abs(lam1) ** 2 + abs(lam2) ** 2
    if scale_sq == 0.0:
        raise InfiniteSqueezingError("both ladder couplings vanish")
    det = abs(lam1) ** 2 - abs(lam2) ** 2
    if abs(det) < 1e-12 * scale_sq:
        raise InfiniteSqueezingError(
            "|lambda1| = |lambda2| admits no normalizable squeezed frame"
        )

    if abs(lam2) > abs(lam1):
        dominant, lam_dom, lam_sub = "lambda2", lam2, lam1
    else:
        dominant, lam_dom, lam_sub = "lambda1", lam1, lam2

    ratio = lam_sub / lam_dom
    r = float(np.arctanh(abs(ratio)))
    if abs(ratio) == 0.0:
        phi = 0.0
    elif dominant == "lambda2":
        # kill the joint-lowering term: tanh r e^{-i phi} = -lambda1/lambda2
        phi = _branch_angle(-np.conj(ratio))
    else:
        # kill the excitation-exchange term: tanh r e^{i phi} = -lambda2/lambda1
        phi = _branch_angle(-ratio)
    lam = lam_dom / np.cosh(r)

    # alpha from the real 2x2 form of alpha lam1 + conj(alpha) lam2 = -beta
    p, q = lam1.real, lam1.imag
    u, v = lam2.real, lam2.imag
    mat = np.array([[p + u, v - q], [q + v, p - u]])
    rhs = np.array([-beta.real, -beta.imag])
    sol = np.linalg.solve(mat, rhs)
    alpha = complex(sol[0], sol[1])

    return SqueezeSpec(
        r=r, phi=phi, alpha=alpha, lam=complex(lam), dominant=dominant, eff=eff
    )


def check_regime(phys, n_bar=0.0, threshold=0.1):
    """Bookkeeping for the dispersive-elimination assumptions.

    Collects the drive-to-detuning ratios |Omega_i|/|Delta|, the
    cavity-coupling ratios |g| sqrt(n_bar)/|Delta_1,2|, the inverse drive
    strengths |g|/|Omega_i|, the pairwise detuning separations among
    active channels, and the residuals of the small-detuning matching
    condition (normalized by the largest effective coupling).  Report
    only; nothing is raised.
    """
    ratios = {}
    separations = {}
    residuals = {}
    flags = []

    own_delta = {1: phys.Delta1, 2: phys.Delta2, 3: phys.Delta3, 4: phys.Delta3}
    omegas = {
        1: complex(phys.Omega1),
        2: complex(phys.Omega2),
        3: complex(phys.Omega3),
        4: complex(phys.Omega4),
    }
    g = complex(phys.g)
    for i, om in omegas.items():
        if om == 0:
            continue
        ratios[f"Omega{i}_over_Delta"] = abs(om) / abs(own_delta[i])
        if g != 0:
            ratios[f"g_over_Omega{i}"] = abs(g) / abs(om)
    if g != 0:
        ratios["g_nbar_over_Delta1"] = abs(g) * np.sqrt(n_bar) / abs(phys.Delta1)
        ratios["g_nbar_over_Delta2"] = abs(g) * np.sqrt(n_bar) / abs(phys.Delta2)

    active = set()
    if omegas[1] != 0 or g != 0:
        active.add(1)
    if omegas[2] != 0 or g != 0:
        active.add(2)
    if omegas[3] != 0 or omegas[4] != 0:
        active.add(3)
    deltas = {1: phys.Delta1, 2: phys.Delta2, 3: phys.Delta3}
    for k in sorted(active):
        for l in sorted(active):
            if l <= k:
                continue
            sep = abs(abs(deltas[k]) - abs(deltas[l])) / max(
                abs(deltas[k]), abs(deltas[l])
            )
            separations[f"Delta{k}_Delta{l}"] = sep

    eff = effective_params(phys)
    scale = max(abs(eff.lambda1), abs(eff.lambda2), abs(eff.beta))
    raw = {
        "delta1_plus_delta2": abs(phys.delta1 + phys.delta2),
        "delta1_plus_delta3": abs(phys.delta1 + phys.delta3),
        "delta1_minus_shift_gap": abs(phys.delta1 - (eff.varpi_e - eff.varpi_g)),
    }
    for name, val in raw.items():
        residuals[name] = val / scale if scale > 0 else val

    for name, val in ratios.items():
        if val > threshold:
            flags.append(name)
    for name, val in separations.items():
        if val < threshold:
            flags.append(name)
    for name, val in residuals.items():
        if val > threshold:
            flags.append(name)

    return ValidityReport(
        threshold=float(threshold),
        ratios=ratios,
        separations=separations,
        residuals=residuals,
        flags=tuple(flags),
        passed=not flags,
    )


def design_couplings(
    r,
    phi=0.0,
    alpha=0.0,
    scale=0.1,
    g=1.0,
    Delta1=100.0,
    Delta2=150.0,
    Delta3=200.0,
    n_bar=None,
    threshold=0.15,
):
    """Choose drive amplitudes that realize a target (r, phi, alpha).

    The excitation-exchange coupling is placed at ``-scale`` (the natural
    sign for real positive drives) and the joint-lowering coupling at
    ``scale tanh(r) e^{-i phi}``, which makes squeeze_spec of the
    resulting couplings return the target exactly.  The rotation drives
    are sized to meet the displacement constraint, and the small
    detunings are set to cancel the residual level shifts.

    Parameters
    ----------
    r, phi, alpha : target squeezing factor, angle and displacement.
    scale : float
        Magnitude of the dominant effective coupling, in units of g.
    g, Delta1, Delta2, Delta3 : cavity coupling and channel detunings.
    n_bar : float, optional
        Mean photon number used in the regime check; defaults to the
        target state's sinh^2 r + |alpha|^2.
    threshold : float
        Regime-check threshold; the returned report may carry flags, the
        caller decides whether they are fatal.

    Returns
    -------
    DesignResult

    Raises
    ------
    DesignError
        For unreachable targets (r < 0, nonpositive scale, drives so
        strong the dispersive expansion is meaningless).
    """
    if r < 0:
        raise DesignError(f"squeezing factor must be >= 0, got {r}")
    if scale <= 0:
        raise DesignError(f"coupling scale must be positive, got {scale}")
    g = complex(g)
    if g == 0:
        raise DesignError("cavity coupling g must be nonzero")
    if scale / abs(g) > 0.5:
        raise DesignError(
            f"scale {scale:g} needs |Omega/Delta| > 0.5, outside the dispersive regime"
        )
    alpha = complex(alpha)

    lam2 = -scale + 0.0j
    lam1 = scale * np.tanh(r) * np.exp(-1j * phi)
    beta = -(alpha * lam1 + np.conj(alpha) * lam2)

    # invert the closed forms for the drive amplitudes
    Omega1 = np.conj(lam1 * Delta1 / g)
    Omega2 = -lam2 * Delta2 / np.conj(g)
    if beta == 0:
        Omega3 = 0.0j
        Omega4 = 0.0j
    else:
        Omega3 = complex(np.sqrt(abs(beta) * abs(Delta3)))
        Omega4 = -beta * Delta3 / np.conj(Omega3)
        if abs(Omega3) / abs(Delta3) > 0.5:
            raise DesignError(
                f"displacement {alpha} needs |Omega3/Delta3| > 0.5, "
                "outside the dispersive regime"
            )

    varpi_g = abs(Omega1) ** 2 / Delta1 - abs(Omega3) ** 2 / Delta3
    varpi_e = -abs(Omega2) ** 2 / Delta2 - abs(Omega4) ** 2 / Delta3
    d1 = varpi_e - varpi_g
    phys = PhysicalParams(
        g=g,
        Omega1=complex(Omega1),
        Omega2=complex(Omega2),
        Omega3=complex(Omega3),
        Omega4=complex(Omega4),
        Delta1=float(Delta1),
        Delta2=float(Delta2),
        Delta3=float(Delta3),
        delta1=float(d1),
        delta2=float(-d1),
        delta3=float(-d1),
    )
    eff = effective_params(phys)
    spec = squeeze_spec(eff)
    if n_bar is None:
        n_bar = float(np.sinh(r) ** 2 + abs(alpha) ** 2)
    report = check_regime(phys, n_bar=n_bar, threshold=threshold)
    return DesignResult(phys=phys, eff=eff, spec=spec, report=report)


def _resolve_space(space, levels):
    """Accept an int n_max or a HilbertConfig with matching atom_levels."""
    if isinstance(space, hb.HilbertConfig):
        if space.atom_levels != levels:
            raise DimensionMismatchError(
                f"this Hamiltonian needs a {levels}-level atom space, "
                f"got atom_levels={space.atom_levels}"
            )
        return space.n_max
    return int(space)


def build_H_interaction(phys, t, space):
    """Full interaction-picture Hamiltonian on the three-level atom.

    Both Raman legs carry the cavity coupling and two classical drives,
    each rotating at its own detuning:

        [g a e^{i(Delta2+delta2)t} + Omega1 e^{-i(Delta1+delta1)t}
           + Omega3 e^{i(Delta3+delta3)t}] |i><g|
      + [g a e^{-i Delta1 t} + Omega2 e^{i Delta2 t}
           + Omega4 e^{i Delta3 t}] |i><e|  + h.c.

    ``space`` is an int n_max or a 3-level HilbertConfig.
    """
    n_max = _resolve_space(space, 3)
    a = hb.destroy(n_max)
    eye_f = hb.identity(n_max + 1)
    g = complex(phys.g)

    leg_g = (
        g * np.exp(1j * (phys.Delta2 + phys.delta2) * t) * a
        + (
            complex(phys.Omega1) * np.exp(-1j * (phys.Delta1 + phys.delta1) * t)
            + complex(phys.Omega3) * np.exp(1j * (phys.Delta3 + phys.delta3) * t)
        )
        * eye_f
    )
    leg_e = (
        g * np.exp(-1j * phys.Delta1 * t) * a
        + (
            complex(phys.Omega2) * np.exp(1j * phys.Delta2 * t)
            + complex(phys.Omega4) * np.exp(1j * phys.Delta3 * t)
        )
        * eye_f
    )
    h = hb.tensor(hb.atomic_projector(hb.AUX, hb.GROUND, 3), leg_g) + hb.tensor(
        hb.atomic_projector(hb.AUX, hb.EXCITED, 3), leg_e
    )
    return h + h.dag()


def interaction_hamiltonian_fn(phys, space):
    """Callable t -> build_H_interaction(phys, t, space)."""
    return lambda t: build_H_interaction(phys, t, space)


def build_H_eff_dispersive(eff, deltas, t, space, g=1.0, Delta1=None, Delta2=None):
    """Effective two-level Hamiltonian in its rotating dispersive form.

    The ladder couplings rotate at the small detunings,

        [lambda1 a e^{i delta1 t} + lambda2 a_dag e^{-i delta2 t}
           + beta e^{-i delta3 t}] sigma_minus + h.c.,

    on top of the level shifts varpi_g sigma_gg + varpi_e sigma_ee.  When
    Delta1 and Delta2 are supplied the photon-number Stark terms
    -|g|^2/Delta2 n sigma_gg + |g|^2/Delta1 n sigma_ee are kept as well;
    they are the part the strong-drive argument discards.

    Parameters
    ----------
    eff : EffectiveParams
    deltas : (delta1, delta2, delta3)
    t : float
    space : int n_max or 2-level HilbertConfig
    g, Delta1, Delta2 : Stark-term data, optional.
    """
    n_max = _resolve_space(space, 2)
    d1, d2, d3 = deltas
    a = hb.destroy(n_max)
    eye_f = hb.identity(n_max + 1)
    n_op = hb.number(n_max)

    shift_g = eff.varpi_g * eye_f
    shift_e = eff.varpi_e * eye_f
    if Delta1 is not None and Delta2 is not None:
        g2 = abs(complex(g)) ** 2
        shift_g = shift_g - (g2 / Delta2) * n_op
        shift_e = shift_e + (g2 / Delta1) * n_op
    h = hb.tensor(hb.atomic_projector(hb.GROUND, hb.GROUND, 2), shift_g) + hb.tensor(
        hb.atomic_projector(hb.EXCITED, hb.EXCITED, 2), shift_e
    )

    ladder = (
        complex(eff.lambda1) * np.exp(1j * d1 * t) * a
        + complex(eff.lambda2) * np.exp(-1j * d2 * t) * a.dag()
        + complex(eff.beta) * np.exp(-1j * d3 * t) * eye_f
    )
    coupling = hb.tensor(hb.sigma_minus(), ladder)
    return h + coupling + coupling.dag()


def dispersive_hamiltonian_fn(eff, deltas, space, g=1.0, Delta1=None, Delta2=None):
    """Callable t -> build_H_eff_dispersive(...).

    The time-independent pieces and the three coupling components are
    assembled once; each call only rescales them by the running phases,
    which keeps repeated-evaluation loops (RK4 substages) cheap.
    """
    n_max = _resolve_space(space, 2)
    d1, d2, d3 = deltas
    h0 = build_H_eff_dispersive(
        EffectiveParams(0.0, 0.0, 0.0, eff.varpi_g, eff.varpi_e),
        deltas,
        0.0,
        n_max,
        g=g,
        Delta1=Delta1,
        Delta2=Delta2,
    )
    a = hb.destroy(n_max)
    comp1 = hb.tensor(hb.sigma_minus(), a)
    comp2 = hb.tensor(hb.sigma_minus(), a.dag())
    comp3 = hb.tensor(hb.sigma_minus(), hb.identity(n_max + 1))
    lam1, lam2, beta = complex(eff.lambda1), complex(eff.lambda2), complex(eff.beta)

    def h_fn(t):
        ladder = (
            (lam1 * np.exp(1j * d1 * t)) * comp1
            + (lam2 * np.exp(-1j * d2 * t)) * comp2
            + (beta * np.exp(-1j * d3 * t)) * comp3
        )
        return h0 + ladder + ladder.dag()

    return h_fn


def build_H_eff_static(eff, space):
    """Time-independent effective form (lambda1 a + lambda2 a_dag + beta)
    sigma_minus + h.c., valid once the small detunings cancel the level
    shifts."""
    n_max = _resolve_space(space, 2)
    a = hb.destroy(n_max)
    ladder = (
        complex(eff.lambda1) * a
        + complex(eff.lambda2) * a.dag()
        + complex(eff.beta) * hb.identity(n_max + 1)
    )
    coupling = hb.tensor(hb.sigma_minus(), ladder)
    return coupling + coupling.dag()


def build_H_transformed(lam, space):
    """Excitation-exchange form lam a_dag sigma_minus + conj(lam) a
    sigma_plus reached in the displaced squeezed frame.  Conserves
    a_dag a + sigma_ee."""
    n_max = _resolve_space(space, 2)
    a = hb.destroy(n_max)
    term = complex(lam) * hb.tensor(hb.sigma_minus(), a.dag())
    return term + term.dag()


def build_H_bath(lam, r, phi, space):
    """Engineered-bath form lam R a_dag + conj(lam) R_dag a with the
    Bogoliubov-mixed atomic operator R = cosh(r) sigma_minus -
    e^{i phi} sinh(r) sigma_plus.

    Identical to build_H_eff_static(eff with beta=0) when (lam, r, phi)
    come from squeeze_spec(eff) and the dominant coupling is real; a
    complex dominant coupling changes the two forms by a photon-number
    phase gauge only.
    """
    n_max = _resolve_space(space, 2)
    a = hb.destroy(n_max)
    big_r = np.cosh(r) * hb.sigma_minus() - np.sinh(r) * np.exp(1j * phi) * hb.sigma_plus()
    term = complex(lam) * hb.tensor(big_r, a.dag())
    return term + term.dag()


def target_state(alpha, r, phi, n_max=30):
    """Displaced squeezed vacuum D(alpha) S(r e^{i phi}) |0>.

    Built on a guard space roughly twice the requested cutoff, then
    projected down and renormalized.  The projected-out tail is the
    truncation loss; losses above 1e-6 warn, above 1e-3 raise (the state
    would no longer be trustworthy for fidelity targets).
    """
    n_max = int(n_max)
    n_guard = 2 * n_max + 10
    xi = r * np.exp(1j * phi)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        s = hb.squeeze(xi, n_guard)
        vec = s.mat[:, 0]
        if alpha != 0:
            vec = hb.displacement(alpha, n_guard).mat @ vec
    kept = vec[: n_max + 1]
    loss = 1.0 - float(np.linalg.norm(kept) ** 2)
    if loss >= 1e-3:
        raise TruncationLossError(
            f"target state loses {loss:.3g} of its population above n_max={n_max}"
        )
    if loss >= 1e-6:
        warnings.warn(
            f"target state truncation loss {loss:.3g} at n_max={n_max}",
            TruncationWarning,
            stacklevel=2,
        )
    kept = kept / np.linalg.norm(kept)
    return hb.QuantumState(kept, (n_max + 1,), kind="pure")


def transform_to_jc_frame(h, spec, n_max=None):
    """Conjugate a composite Hamiltonian into the displaced squeezed frame.

    Returns V_dag h V with V = I_atom x (D(alpha) S(xi)); applied to the
    static effective form with spec = squeeze_spec(eff) and dominant
    lambda2, this produces build_H_transformed(spec.lam) on the Fock
    levels far enough below the cutoff.
    """
    if n_max is None:
        n_max = h.dims[-1] - 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        v_field = hb.displacement(spec.alpha, n_max) @ hb.squeeze(spec.xi, n_max)
    v = hb.tensor(hb.identity(h.dims[0]), v_field)
    return v.dag() @ h @ v

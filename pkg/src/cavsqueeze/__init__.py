"""Reservoir engineering simulations in cavity QED.

Two protocols are implemented on top of a common dense-operator core: a
dispersively driven atomic beam that relaxes the cavity field toward a
displaced squeezed vacuum, and an engineered squeezed reservoir acting on
a single two-level atom in a strongly damped cavity.
"""

__version__ = "0.1.0"

from .hilbert import (
    AUX,
    EXCITED,
    GROUND,
    HilbertConfig,
    Operator,
    QuantumState,
    apply_unitary,
    atom_basis,
    atomic_projector,
    create,
    destroy,
    displacement,
    expect,
    expm,
    fidelity,
    fock,
    identity,
    number,
    parity,
    partial_trace,
    purity,
    quad_x1,
    quad_x2,
    sigma_minus,
    sigma_plus,
    sigma_x,
    sigma_y,
    sigma_z,
    squeeze,
    tensor,
    tensor_state,
    variance,
)
from .model import (
    DesignResult,
    EffectiveParams,
    PhysicalParams,
    SqueezeSpec,
    ValidityReport,
    build_H_bath,
    build_H_eff_dispersive,
    build_H_eff_static,
    build_H_interaction,
    build_H_transformed,
    check_regime,
    design_couplings,
    detuning_condition_deltas,
    dispersive_hamiltonian_fn,
    effective_params,
    interaction_hamiltonian_fn,
    squeeze_spec,
    target_state,
    transform_to_jc_frame,
)
from .dynamics import (
    CollapseChannel,
    TimeSeries,
    apply_liouvillian,
    evolve_effective_atom,
    evolve_master,
    propagate_unitary,
)
from .beam import (
    BeamConfig,
    BeamResult,
    TransformReport,
    engineered_rate,
    run_beam,
    transformed_picture_check,
)
from .squeezedbath import (
    BathParams,
    PhaseCase,
    PhaseSensitivityReport,
    bath_params,
    block_equations_rhs,
    phase_sensitivity_report,
    run_adiabatic,
    run_exact,
    sigma_x_analytic,
)
from .wigner import (
    WignerGrid,
    beam_snapshots,
    wigner_grid,
)
from .io import (
    RunConfig,
    default_config,
    parse_config,
    serialize_config,
)
from .errors import (
    AdvisoryWarning,
    CavsqueezeError,
    ConfigError,
    DesignError,
    NormDriftError,
    TruncationLossError,
    TruncationWarning,
)

"""Truncated Fock-space simulator of the Kalamidas signaling apparatus.

A single photon is split between a left pair of modes and a right pair, and
coherent states may be injected on two auxiliary right modes. The package
evolves the full six-mode state, reduces it to the left pair, and verifies
numerically that nothing done on the right (injection, unitaries, projective
or generalized measurements without record) moves the left reduced state.
"""
from .channels import (
    PROBABILITY_FLOOR,
    KrausFamily,
    OccupationScan,
    ProjectorFamily,
    apply_right_unitary,
    conditional_left_by_occupation,
    kraus_nonselective,
    occupation_projectors,
    projective_nonselective,
    random_kraus,
    random_right_unitary,
    selective_outcome,
)
from .experiment import (
    DEFAULT_CUTOFF_MARGIN,
    ExperimentConfig,
    Report,
    default_cutoffs,
    direct_final_state,
    evolve,
    heisenberg_residuals,
    initial_state_bare,
    initial_state_with_coherent,
    run_experiment,
)
from .hilbert import (
    LEFT_LABELS,
    MODE_LABELS,
    MODES,
    RIGHT_LABELS,
    DensityOperator,
    HilbertSpec,
    LinearOperator,
    ModeId,
    PureState,
    apply,
    basis_state,
    embed,
    identity,
    inner,
    ladder,
    mode,
    number_op,
    vacuum,
)
from .nosignal import (
    Observable,
    analytic_left_expectation,
    expectation,
    random_left_observable,
    reduce_left,
    signaling_gap,
    spectral_norm,
    trace_distance,
)
from .optics import (
    BeamSplitter,
    CoherentAmplitude,
    CutoffAdequacyWarning,
    adequate_cutoff,
    beamsplitter_unitary,
    coherent_series,
    coherent_state,
    displacement_unitary,
    heisenberg_action,
)

__version__ = "0.1.0"

__all__ = [
    "PROBABILITY_FLOOR",
    "KrausFamily",
    "OccupationScan",
    "ProjectorFamily",
    "apply_right_unitary",
    "conditional_left_by_occupation",
    "kraus_nonselective",
    "occupation_projectors",
    "projective_nonselective",
    "random_kraus",
    "random_right_unitary",
    "selective_outcome",
    "DEFAULT_CUTOFF_MARGIN",
    "ExperimentConfig",
    "Report",
    "default_cutoffs",
    "direct_final_state",
    "evolve",
    "heisenberg_residuals",
    "initial_state_bare",
    "initial_state_with_coherent",
    "run_experiment",
    "LEFT_LABELS",
    "MODE_LABELS",
    "MODES",
    "RIGHT_LABELS",
    "DensityOperator",
    "HilbertSpec",
    "LinearOperator",
    "ModeId",
    "PureState",
    "apply",
    "basis_state",
    "embed",
    "identity",
    "inner",
    "ladder",
    "mode",
    "number_op",
    "vacuum",
    "Observable",
    "analytic_left_expectation",
    "expectation",
    "random_left_observable",
    "reduce_left",
    "signaling_gap",
    "spectral_norm",
    "trace_distance",
    "BeamSplitter",
    "CoherentAmplitude",
    "CutoffAdequacyWarning",
    "adequate_cutoff",
    "beamsplitter_unitary",
    "coherent_series",
    "coherent_state",
    "displacement_unitary",
    "heisenberg_action",
    "__version__",
]

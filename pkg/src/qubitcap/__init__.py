"""Holevo capacity of qubit channels with diagonal contraction and z-axis shift."""
from .classifier import (
    Classification,
    SubCase,
    Tag,
    classify,
    compute_A,
    lambda_m,
    radial_extremum,
)
from .entropy_bloch import (
    BlochVector,
    ChannelParams,
    amplitude_damping,
    apply_channel,
    extremal_channel,
    f,
    f_prime,
    g,
    h,
    is_cptp,
    relative_entropy,
    shifted_depolarizing,
    von_neumann_entropy,
)
from .estimator import HolevoCapacityTransformer, RegimeClassifier
from .exceptions import (
    DivergenceError,
    DomainError,
    NotCPTPError,
    QubitCapError,
    SamplingError,
    SolverError,
)
from .oracle import (
    OracleConfig,
    oracle_best_k_state,
    oracle_capacity_minmax,
    sample_cptp,
    two_three_gap,
)
from .solver import (
    CapacitySolution,
    Ensemble,
    Regime,
    check_maximal_distance,
    cond1_solve,
    cond2_solve,
    holevo_capacity,
    holevo_information,
    output_state,
    resolve_indeterminate,
    root_lhs,
    three_state_solve,
)

__version__ = "0.1.0"

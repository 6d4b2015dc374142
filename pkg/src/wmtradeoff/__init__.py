"""Simulator and analysis toolkit for the qubit weak-measurement tradeoff
between information gain and state reversibility (6*gmax + prev = 4 on the
boundary of the parameter square)."""

from ._version import __version__
from .qubit import (
    DensityMatrix,
    Operator2,
    PureState,
    STATE_H,
    STATE_V,
    StokesVector,
    apply_operator,
    density_from_stokes,
    density_of_state,
    make_state,
    pure_overlap,
    state_fidelity,
    stokes_of_state,
)
from .measurement import (
    OutcomeRecord,
    WeakMeasurement,
    analytic_gmax,
    analytic_prev,
    kraus_pair,
    optimal_guess,
    outcome_distribution,
    per_state_gain,
    per_state_reversal_prob,
    reversal_operator,
    tradeoff_sum,
)
from .bench import (
    CountRecord,
    EstimationError,
    HwpSettings,
    NoiseModel,
    TomographyResult,
    angles_from_wm,
    complementary_settings,
    estimate_gmax_from_counts,
    estimate_prev_from_counts,
    reversal_settings,
    simulate_counts,
    simulate_tomography,
    wm_from_angles,
    zeta,
)
from .sweeps import (
    CheckResult,
    OperatorGrid,
    OracleEstimate,
    StateGrid,
    SweepReport,
    TradeoffPoint,
    cross_section,
    grid_sweep,
    haar_average_oracle,
    reversal_fidelity_sweep,
    state_sweep,
    verify,
)

__all__ = [
    "__version__",
    "DensityMatrix",
    "Operator2",
    "PureState",
    "STATE_H",
    "STATE_V",
    "StokesVector",
    "apply_operator",
    "density_from_stokes",
    "density_of_state",
    "make_state",
    "pure_overlap",
    "state_fidelity",
    "stokes_of_state",
    "OutcomeRecord",
    "WeakMeasurement",
    "analytic_gmax",
    "analytic_prev",
    "kraus_pair",
    "optimal_guess",
    "outcome_distribution",
    "per_state_gain",
    "per_state_reversal_prob",
    "reversal_operator",
    "tradeoff_sum",
    "CountRecord",
    "EstimationError",
    "HwpSettings",
    "NoiseModel",
    "TomographyResult",
    "angles_from_wm",
    "complementary_settings",
    "estimate_gmax_from_counts",
    "estimate_prev_from_counts",
    "reversal_settings",
    "simulate_counts",
    "simulate_tomography",
    "wm_from_angles",
    "zeta",
    "CheckResult",
    "OperatorGrid",
    "OracleEstimate",
    "StateGrid",
    "SweepReport",
    "TradeoffPoint",
    "cross_section",
    "grid_sweep",
    "haar_average_oracle",
    "reversal_fidelity_sweep",
    "state_sweep",
    "verify",
]

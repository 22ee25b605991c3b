"""Fair, explainable security bonuses for developer teams.

The pipeline: qualitative threat assessments become an exact avoided-loss
interval; repository evidence becomes a coalition game; Shapley values split
a budget anchored in the avoided loss into per-developer payments, with an
axiom audit attached to every report.
"""

from .errors import (
    CapacityError,
    ClampWarning,
    CommitLogWarning,
    DocumentError,
    GameDefinitionError,
    MitigationWarning,
    PayoutError,
    RiskshareError,
    ScaleRangeError,
    UnknownLabelError,
    ValidationError,
)
from .games import (
    MATERIALIZATION_CAP,
    CoalitionGame,
    PlayerSet,
    evaluate,
    game_add,
    game_from_table,
    game_scale,
    leaf_coverage_game,
    unanimity_game,
)
from .intervals import Interval, as_fraction, interval_add, interval_mul, interval_sub
from .mining import (
    CherryPickPlan,
    CommitRecord,
    Cycle,
    IdentityResolution,
    SubsetResult,
    cherry_pick_plan,
    derive_attribution,
    game_from_subset_results,
    parse_commit_log,
    render_commit_log,
    resolve_identities,
    select_cycle,
    subset_results_from_attribution,
)
from .payout import (
    Money,
    PayoutReport,
    PlayerPayout,
    Provenance,
    allocate_payments,
    compute_budget,
    parse_report,
    render_report,
)
from .risk import (
    Control,
    LeafCondition,
    QualitativeScale,
    RiskModel,
    ScaleSet,
    Threat,
    ThreatAssessment,
    ThreatTree,
    ValidationIssue,
    ValidationReport,
    classify,
    risk_after,
    risk_before,
    risk_delta,
    validate_assessments,
    validate_scale,
    validate_threat_tree,
)
from .shapley import (
    EXACT_PLAYER_CAP,
    ORACLE_PLAYER_CAP,
    AxiomReport,
    ShapleyResult,
    check_axioms,
    sample_permutation,
    shapley_exact,
    shapley_monte_carlo,
    shapley_permutation_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomReport",
    "CapacityError",
    "CherryPickPlan",
    "ClampWarning",
    "CoalitionGame",
    "CommitLogWarning",
    "CommitRecord",
    "Control",
    "Cycle",
    "DocumentError",
    "EXACT_PLAYER_CAP",
    "GameDefinitionError",
    "IdentityResolution",
    "Interval",
    "LeafCondition",
    "MATERIALIZATION_CAP",
    "MitigationWarning",
    "Money",
    "ORACLE_PLAYER_CAP",
    "PayoutError",
    "PayoutReport",
    "PlayerPayout",
    "PlayerSet",
    "Provenance",
    "QualitativeScale",
    "RiskModel",
    "RiskshareError",
    "ScaleRangeError",
    "ScaleSet",
    "ShapleyResult",
    "SubsetResult",
    "Threat",
    "ThreatAssessment",
    "ThreatTree",
    "UnknownLabelError",
    "ValidationError",
    "ValidationIssue",
    "ValidationReport",
    "allocate_payments",
    "as_fraction",
    "check_axioms",
    "cherry_pick_plan",
    "classify",
    "compute_budget",
    "derive_attribution",
    "evaluate",
    "game_add",
    "game_from_subset_results",
    "game_from_table",
    "game_scale",
    "interval_add",
    "interval_mul",
    "interval_sub",
    "leaf_coverage_game",
    "parse_commit_log",
    "parse_report",
    "render_commit_log",
    "render_report",
    "resolve_identities",
    "risk_after",
    "risk_before",
    "risk_delta",
    "sample_permutation",
    "select_cycle",
    "shapley_exact",
    "shapley_monte_carlo",
    "shapley_permutation_oracle",
    "subset_results_from_attribution",
    "unanimity_game",
    "validate_assessments",
    "validate_scale",
    "validate_threat_tree",
]

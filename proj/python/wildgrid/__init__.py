"""Robust grid expansion planning under wildfire risk."""

from wildgrid._core import (
    BruteForceResult,
    Case,
    ConfigError,
    Iteration,
    OracleLimitError,
    Plan,
    PlanningConfig,
    Realization,
    RecourseInfeasibleError,
    Result,
    RiskInfeasibleError,
    SolverError,
    WorstCaseResult,
    brute_force,
    case_provenance,
    check_plan,
    count_realizations,
    highs_available,
    investment_cost,
    load_case,
    nominal_realization,
    operating_cost,
    parse_case,
    restrict_to_scenario,
    score_threshold,
    solve,
    worst_case,
    write_case,
    write_result,
)

__version__ = "0.1.0"

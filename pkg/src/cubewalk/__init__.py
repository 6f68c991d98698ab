"""Hitting times of random sets on the hypercube.

Exact transform/oracle machinery, Monte Carlo walkers, random target-set
generators with the exponential-law condition checker, and trap-model aging
simulation, all behind one deterministic counter-based seeding scheme.
"""
from .combinatorics import (
    GThreshold,
    XiTable,
    binom_exact,
    binom_gaussian_approx,
    find_g,
    log_binom,
    log_xi_all,
    xi,
    xi_exact,
    xi_second_form,
)
from .experiments import (
    AgingRun,
    KSBattery,
    MomentRatio,
    SurvivalDeviation,
    condition_sweep,
    incl_excl_ratios,
    laplace_trend,
    mc_ks_battery,
    rem_aging_run,
    sample_starts,
    survival_deviation_exact,
)
from .exact_hitting import (
    FULL_CHAIN_MAX_N,
    LaplaceQuery,
    ResourceLimitError,
    SurvivalTable,
    beta_product_form,
    full_survival,
    inclusion_exclusion_sum,
    laplace_alternating_exact,
    laplace_formula,
    laplace_profile,
    lumped_laplace,
    lumped_laplace_profile,
    lumped_survival,
    p_single,
    survival_grid,
)
from .random_sets import (
    ConditionReport,
    TargetSet,
    Thresholds,
    check_conditions,
    cloud_statistic,
    distance_profile,
    load_set,
    percolation_cloud,
    sample_without_replacement,
    save_set,
    sphere_ball_profiles,
    vn_max,
)
from .rem_aging import (
    AgingEstimate,
    ClockTrajectory,
    EnergyMap,
    REMConfig,
    TailFit,
    asl,
    clock_process,
    clock_tail_fit,
    clock_tail_samples,
    position_at,
    two_point,
    two_point_multi,
)
from .walk_mc import HittingEmpirical, KSResult, dkw_band, ks_to_exponential, simulate_hitting, step

__version__ = "0.1.0"

__all__ = [
    "GThreshold", "XiTable", "binom_exact", "binom_gaussian_approx", "find_g",
    "log_binom", "log_xi_all", "xi", "xi_exact", "xi_second_form",
    "AgingRun", "KSBattery", "MomentRatio", "SurvivalDeviation",
    "condition_sweep", "incl_excl_ratios", "laplace_trend", "mc_ks_battery",
    "rem_aging_run", "sample_starts", "survival_deviation_exact",
    "FULL_CHAIN_MAX_N",
    "LaplaceQuery", "ResourceLimitError", "SurvivalTable", "beta_product_form",
    "full_survival", "inclusion_exclusion_sum", "laplace_alternating_exact",
    "laplace_formula", "laplace_profile", "lumped_laplace",
    "lumped_laplace_profile", "lumped_survival", "p_single", "survival_grid",
    "ConditionReport", "TargetSet", "Thresholds", "check_conditions",
    "cloud_statistic", "distance_profile", "load_set", "percolation_cloud",
    "sample_without_replacement", "save_set", "sphere_ball_profiles", "vn_max",
    "AgingEstimate", "ClockTrajectory", "EnergyMap", "REMConfig", "TailFit",
    "asl", "clock_process", "clock_tail_fit", "clock_tail_samples",
    "position_at", "two_point", "two_point_multi",
    "HittingEmpirical", "KSResult", "dkw_band", "ks_to_exponential",
    "simulate_hitting", "step",
    "__version__",
]

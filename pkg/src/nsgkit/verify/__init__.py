"""Monte Carlo and exact verification engine."""
from .binomial import (
    TailEstimate,
    TrialConfig,
    clopper_pearson_upper,
    collect_statistics,
    empirical_quantile,
    estimate_tail,
    estimate_tails,
    weighted_quantile,
)
from .constants import (
    CellEstimate,
    ConstantEstimate,
    ConstantScenario,
    Method,
    Target,
    estimate_constant,
    path_ratios,
    violation_rate,
)
from .estimators import (
    EquivalenceReport,
    SubExpEstimate,
    SuperExpEstimate,
    TailCheck,
    certificate_tail_check,
    default_t_grid,
    equivalence_from_norms,
    equivalence_report,
    moment_profile,
    moment_sigma,
    normsq_subexp_check,
    observed_t_grid,
    projection_check,
    projection_constant,
    subexp_constant,
    super_exp_sigma,
    symmetric_grid,
    tail_sigma,
    tail_sigma_from_bounds,
)

__all__ = [
    'CellEstimate',
    'ConstantEstimate',
    'ConstantScenario',
    'EquivalenceReport',
    'Method',
    'SubExpEstimate',
    'SuperExpEstimate',
    'TailCheck',
    'TailEstimate',
    'Target',
    'TrialConfig',
    'certificate_tail_check',
    'clopper_pearson_upper',
    'collect_statistics',
    'default_t_grid',
    'empirical_quantile',
    'equivalence_from_norms',
    'equivalence_report',
    'estimate_constant',
    'estimate_tail',
    'estimate_tails',
    'moment_profile',
    'moment_sigma',
    'normsq_subexp_check',
    'observed_t_grid',
    'path_ratios',
    'projection_check',
    'projection_constant',
    'subexp_constant',
    'super_exp_sigma',
    'symmetric_grid',
    'tail_sigma',
    'tail_sigma_from_bounds',
    'violation_rate',
    'weighted_quantile',
]

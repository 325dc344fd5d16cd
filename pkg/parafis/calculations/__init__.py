"""
Moteurs de calcul pour ParaFIS
"""

from .adaptation import update_premise, update_consequent, effective_membership, one_hot
from .structure import (
    init_covariance, gefs_star_should_create, sigma_along_axis, condition1_separability,
    condition2_inertia, promote_subrules, learn_step
)
from .fitting import PhaseFit, SummaryRow, smooth, fit_phase, fit_phases, summarize
from .prequential import (
    TraceMode, PrequentialRecord, prequential_run, repeated_runs, system_factory
)

__all__ = [
    'update_premise', 'update_consequent', 'effective_membership', 'one_hot',
    'init_covariance', 'gefs_star_should_create', 'sigma_along_axis', 'condition1_separability',
    'condition2_inertia', 'promote_subrules', 'learn_step',
    'PhaseFit', 'SummaryRow', 'smooth', 'fit_phase', 'fit_phases', 'summarize',
    'TraceMode', 'PrequentialRecord', 'prequential_run', 'repeated_runs', 'system_factory'
]

"""
Modèles de données pour ParaFIS
"""

from .hyperparams import HyperParams, InitMethod, CreationRule, ForgettingFactor
from .rule import Rule, membership, rule_output, init_rule_from_point
from .rule_system import AnticipationPair, RuleSystem, normalized_activations, predict
from .events import CreationEvent, EventKind, DriftTrace

__all__ = [
    'HyperParams', 'InitMethod', 'CreationRule', 'ForgettingFactor',
    'Rule', 'membership', 'rule_output', 'init_rule_from_point',
    'AnticipationPair', 'RuleSystem', 'normalized_activations', 'predict',
    'CreationEvent', 'EventKind', 'DriftTrace'
]

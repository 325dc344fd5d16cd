"""
ParaFIS : classifieur flou évolutif avec module d'anticipation des dérives
brutales, et banc d'essai prequential.
"""

__version__ = "1.0.0"
__author__ = "Équipe ParaFIS"
__description__ = "Système d'inférence floue évolutif avec anticipation des dérives brutales"

# Imports principaux pour faciliter l'utilisation
from .models.hyperparams import HyperParams, InitMethod, CreationRule
from .models.rule import Rule
from .models.rule_system import RuleSystem, predict
from .calculations.structure import learn_step

__all__ = [
    'HyperParams',
    'InitMethod',
    'CreationRule',
    'Rule',
    'RuleSystem',
    'predict',
    'learn_step'
]

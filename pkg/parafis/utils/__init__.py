"""
Utilitaires pour ParaFIS
"""

from .constants import (
    # Paramètres du modèle
    DEFAULT_OMEGA, DEFAULT_N_MIN, DEFAULT_ALPHA1, DEFAULT_ALPHA2, DEFAULT_KAPPA, DEFAULT_M_EXP,

    # Évaluation
    DEFAULT_SMOOTHING, DEFAULT_PLOT_SMOOTHING, PHASES,

    # Préréglages
    DATASET_LAYOUTS, PROTOCOL_PRESETS, MODEL_PRESETS, GEFS_KAPPA,

    # Messages
    ERROR_MESSAGES, STATUS_MESSAGES
)
from .errors import (
    ParafisError, DegenerateCovarianceError, NoRulesError, UndefinedDirectionError,
    ContractViolationError, DatasetError, DatasetNotFoundError, DatasetEmptyError,
    ParseError, NonNumericFeatureError, ConfigurationError, TraceMismatchError,
    TraceParseError, RecordFormatError, FitError
)
from .log import configure_logging

__all__ = [
    # Paramètres du modèle
    'DEFAULT_OMEGA', 'DEFAULT_N_MIN', 'DEFAULT_ALPHA1', 'DEFAULT_ALPHA2', 'DEFAULT_KAPPA',
    'DEFAULT_M_EXP',

    # Évaluation
    'DEFAULT_SMOOTHING', 'DEFAULT_PLOT_SMOOTHING', 'PHASES',

    # Préréglages
    'DATASET_LAYOUTS', 'PROTOCOL_PRESETS', 'MODEL_PRESETS', 'GEFS_KAPPA',

    # Messages
    'ERROR_MESSAGES', 'STATUS_MESSAGES',

    # Exceptions
    'ParafisError', 'DegenerateCovarianceError', 'NoRulesError', 'UndefinedDirectionError',
    'ContractViolationError', 'DatasetError', 'DatasetNotFoundError', 'DatasetEmptyError',
    'ParseError', 'NonNumericFeatureError', 'ConfigurationError', 'TraceMismatchError',
    'TraceParseError', 'RecordFormatError', 'FitError',

    'configure_logging'
]

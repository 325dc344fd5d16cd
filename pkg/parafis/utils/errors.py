"""
Exceptions de ParaFIS

Chaque exception porte le code de sortie utilisé par la ligne de commande :
2 pour les erreurs d'utilisation ou de configuration, 1 pour les autres erreurs.
"""

from typing import Optional

from .constants import ERROR_MESSAGES, EXIT_RUNTIME, EXIT_USAGE


class ParafisError(Exception):
    """Erreur de base de ParaFIS"""

    exit_code = EXIT_RUNTIME


class DegenerateCovarianceError(ParafisError):
    """Covariance non définie positive ou distance de Mahalanobis non finie"""

    def __init__(self, detail: str = ""):
        message = ERROR_MESSAGES['degenerate_covariance']
        super().__init__(f"{message}: {detail}" if detail else message)


class NoRulesError(ParafisError):
    """Inférence demandée sur un système sans règle"""

    def __init__(self):
        super().__init__(ERROR_MESSAGES['no_rules'])


class UndefinedDirectionError(ParafisError):
    """Direction nulle pour le calcul de l'enveloppe d'un cluster"""

    def __init__(self):
        super().__init__(ERROR_MESSAGES['undefined_direction'])


class ContractViolationError(ParafisError):
    """Précondition d'une opération non respectée"""


class DatasetError(ParafisError):
    """Erreur de lecture d'un jeu de données"""


class DatasetNotFoundError(DatasetError):
    """Fichier de données absent"""

    exit_code = EXIT_USAGE

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"{ERROR_MESSAGES['dataset_not_found']}: {path}")


class DatasetEmptyError(DatasetError):
    """Fichier de données vide"""

    def __init__(self, path: str):
        self.path = path
        super().__init__(f"{ERROR_MESSAGES['dataset_empty']}: {path}")


class ParseError(DatasetError):
    """Ligne mal formée dans un fichier de données"""

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        if row is not None:
            message = f"ligne {row}: {message}"
        super().__init__(message)


class NonNumericFeatureError(ParseError):
    """Caractéristique non numérique"""

    def __init__(self, row: int, column: int, value: str):
        self.column = column
        self.value = value
        super().__init__(f"valeur non numérique '{value}' (colonne {column})", row)


class ConfigurationError(ParafisError):
    """Configuration invalide, le champ fautif est nommé dans le message"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        self.detail = message
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class TraceMismatchError(ParafisError):
    """Trace incompatible avec le flux rejoué"""

    exit_code = EXIT_USAGE

    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"{ERROR_MESSAGES['trace_mismatch']}: {detail}")


class TraceParseError(ParafisError):
    """Fichier de trace mal formé"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"ligne {line}: {message}")


class RecordFormatError(ParafisError):
    """Fichier CSV de score mal formé"""

    exit_code = EXIT_USAGE


class FitError(ParafisError):
    """Ajustement impossible (phase trop courte, bornes invalides)"""

    exit_code = EXIT_USAGE

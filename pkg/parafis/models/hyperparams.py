"""
Ce module contient les hyperparamètres du système de règles floues.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Any

from ..utils.constants import (
    DEFAULT_ALPHA1, DEFAULT_ALPHA2, DEFAULT_N_MIN, DEFAULT_OMEGA, DEFAULT_KAPPA, DEFAULT_M_EXP
)
from ..utils.errors import ConfigurationError


class InitMethod(Enum):
    """Méthode d'initialisation d'une règle créée lors d'une dérive"""

    I1 = "I1"
    I2 = "I2"
    I3 = "I3"
    ANTICIPATION = "anticipation"


class CreationRule(Enum):
    """Critère de création de règles"""

    SEPARABILITY = "separability"  # Conditions 1 et 2 sur le module d'anticipation
    GEFS_STAR = "gefs_star"  # Rayon de Mahalanobis type Gen-Smart EFS


def _parse_enum(enum_cls, value, field: str):
    if isinstance(value, enum_cls):
        return value
    for member in enum_cls:
        if str(value).lower() in (member.value.lower(), member.name.lower()):
            return member
    allowed = ", ".join(m.value for m in enum_cls)
    raise ConfigurationError(f"valeur '{value}' invalide (attendu: {allowed})", field)


@dataclass(frozen=True)
class ForgettingFactor:
    """
    Facteur d'oubli alpha et seuil tmax associé.

    :param alpha: Facteur d'oubli dans ]0, 1], 1 = pas d'oubli
    :type alpha: float
    """

    alpha: float = 1.0

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise ValueError(f"Facteur d'oubli invalide: {self.alpha}. Doit être dans ]0, 1].")
        if self.alpha < 1 and self.tmax < 2:
            raise ValueError(f"Facteur d'oubli trop faible: {self.alpha} (tmax < 2)")

    @property
    def tmax(self) -> float:
        """
        Seuil tmax = round(1 / (1 - alpha)), infini si alpha = 1.

        :return: tmax
        :rtype: float
        """
        if self.alpha >= 1:
            return math.inf
        return float(round(1.0 / (1.0 - self.alpha)))

    def effective_count(self, k: int) -> float:
        """
        Nombre effectif t = min(k + 1, tmax) utilisé par la mise à jour des prémisses.

        :param k: Nombre de points avant la mise à jour
        :type k: int
        :return: t
        :rtype: float
        """
        return min(float(k + 1), self.tmax)


@dataclass
class HyperParams:
    """
    Hyperparamètres d'un système ParaFIS / GEFS.

    :param alpha1: Facteur d'oubli de la sous-règle 1
    :type alpha1: float
    :param alpha2: Facteur d'oubli de la sous-règle 2
    :type alpha2: float
    :param n_min: Seuil de la condition d'inertie
    :type n_min: int
    :param omega: Constante d'initialisation des matrices de corrélation
    :type omega: float
    :param init_method: Initialisation des règles créées lors d'une dérive
    :type init_method: InitMethod
    :param creation_rule: Critère de création de règles
    :type creation_rule: CreationRule
    :param kappa: Paramètre kappa de GEFS*
    :type kappa: float
    :param m_exp: Exposant m de GEFS*
    :type m_exp: float
    """

    alpha1: float = DEFAULT_ALPHA1
    alpha2: float = DEFAULT_ALPHA2
    n_min: int = DEFAULT_N_MIN
    omega: float = DEFAULT_OMEGA
    init_method: InitMethod = InitMethod.ANTICIPATION
    creation_rule: CreationRule = CreationRule.SEPARABILITY
    kappa: float = DEFAULT_KAPPA
    m_exp: float = DEFAULT_M_EXP

    def __post_init__(self):
        """
        Validation après initialisation.

        :raises ConfigurationError: Si un paramètre est hors limites.
        """
        self.init_method = _parse_enum(InitMethod, self.init_method, 'init_method')
        self.creation_rule = _parse_enum(CreationRule, self.creation_rule, 'creation_rule')

        if not (0 < self.alpha2 <= self.alpha1 <= 1):
            raise ConfigurationError(
                f"doit respecter 0 < alpha2 <= alpha1 <= 1 (alpha1={self.alpha1}, alpha2={self.alpha2})",
                'alpha2')
        if int(self.n_min) != self.n_min or self.n_min < 1:
            raise ConfigurationError(f"doit être un entier >= 1 ({self.n_min})", 'n_min')
        self.n_min = int(self.n_min)
        if self.omega <= 0:
            raise ConfigurationError(f"doit être positif ({self.omega})", 'omega')
        if self.kappa <= 0:
            raise ConfigurationError(f"doit être positif ({self.kappa})", 'kappa')
        if self.m_exp < 0:
            raise ConfigurationError(f"doit être positif ou nul ({self.m_exp})", 'm_exp')
        if self.creation_rule is CreationRule.GEFS_STAR and self.init_method is InitMethod.ANTICIPATION:
            raise ConfigurationError("GEFS* n'a pas de module d'anticipation (utiliser I1, I2 ou I3)",
                                     'init_method')

    @property
    def uses_anticipation(self) -> bool:
        """
        Le module d'anticipation est-il appris (paires de sous-règles) ?

        :return: True pour le critère de séparabilité
        :rtype: bool
        """
        return self.creation_rule is CreationRule.SEPARABILITY

    @property
    def principal_forgetting(self) -> ForgettingFactor:
        return ForgettingFactor(1.0)

    @property
    def fast_forgetting(self) -> ForgettingFactor:
        return ForgettingFactor(self.alpha1)

    @property
    def slow_forgetting(self) -> ForgettingFactor:
        return ForgettingFactor(self.alpha2)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'HyperParams':
        """
        Créer des hyperparamètres depuis un dictionnaire (valeurs absentes = défauts).

        :param data: Dictionnaire de configuration
        :type data: Dict[str, Any]
        :return: Instance HyperParams
        :rtype: HyperParams
        """
        return cls(
            alpha1=float(data.get('alpha1', DEFAULT_ALPHA1)),
            alpha2=float(data.get('alpha2', DEFAULT_ALPHA2)),
            n_min=data.get('n_min', DEFAULT_N_MIN),
            omega=float(data.get('omega', DEFAULT_OMEGA)),
            init_method=data.get('init_method', InitMethod.ANTICIPATION),
            creation_rule=data.get('creation_rule', CreationRule.SEPARABILITY),
            kappa=float(data.get('kappa', DEFAULT_KAPPA)),
            m_exp=float(data.get('m_exp', DEFAULT_M_EXP))
        )

    def to_dict(self) -> Dict[str, Any]:
        """
        Convertir les hyperparamètres en dictionnaire.

        :return: Dictionnaire sérialisable
        :rtype: Dict[str, Any]
        """
        return {
            'alpha1': self.alpha1,
            'alpha2': self.alpha2,
            'n_min': self.n_min,
            'omega': self.omega,
            'init_method': self.init_method.value,
            'creation_rule': self.creation_rule.value,
            'kappa': self.kappa,
            'm_exp': self.m_exp
        }

"""
Ce module contient la classe Rule.
Une règle floue Takagi-Sugeno est définie par un prototype (centre et covariance)
et une conclusion affine par classe.
"""

import copy
from dataclasses import dataclass, field
from typing import Dict, Any, Optional

import numpy as np

from ..utils.constants import EIGENVALUE_FLOOR, INIT_COVARIANCE_SCALE
from ..utils.errors import DegenerateCovarianceError


def extend_input(x: np.ndarray) -> np.ndarray:
    """
    Ajouter le biais en tête du vecteur d'entrée : x~ = (1, x1, ..., xn).

    :param x: Vecteur de caractéristiques
    :type x: np.ndarray
    :return: Vecteur étendu de longueur n + 1
    :rtype: np.ndarray
    """
    return np.concatenate(([1.0], np.asarray(x, dtype=float)))


def regularize_covariance(covariance: np.ndarray) -> np.ndarray:
    """
    Symétriser une covariance et ajouter un plancher si elle n'est pas définie positive.

    :param covariance: Matrice n x n
    :type covariance: np.ndarray
    :return: Matrice symétrique définie positive
    :rtype: np.ndarray
    :raises DegenerateCovarianceError: Si la matrice reste non définie positive
    """
    covariance = np.asarray(covariance, dtype=float)
    if not np.all(np.isfinite(covariance)):
        raise DegenerateCovarianceError("valeurs non finies")

    covariance = 0.5 * (covariance + covariance.T)
    min_eig = np.linalg.eigvalsh(covariance).min()
    if min_eig < EIGENVALUE_FLOOR:
        covariance = covariance + EIGENVALUE_FLOOR * np.eye(covariance.shape[0])
        min_eig = np.linalg.eigvalsh(covariance).min()
        if min_eig <= 0:
            raise DegenerateCovarianceError(f"valeur propre minimale {min_eig:.3e}")
    return covariance


@dataclass
class Rule:
    """
    Modèle de données pour une règle floue.

    :param center: Centre mu du prototype (longueur n)
    :type center: np.ndarray
    :param covariance: Covariance A (n x n), symétrique définie positive
    :type covariance: np.ndarray
    :param conclusion: Matrice Pi (c x (n + 1)), un hyperplan par classe, biais en colonne 0
    :type conclusion: np.ndarray
    :param correlation: Matrice de corrélation C du WRLS ((n + 1) x (n + 1))
    :type correlation: np.ndarray
    :param sample_count: Nombre k de points pour lesquels la règle était la plus activée
    :type sample_count: int
    :param label: Classe du point fondateur (informatif)
    :type label: Optional[int]
    """

    center: np.ndarray
    covariance: np.ndarray
    conclusion: np.ndarray
    correlation: np.ndarray
    sample_count: int = 0
    label: Optional[int] = None

    # Inverse mise en cache, recalculée à chaque changement de covariance
    covariance_inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        """
        Validation après initialisation.

        :raises ValueError: Si les dimensions sont incohérentes.
        """
        self.center = np.asarray(self.center, dtype=float).copy()
        self.conclusion = np.atleast_2d(np.asarray(self.conclusion, dtype=float)).copy()
        self.correlation = np.asarray(self.correlation, dtype=float).copy()
        n = self.center.shape[0]

        if self.center.ndim != 1:
            raise ValueError("Le centre doit être un vecteur")
        if np.shape(self.covariance) != (n, n):
            raise ValueError(f"Covariance de dimension {np.shape(self.covariance)}, attendu {(n, n)}")
        if self.conclusion.shape[1] != n + 1:
            raise ValueError(f"Conclusion de {self.conclusion.shape[1]} colonnes, attendu {n + 1}")
        if self.correlation.shape != (n + 1, n + 1):
            raise ValueError(f"Corrélation de dimension {self.correlation.shape}, attendu {(n + 1, n + 1)}")
        if self.sample_count < 0:
            raise ValueError(f"Compteur négatif: {self.sample_count}")

        self.set_covariance(self.covariance)

    @property
    def feature_dim(self) -> int:
        return self.center.shape[0]

    @property
    def class_count(self) -> int:
        return self.conclusion.shape[0]

    def set_covariance(self, covariance: np.ndarray):
        """
        Remplacer la covariance (régularisée) et rafraîchir son inverse.

        :param covariance: Nouvelle covariance
        :type covariance: np.ndarray
        :raises DegenerateCovarianceError: Si la covariance n'est pas inversible
        """
        self.covariance = regularize_covariance(covariance)
        try:
            self.covariance_inverse = np.linalg.inv(self.covariance)
        except np.linalg.LinAlgError as e:
            raise DegenerateCovarianceError(str(e)) from e

    def add_class(self):
        """
        Ajouter une ligne nulle à la conclusion pour une nouvelle classe.
        """
        self.conclusion = np.vstack([self.conclusion, np.zeros((1, self.feature_dim + 1))])

    def mahalanobis_sq(self, x: np.ndarray) -> float:
        """
        Distance de Mahalanobis au carré d2 = (x - mu) A^-1 (x - mu)^T.

        :param x: Vecteur de caractéristiques
        :type x: np.ndarray
        :return: d2
        :rtype: float
        :raises DegenerateCovarianceError: Si d2 n'est pas fini
        """
        x = np.asarray(x, dtype=float)
        if x.shape != self.center.shape:
            raise ValueError(f"Dimension de x {x.shape} incompatible avec {self.center.shape}")
        diff = x - self.center
        d2 = float(diff @ self.covariance_inverse @ diff)
        if not np.isfinite(d2):
            raise DegenerateCovarianceError(f"distance non finie pour le centre {self.center}")
        return max(d2, 0.0)

    def copy(self) -> 'Rule':
        """
        Copie profonde de la règle.

        :return: Nouvelle règle indépendante
        :rtype: Rule
        """
        return copy.deepcopy(self)

    def to_dict(self) -> Dict[str, Any]:
        """
        Convertir la règle en dictionnaire sérialisable.

        :return: Dictionnaire de listes
        :rtype: Dict[str, Any]
        """
        return {
            'center': self.center.tolist(),
            'covariance': self.covariance.tolist(),
            'conclusion': self.conclusion.tolist(),
            'correlation': self.correlation.tolist(),
            'sample_count': self.sample_count,
            'label': self.label
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Rule':
        """
        Créer une règle depuis un dictionnaire produit par :meth:`to_dict`.

        :param data: Dictionnaire
        :type data: Dict[str, Any]
        :return: Instance Rule
        :rtype: Rule
        """
        return cls(
            center=np.array(data['center'], dtype=float),
            covariance=np.array(data['covariance'], dtype=float),
            conclusion=np.array(data['conclusion'], dtype=float),
            correlation=np.array(data['correlation'], dtype=float),
            sample_count=int(data.get('sample_count', 0)),
            label=data.get('label')
        )

    def __str__(self) -> str:
        return f"Rule(k={self.sample_count}, mu={np.array2string(self.center, precision=3)})"


def cauchy_kernel(d2: float) -> float:
    """Noyau de Cauchy K(d2) = 1 / (1 + d2)."""
    return 1.0 / (1.0 + d2)


def membership(rule: Rule, x: np.ndarray) -> float:
    """
    Degré d'appartenance de x à la règle, dans ]0, 1].

    :param rule: Règle
    :type rule: Rule
    :param x: Vecteur de caractéristiques
    :type x: np.ndarray
    :return: K(d2) avec d2 la distance de Mahalanobis au carré
    :rtype: float
    :raises DegenerateCovarianceError: Si la distance n'est pas finie
    """
    return cauchy_kernel(rule.mahalanobis_sq(x))


def rule_output(rule: Rule, x: np.ndarray) -> np.ndarray:
    """
    Sortie de la règle par classe : y_i^j = Pi_i^j . x~.

    :param rule: Règle
    :type rule: Rule
    :param x: Vecteur de caractéristiques
    :type x: np.ndarray
    :return: Vecteur de longueur c
    :rtype: np.ndarray
    """
    x_ext = extend_input(x)
    if x_ext.shape[0] != rule.conclusion.shape[1]:
        raise ValueError(f"Dimension de x incompatible avec la conclusion {rule.conclusion.shape}")
    return rule.conclusion @ x_ext


def init_rule_from_point(x: np.ndarray, label: Optional[int], n: int, c: int, omega: float,
                         covariance: Optional[np.ndarray] = None) -> Rule:
    """
    Créer une règle sur le dernier point reçu.

    Le centre est une copie de x, la covariance vaut (1/100) Id sauf si une autre
    initialisation est fournie, la conclusion est nulle et C = Omega Id.

    :param x: Point fondateur
    :type x: np.ndarray
    :param label: Classe du point (identifiant)
    :type label: Optional[int]
    :param n: Dimension des caractéristiques
    :type n: int
    :param c: Nombre de classes
    :type c: int
    :param omega: Constante d'initialisation de C
    :type omega: float
    :param covariance: Covariance initiale (I1 / I3), optionnelle
    :type covariance: Optional[np.ndarray]
    :return: Nouvelle règle, sample_count = 0
    :rtype: Rule
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"Point de dimension {x.shape}, attendu ({n},)")
    if not np.all(np.isfinite(x)):
        raise ValueError("Le point contient des valeurs non finies")

    if covariance is None:
        covariance = INIT_COVARIANCE_SCALE * np.eye(n)

    return Rule(
        center=x.copy(),
        covariance=covariance,
        conclusion=np.zeros((c, n + 1)),
        correlation=omega * np.eye(n + 1),
        sample_count=0,
        label=label
    )

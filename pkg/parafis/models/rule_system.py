"""
Ce module contient le système de règles (classifieur) et son module d'anticipation.
"""

import copy
import hashlib
import logging
from dataclasses import dataclass, field
from typing import List, Dict, Any, Optional, Tuple, Hashable

import numpy as np

from .hyperparams import HyperParams
from .rule import Rule, membership, rule_output
from ..utils.errors import NoRulesError

logger = logging.getLogger(__name__)


@dataclass
class AnticipationPair:
    """
    Paire de sous-règles attachée à une règle principale.

    :param fast: Sous-règle r_i1, apprise avec alpha1
    :type fast: Rule
    :param slow: Sous-règle r_i2, apprise avec alpha2
    :type slow: Rule
    """

    fast: Rule
    slow: Rule

    def __post_init__(self):
        if self.fast.feature_dim != self.slow.feature_dim:
            raise ValueError("Les sous-règles doivent avoir la même dimension")
        if self.fast.class_count != self.slow.class_count:
            raise ValueError("Les sous-règles doivent avoir le même nombre de classes")

    @property
    def sub_rules(self) -> Tuple[Rule, Rule]:
        return self.fast, self.slow

    def add_class(self):
        self.fast.add_class()
        self.slow.add_class()

    def to_dict(self) -> Dict[str, Any]:
        return {'fast': self.fast.to_dict(), 'slow': self.slow.to_dict()}


@dataclass
class RuleSystem:
    """
    Système de règles floues : règles principales, module d'anticipation et
    inventaire des classes.

    Les identifiants de classe sont denses et commencent à 1 dans l'ordre de
    première apparition des étiquettes.

    :param feature_dim: Dimension n des caractéristiques
    :type feature_dim: int
    :param hyperparams: Hyperparamètres
    :type hyperparams: HyperParams
    """

    feature_dim: int
    hyperparams: HyperParams = field(default_factory=HyperParams)
    rules: List[Rule] = field(default_factory=list)
    anticipation: List[AnticipationPair] = field(default_factory=list)
    classes: List[Hashable] = field(default_factory=list)

    def __post_init__(self):
        if self.feature_dim < 1:
            raise ValueError(f"Dimension invalide: {self.feature_dim}")

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def rule_count(self) -> int:
        return len(self.rules)

    def class_id(self, label: Hashable) -> Optional[int]:
        """
        Identifiant (1..c) d'une étiquette, None si la classe est inconnue.

        :param label: Étiquette brute
        :type label: Hashable
        :return: Identifiant ou None
        :rtype: Optional[int]
        """
        try:
            return self.classes.index(label) + 1
        except ValueError:
            return None

    def label_of(self, class_id: int) -> Hashable:
        """
        Étiquette brute d'un identifiant de classe.

        :param class_id: Identifiant (1..c)
        :type class_id: int
        :return: Étiquette
        :rtype: Hashable
        """
        if not 1 <= class_id <= self.class_count:
            raise ValueError(f"Identifiant de classe invalide: {class_id}")
        return self.classes[class_id - 1]

    def register_class(self, label: Hashable) -> int:
        """
        Enregistrer une nouvelle classe et agrandir toutes les conclusions.

        :param label: Étiquette brute
        :type label: Hashable
        :return: Identifiant attribué
        :rtype: int
        """
        existing = self.class_id(label)
        if existing is not None:
            return existing

        self.classes.append(label)
        for rule in self.rules:
            rule.add_class()
        for pair in self.anticipation:
            pair.add_class()

        logger.debug("Nouvelle classe %r (id %d)", label, self.class_count)
        return self.class_count

    def check_consistency(self):
        """
        Vérifier les invariants structurels du système.

        :raises ValueError: Si une matrice est mal dimensionnée ou si le module
            d'anticipation n'a pas une paire par règle.
        """
        if self.hyperparams.uses_anticipation and len(self.anticipation) != len(self.rules):
            raise ValueError(f"{len(self.anticipation)} paires pour {len(self.rules)} règles")

        members = list(self.rules)
        for pair in self.anticipation:
            members.extend(pair.sub_rules)
        for rule in members:
            if rule.feature_dim != self.feature_dim or rule.class_count != self.class_count:
                raise ValueError(f"Règle mal dimensionnée: {rule}")

    def copy(self) -> 'RuleSystem':
        return copy.deepcopy(self)

    def to_dict(self) -> Dict[str, Any]:
        """
        Convertir l'état complet en dictionnaire.

        :return: Dictionnaire sérialisable
        :rtype: Dict[str, Any]
        """
        return {
            'feature_dim': self.feature_dim,
            'hyperparams': self.hyperparams.to_dict(),
            'classes': [str(label) for label in self.classes],
            'rules': [rule.to_dict() for rule in self.rules],
            'anticipation': [pair.to_dict() for pair in self.anticipation]
        }

    def state_digest(self) -> str:
        """
        Empreinte SHA-256 des octets de tous les paramètres (égalité bit à bit).

        :return: Empreinte hexadécimale
        :rtype: str
        """
        digest = hashlib.sha256()
        digest.update(repr(self.classes).encode('utf-8'))
        members = list(self.rules)
        for pair in self.anticipation:
            members.extend(pair.sub_rules)
        for rule in members:
            for array in (rule.center, rule.covariance, rule.conclusion, rule.correlation):
                digest.update(np.ascontiguousarray(array).tobytes())
            digest.update(str(rule.sample_count).encode('utf-8'))
        return digest.hexdigest()

    def normalized_activations(self, x: np.ndarray) -> np.ndarray:
        return normalized_activations(self, x)

    def predict(self, x: np.ndarray) -> Tuple[int, np.ndarray]:
        return predict(self, x)

    def __str__(self) -> str:
        return f"RuleSystem({self.rule_count} règles, {self.class_count} classes, n={self.feature_dim})"


def raw_activations(rules: List[Rule], x: np.ndarray) -> np.ndarray:
    """
    Activations brutes K_i(x) d'une liste de règles.

    :param rules: Règles
    :type rules: List[Rule]
    :param x: Vecteur de caractéristiques
    :type x: np.ndarray
    :return: Vecteur des activations
    :rtype: np.ndarray
    """
    return np.array([membership(rule, x) for rule in rules], dtype=float)


def normalized_activations(system: RuleSystem, x: np.ndarray) -> np.ndarray:
    """
    Activations normalisées beta_i = K_i / somme_j K_j des règles principales.
    Toutes les règles principales participent au dénominateur.

    :param system: Système de règles
    :type system: RuleSystem
    :param x: Vecteur de caractéristiques
    :type x: np.ndarray
    :return: Vecteur de longueur N (somme 1)
    :rtype: np.ndarray
    :raises NoRulesError: Si le système n'a aucune règle
    """
    if not system.rules:
        raise NoRulesError()
    activations = raw_activations(system.rules, x)
    return activations / activations.sum()


def most_activated(system: RuleSystem, x: np.ndarray) -> int:
    """Indice de la règle la plus activée (la plus petite en cas d'égalité)."""
    return int(np.argmax(normalized_activations(system, x)))


def predict(system: RuleSystem, x: np.ndarray) -> Tuple[int, np.ndarray]:
    """
    Prédire la classe de x, sans utiliser le module d'anticipation.

    :param system: Système de règles
    :type system: RuleSystem
    :param x: Vecteur de caractéristiques
    :type x: np.ndarray
    :return: (identifiant de classe 1..c, scores par classe)
    :rtype: Tuple[int, np.ndarray]
    :raises NoRulesError: Si le système n'a aucune règle
    """
    betas = normalized_activations(system, x)
    scores = np.zeros(system.class_count)
    for beta, rule in zip(betas, system.rules):
        scores += beta * rule_output(rule, x)

    # argmax retourne le premier maximum : égalité -> plus petit identifiant
    return int(np.argmax(scores)) + 1, scores

"""
Adaptation incrémentale des paramètres d'une règle.

Les prémisses (centre et covariance) sont mises à jour avec oubli, les
conclusions par moindres carrés récursifs pondérés (WRLS).
"""

from typing import Tuple

import numpy as np

from ..models.hyperparams import ForgettingFactor
from ..models.rule import Rule, extend_input, membership
from ..models.rule_system import RuleSystem, AnticipationPair, normalized_activations


def one_hot(class_id: int, class_count: int) -> np.ndarray:
    """
    Vecteur cible Y : 1 pour la vraie classe, 0 ailleurs.

    :param class_id: Identifiant de classe (1..c)
    :type class_id: int
    :param class_count: Nombre de classes c
    :type class_count: int
    :return: Vecteur de longueur c
    :rtype: np.ndarray
    """
    if not 1 <= class_id <= class_count:
        raise ValueError(f"Classe {class_id} hors de [1, {class_count}]")
    target = np.zeros(class_count)
    target[class_id - 1] = 1.0
    return target


def update_premise(rule: Rule, x: np.ndarray, forgetting: ForgettingFactor) -> Rule:
    """
    Mettre à jour le centre puis la covariance de la règle.

    Avec t = min(k + 1, tmax) : mu <- ((t-1)/t) mu + x/t, puis
    A <- ((t-1)/t) A + (x - mu)(x - mu)^T / t en utilisant le nouveau centre.

    :param rule: Règle à adapter (modifiée en place)
    :type rule: Rule
    :param x: Point courant
    :type x: np.ndarray
    :param forgetting: Facteur d'oubli
    :type forgetting: ForgettingFactor
    :return: La règle mise à jour
    :rtype: Rule
    :raises DegenerateCovarianceError: Si la covariance reste dégénérée
    """
    x = np.asarray(x, dtype=float)
    t = forgetting.effective_count(rule.sample_count)
    keep = (t - 1.0) / t

    rule.center = keep * rule.center + x / t
    diff = x - rule.center
    rule.set_covariance(keep * rule.covariance + np.outer(diff, diff) / t)
    rule.sample_count += 1
    return rule


def update_consequent(rule: Rule, x: np.ndarray, target: np.ndarray, beta: float) -> Rule:
    """
    Mise à jour WRLS de la conclusion d'une règle (forme standard, une seule
    application de C).

    :param rule: Règle à adapter (modifiée en place)
    :type rule: Rule
    :param x: Point courant
    :type x: np.ndarray
    :param target: Vecteur cible one-hot
    :type target: np.ndarray
    :param beta: Poids de la règle dans [0, 1]
    :type beta: float
    :return: La règle mise à jour
    :rtype: Rule
    """
    if not 0.0 <= beta <= 1.0 + 1e-12:
        raise ValueError(f"Poids beta hors de [0, 1]: {beta}")
    if beta == 0.0:
        return rule

    x_ext = extend_input(x)
    cx = rule.correlation @ x_ext
    denominator = 1.0 + beta * float(x_ext @ cx)
    correlation = rule.correlation - beta * np.outer(cx, cx) / denominator
    rule.correlation = 0.5 * (correlation + correlation.T)

    error = target - rule.conclusion @ x_ext
    rule.conclusion = rule.conclusion + beta * np.outer(error, rule.correlation @ x_ext)
    return rule


def effective_membership(system: RuleSystem, x: np.ndarray, rule_index: int) -> float:
    """
    Poids WRLS d'une règle principale : son activation normalisée en x.

    :param system: Système de règles
    :type system: RuleSystem
    :param x: Point courant
    :type x: np.ndarray
    :param rule_index: Indice de la règle
    :type rule_index: int
    :return: beta_i(x)
    :rtype: float
    """
    return float(normalized_activations(system, x)[rule_index])


def sub_rule_weights(pair: AnticipationPair, x: np.ndarray, parent_beta: float) -> Tuple[float, float]:
    """
    Poids WRLS des deux sous-règles : activation propre de chaque sous-règle,
    normalisée dans la paire puis ramenée à la masse d'activation du parent.

    :param pair: Paire de sous-règles
    :type pair: AnticipationPair
    :param x: Point courant
    :type x: np.ndarray
    :param parent_beta: Activation normalisée de la règle principale
    :type parent_beta: float
    :return: (poids de r_i1, poids de r_i2)
    :rtype: Tuple[float, float]
    """
    k_fast = membership(pair.fast, x)
    k_slow = membership(pair.slow, x)
    total = k_fast + k_slow
    return parent_beta * k_fast / total, parent_beta * k_slow / total

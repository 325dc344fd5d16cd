"""
Évolution de la structure du système : critères de création de règles,
initialisation des covariances, module d'anticipation et étape d'apprentissage.
"""

import logging
import math
from typing import List, Hashable, Sequence

import numpy as np

from .adaptation import one_hot, update_premise, update_consequent, sub_rule_weights
from ..models.events import CreationEvent, EventKind
from ..models.hyperparams import InitMethod, CreationRule
from ..models.rule import Rule, init_rule_from_point, regularize_covariance
from ..models.rule_system import RuleSystem, AnticipationPair, normalized_activations
from ..utils.constants import (
    INIT_COVARIANCE_SCALE, I3_COVARIANCE_DIVISOR, DEFAULT_KAPPA, DEFAULT_M_EXP
)
from ..utils.errors import ContractViolationError, UndefinedDirectionError

logger = logging.getLogger(__name__)


def init_covariance(method: InitMethod, existing_rules: Sequence[Rule], feature_dim: int) -> np.ndarray:
    """
    Covariance initiale d'une règle créée lors d'une dérive.

    * I1 : diagonale du minimum élément par élément des diagonales existantes
    * I2 : (1/100) Id
    * I3 : moyenne des covariances existantes divisée par 10

    Sans règle existante, I1 et I3 se replient sur I2.

    :param method: Méthode I1, I2 ou I3
    :type method: InitMethod
    :param existing_rules: Règles principales existantes
    :type existing_rules: Sequence[Rule]
    :param feature_dim: Dimension n
    :type feature_dim: int
    :return: Matrice n x n définie positive
    :rtype: np.ndarray
    """
    method = InitMethod(method)
    if method is InitMethod.ANTICIPATION:
        raise ContractViolationError("La promotion de sous-règles n'a pas de covariance initiale fixe")

    if method is InitMethod.I2 or not existing_rules:
        if method is not InitMethod.I2:
            logger.debug("%s sans règle existante: repli sur I2", method.value)
        return INIT_COVARIANCE_SCALE * np.eye(feature_dim)

    if method is InitMethod.I1:
        diagonals = np.array([np.diag(rule.covariance) for rule in existing_rules])
        covariance = np.diag(diagonals.min(axis=0))
    else:
        covariance = np.mean([rule.covariance for rule in existing_rules], axis=0) / I3_COVARIANCE_DIVISOR

    return regularize_covariance(covariance)


def gefs_star_radius(sample_count: int, feature_dim: int, kappa: float = DEFAULT_KAPPA,
                     m_exp: float = DEFAULT_M_EXP) -> float:
    """
    Rayon r = kappa p^(1/sqrt(2)) / (1 - 1/(k + 1))^m, infini pour k = 0.

    :param sample_count: k de la règle
    :type sample_count: int
    :param feature_dim: p, dimension des caractéristiques
    :type feature_dim: int
    :param kappa: Paramètre kappa
    :type kappa: float
    :param m_exp: Exposant m
    :type m_exp: float
    :return: Rayon
    :rtype: float
    """
    if sample_count <= 0:
        return math.inf
    return kappa * feature_dim ** (1.0 / math.sqrt(2.0)) / (1.0 - 1.0 / (sample_count + 1)) ** m_exp


def gefs_star_should_create(rule: Rule, x: np.ndarray, kappa: float = DEFAULT_KAPPA,
                            m_exp: float = DEFAULT_M_EXP) -> bool:
    """
    Critère de création de GEFS* : d2(x) > r^2 pour la règle la plus activée.

    :param rule: Règle la plus activée
    :type rule: Rule
    :param x: Point courant
    :type x: np.ndarray
    :return: True s'il faut créer une règle
    :rtype: bool
    """
    radius = gefs_star_radius(rule.sample_count, rule.feature_dim, kappa, m_exp)
    if math.isinf(radius):
        return False
    return rule.mahalanobis_sq(x) > radius ** 2


def sigma_along_axis(rule: Rule, other_center: np.ndarray) -> float:
    """
    Distance euclidienne du centre à l'enveloppe de l'ellipsoïde
    {z : (z - mu) A^-1 (z - mu)^T = 1} dans la direction de other_center.

    :param rule: Règle (cluster)
    :type rule: Rule
    :param other_center: Centre de l'autre cluster
    :type other_center: np.ndarray
    :return: sigma = ||d|| / sqrt(d^T A^-1 d)
    :rtype: float
    :raises UndefinedDirectionError: Si other_center coïncide avec le centre
    """
    direction = np.asarray(other_center, dtype=float) - rule.center
    norm = float(np.linalg.norm(direction))
    if norm == 0.0:
        raise UndefinedDirectionError()
    return norm / math.sqrt(float(direction @ rule.covariance_inverse @ direction))


def condition1_separability(pair: AnticipationPair) -> bool:
    """
    Condition 1 : les deux sous-règles sont séparées, la distance entre leurs
    centres dépasse la somme de leurs enveloppes le long de l'axe qui les relie.

    :param pair: Paire de sous-règles
    :type pair: AnticipationPair
    :return: True si les clusters sont séparés
    :rtype: bool
    """
    distance = float(np.linalg.norm(pair.fast.center - pair.slow.center))
    if distance == 0.0:
        return False
    sigma_fast = sigma_along_axis(pair.fast, pair.slow.center)
    sigma_slow = sigma_along_axis(pair.slow, pair.fast.center)
    return distance > sigma_fast + sigma_slow


def condition2_inertia(pair: AnticipationPair, n_min: int) -> bool:
    """
    Condition 2 : chaque sous-règle a vu plus de n_min points depuis sa création.

    :param pair: Paire de sous-règles
    :type pair: AnticipationPair
    :param n_min: Seuil
    :type n_min: int
    :return: True si min(k_1, k_2) > n_min
    :rtype: bool
    """
    return min(pair.fast.sample_count, pair.slow.sample_count) > n_min


def drift_detected(pair: AnticipationPair, n_min: int) -> bool:
    """Conditions 1 et 2 réunies (la condition d'inertie est évaluée en premier)."""
    return condition2_inertia(pair, n_min) and condition1_separability(pair)


def _seed_pair(parent: Rule, omega: float) -> AnticipationPair:
    """
    Paire issue d'une règle : r_1 copie complète, r_2 sans conclusion et
    C = Omega Id, compteurs à 0.
    """
    fast = parent.copy()
    fast.sample_count = 0

    slow = parent.copy()
    slow.conclusion = np.zeros_like(parent.conclusion)
    slow.correlation = omega * np.eye(parent.feature_dim + 1)
    slow.sample_count = 0
    return AnticipationPair(fast=fast, slow=slow)


def promote_subrules(system: RuleSystem, rule_index: int, stream_index: int = 0,
                     check: bool = True) -> List[CreationEvent]:
    """
    Remplacer la règle r_m par ses deux sous-règles.

    La sous-règle r_m1 prend la place de r_m, la sous-règle r_m2 est ajoutée en
    fin de liste. Chaque nouvelle règle reçoit une paire neuve qui conserve ce
    qu'elle a appris.

    :param system: Système (modifié en place)
    :type system: RuleSystem
    :param rule_index: Indice m de la règle
    :type rule_index: int
    :param stream_index: Position du point courant dans le flux
    :type stream_index: int
    :param check: Vérifier les conditions 1 et 2 avant la promotion
    :type check: bool
    :return: L'événement DriftSplit
    :rtype: List[CreationEvent]
    :raises ContractViolationError: Si check est vrai et que les conditions ne tiennent pas
    """
    if not system.hyperparams.uses_anticipation or not 0 <= rule_index < len(system.anticipation):
        raise ContractViolationError(f"Pas de paire de sous-règles pour la règle {rule_index}")

    pair = system.anticipation[rule_index]
    if check and not drift_detected(pair, system.hyperparams.n_min):
        raise ContractViolationError(f"Conditions 1 et 2 non vérifiées pour la règle {rule_index}")

    omega = system.hyperparams.omega
    promoted = [pair.fast, pair.slow]
    for rule in promoted:
        # Une règle principale a toujours au moins un point
        rule.sample_count = max(rule.sample_count, 1)

    system.rules[rule_index] = promoted[0]
    system.anticipation[rule_index] = _seed_pair(promoted[0], omega)
    system.rules.append(promoted[1])
    system.anticipation.append(_seed_pair(promoted[1], omega))

    logger.debug("Promotion de la règle %d au point %d (%d règles)", rule_index, stream_index, system.rule_count)
    return [CreationEvent(stream_index, rule_index, EventKind.DRIFT_SPLIT)]


def _new_rule(system: RuleSystem, x: np.ndarray, class_id: int, covariance=None) -> Rule:
    # Le point fondateur est celui qui active le plus la règle
    rule = init_rule_from_point(x, class_id, system.feature_dim, system.class_count,
                                system.hyperparams.omega, covariance=covariance)
    rule.sample_count = 1
    return rule


def create_class_rule(system: RuleSystem, x: np.ndarray, class_id: int, stream_index: int = 0) -> List[CreationEvent]:
    """
    Créer une règle (et sa paire de sous-règles) sur le premier point d'une classe.

    :param system: Système (modifié en place)
    :type system: RuleSystem
    :param x: Point courant
    :type x: np.ndarray
    :param class_id: Identifiant de la nouvelle classe
    :type class_id: int
    :param stream_index: Position du point dans le flux
    :type stream_index: int
    :return: L'événement NewClass
    :rtype: List[CreationEvent]
    """
    system.rules.append(_new_rule(system, x, class_id))
    if system.hyperparams.uses_anticipation:
        system.anticipation.append(AnticipationPair(fast=_new_rule(system, x, class_id),
                                                    slow=_new_rule(system, x, class_id)))

    index = system.rule_count - 1
    logger.debug("Nouvelle règle %d pour la classe %d au point %d", index, class_id, stream_index)
    return [CreationEvent(stream_index, index, EventKind.NEW_CLASS)]


def create_drift_rule(system: RuleSystem, rule_index: int, x: np.ndarray, class_id: int,
                      stream_index: int = 0) -> List[CreationEvent]:
    """
    Réagir à une dérive détectée (ou rejouée) sur la règle r_m.

    * anticipation : promotion des sous-règles
    * I1 / I2 / I3 : nouvelle règle centrée sur x, paire de r_m réinitialisée
    * GEFS* : nouvelle règle centrée sur x, sans module d'anticipation

    :param system: Système (modifié en place)
    :type system: RuleSystem
    :param rule_index: Indice m de la règle la plus activée
    :type rule_index: int
    :param x: Point courant
    :type x: np.ndarray
    :param class_id: Classe du point
    :type class_id: int
    :param stream_index: Position du point dans le flux
    :type stream_index: int
    :return: L'événement DriftSplit
    :rtype: List[CreationEvent]
    """
    hp = system.hyperparams
    if hp.init_method is InitMethod.ANTICIPATION:
        return promote_subrules(system, rule_index, stream_index, check=False)

    covariance = init_covariance(hp.init_method, system.rules, system.feature_dim)
    rule = _new_rule(system, x, class_id, covariance=covariance)
    system.rules.append(rule)

    if hp.uses_anticipation:
        system.anticipation[rule_index] = _seed_pair(system.rules[rule_index], hp.omega)
        system.anticipation.append(_seed_pair(rule, hp.omega))

    logger.debug("Nouvelle règle %s au point %d (dérive sur la règle %d)",
                 hp.init_method.value, stream_index, rule_index)
    return [CreationEvent(stream_index, rule_index, EventKind.DRIFT_SPLIT)]


def should_create(system: RuleSystem, rule_index: int, x: np.ndarray) -> bool:
    """
    Appliquer le critère de création du système à la règle la plus activée.

    :param system: Système
    :type system: RuleSystem
    :param rule_index: Indice m de la règle la plus activée
    :type rule_index: int
    :param x: Point courant
    :type x: np.ndarray
    :return: True si une règle doit être créée
    :rtype: bool
    """
    hp = system.hyperparams
    if hp.creation_rule is CreationRule.GEFS_STAR:
        return gefs_star_should_create(system.rules[rule_index], x, hp.kappa, hp.m_exp)
    return drift_detected(system.anticipation[rule_index], hp.n_min)


def adapt(system: RuleSystem, x: np.ndarray, class_id: int, rule_index: int):
    """
    Adapter le système sans changement de structure : prémisses de r_m et de
    ses sous-règles, puis conclusions de toutes les règles et sous-règles.

    :param system: Système (modifié en place)
    :type system: RuleSystem
    :param x: Point courant
    :type x: np.ndarray
    :param class_id: Classe du point
    :type class_id: int
    :param rule_index: Indice m de la règle la plus activée
    :type rule_index: int
    """
    hp = system.hyperparams
    update_premise(system.rules[rule_index], x, hp.principal_forgetting)
    if hp.uses_anticipation:
        pair = system.anticipation[rule_index]
        update_premise(pair.fast, x, hp.fast_forgetting)
        update_premise(pair.slow, x, hp.slow_forgetting)

    target = one_hot(class_id, system.class_count)
    betas = normalized_activations(system, x)
    for beta, rule in zip(betas, system.rules):
        update_consequent(rule, x, target, float(beta))

    for beta, pair in zip(betas, system.anticipation):
        beta_fast, beta_slow = sub_rule_weights(pair, x, float(beta))
        update_consequent(pair.fast, x, target, beta_fast)
        update_consequent(pair.slow, x, target, beta_slow)


def learn_step(system: RuleSystem, x: np.ndarray, label: Hashable, *, stream_index: int = 0,
               detect: bool = True, force_creation: bool = False) -> List[CreationEvent]:
    """
    Apprendre un point étiqueté.

    Une étiquette inconnue crée une règle et sa paire. Sinon, la règle la plus
    activée r_m est trouvée ; si le critère de création est vérifié (ou imposé
    par une trace rejouée) la structure évolue, sinon les paramètres sont adaptés.
    Le point d'une création ne sert pas à l'adaptation.

    :param system: Système (modifié en place)
    :type system: RuleSystem
    :param x: Vecteur de caractéristiques
    :type x: np.ndarray
    :param label: Étiquette brute
    :type label: Hashable
    :param stream_index: Position du point dans le flux
    :type stream_index: int
    :param detect: Évaluer le critère de création (désactivé en rejeu)
    :type detect: bool
    :param force_creation: Imposer une création à ce point (rejeu)
    :type force_creation: bool
    :return: Événements de création émis
    :rtype: List[CreationEvent]
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (system.feature_dim,):
        raise ValueError(f"Point de dimension {x.shape}, attendu ({system.feature_dim},)")
    if not np.all(np.isfinite(x)):
        raise ValueError("Le point contient des valeurs non finies")

    class_id = system.class_id(label)
    if class_id is None:
        class_id = system.register_class(label)
        return create_class_rule(system, x, class_id, stream_index)

    rule_index = int(np.argmax(normalized_activations(system, x)))
    if force_creation or (detect and should_create(system, rule_index, x)):
        return create_drift_rule(system, rule_index, x, class_id, stream_index)

    adapt(system, x, class_id, rule_index)
    return []

"""
Évaluation prequential (tester puis apprendre) et répétitions sur des flux
mélangés, avec enregistrement et rejeu des traces de détection.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Dict, Mapping, Optional, Tuple, Union

import numpy as np
import pandas as pd

from .fitting import smooth
from .structure import learn_step
from ..data.dataset import Dataset
from ..data.protocol import DriftStream, ProtocolPConfig, build_protocol_p, derive_seed
from ..data.synthetic import SyntheticStreamConfig, generate_synthetic_stream
from ..models.events import DriftTrace, EventKind
from ..models.hyperparams import HyperParams
from ..models.rule_system import RuleSystem, predict
from ..utils.constants import DEFAULT_SMOOTHING
from ..utils.errors import TraceMismatchError, ConfigurationError

logger = logging.getLogger(__name__)

StreamConfig = Union[ProtocolPConfig, SyntheticStreamConfig]


class TraceMode(Enum):
    """Utilisation du détecteur de dérive pendant un passage prequential"""

    DETECT = "detect"  # critères de création actifs
    RECORD = "record"  # critères actifs, trace conservée
    REPLAY = "replay"  # créations imposées aux instants de la trace


@dataclass
class PrequentialRecord:
    """
    Scores binaires d'un passage prequential.

    :param scores: 1 si la prédiction était correcte, 0 sinon
    :type scores: np.ndarray
    :param phases: Phase de chaque exemple
    :type phases: List[str]
    :param smoothing: Fenêtre de lissage n
    :type smoothing: int
    """

    scores: np.ndarray
    phases: List[str]
    smoothing: int = DEFAULT_SMOOTHING

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=float)
        if len(self.scores) != len(self.phases):
            raise ValueError(f"{len(self.scores)} scores pour {len(self.phases)} phases")
        if self.smoothing < 1:
            raise ValueError(f"Fenêtre de lissage invalide: {self.smoothing}")

    def __len__(self) -> int:
        return len(self.scores)

    @property
    def smoothed(self) -> np.ndarray:
        return smooth(self.scores, self.smoothing)

    @property
    def accuracy(self) -> float:
        """Nombre de scores à 1 divisé par la longueur du flux."""
        return float(self.scores.sum()) / len(self.scores) if len(self.scores) else 0.0

    def to_dataframe(self) -> pd.DataFrame:
        """
        Tableau ``step, score, smoothed, phase``.

        :return: DataFrame
        :rtype: pd.DataFrame
        """
        return pd.DataFrame({
            'step': np.arange(len(self.scores)),
            'score': self.scores,
            'smoothed': self.smoothed,
            'phase': list(self.phases)
        })


def system_factory(hyperparams: HyperParams, feature_dim: int) -> Callable[[], RuleSystem]:
    """
    Fabrique de systèmes vierges.

    :param hyperparams: Hyperparamètres
    :type hyperparams: HyperParams
    :param feature_dim: Dimension des caractéristiques
    :type feature_dim: int
    :return: Fonction sans argument retournant un nouveau système
    :rtype: Callable[[], RuleSystem]
    """
    def factory() -> RuleSystem:
        return RuleSystem(feature_dim=feature_dim, hyperparams=hyperparams)
    return factory


def _event_keys(trace: DriftTrace) -> List[Tuple[int, EventKind]]:
    return [(event.stream_index, event.kind) for event in trace]


def prequential_run(factory: Callable[[], RuleSystem], stream: DriftStream,
                    trace_mode: TraceMode = TraceMode.DETECT, trace: Optional[DriftTrace] = None,
                    smoothing: int = DEFAULT_SMOOTHING) -> Tuple[PrequentialRecord, DriftTrace]:
    """
    Passage prequential : chaque exemple est d'abord testé, puis appris.

    Un exemple dont la classe est encore inconnue (ou reçu par un système sans
    règle) obtient le score 0. En rejeu, les critères de création sont ignorés et
    les dérives de la trace sont imposées ; la trace produite doit alors
    coïncider avec la trace rejouée.

    :param factory: Fabrique de système vierge
    :type factory: Callable[[], RuleSystem]
    :param stream: Flux
    :type stream: DriftStream
    :param trace_mode: Mode de détection
    :type trace_mode: TraceMode
    :param trace: Trace à rejouer (mode REPLAY)
    :type trace: Optional[DriftTrace]
    :param smoothing: Fenêtre de lissage du résultat
    :type smoothing: int
    :return: (scores, trace des événements émis)
    :rtype: Tuple[PrequentialRecord, DriftTrace]
    :raises TraceMismatchError: Si la trace dépasse le flux ou ne coïncide pas
    """
    replay = trace_mode is TraceMode.REPLAY
    forced = set()
    if replay:
        if trace is None:
            raise ConfigurationError("le mode rejeu exige une trace", 'trace')
        if trace.last_index >= len(stream):
            raise TraceMismatchError(
                f"exemple {trace.last_index} référencé, le flux n'en compte que {len(stream)}")
        forced = trace.drift_indices

    system = factory()
    scores = np.zeros(len(stream))
    produced = DriftTrace()

    for index, (x, label) in enumerate(zip(stream.features, stream.labels)):
        class_id = system.class_id(label)
        if class_id is not None and system.rules:
            predicted, _ = predict(system, x)
            scores[index] = float(predicted == class_id)

        produced.extend(learn_step(system, x, label, stream_index=index,
                                   detect=not replay, force_creation=index in forced))

    if replay and _event_keys(produced) != _event_keys(trace):
        raise TraceMismatchError("événements rejoués différents "
                                 f"({len(produced)} produits, {len(trace)} attendus)")

    logger.debug("Passage %s: %d exemples, %d règles, précision %.4f",
                 trace_mode.value, len(stream), system.rule_count, scores.mean() if len(stream) else 0.0)
    return PrequentialRecord(scores=scores, phases=list(stream.phases), smoothing=smoothing), produced


def build_stream(dataset: Optional[Dataset], cfg: StreamConfig, seed: int) -> DriftStream:
    """
    Construire le flux d'une répétition.

    :param dataset: Jeu de données (None pour un flux synthétique)
    :type dataset: Optional[Dataset]
    :param cfg: Protocole P ou flux synthétique
    :type cfg: StreamConfig
    :param seed: Graine de la répétition
    :type seed: int
    :return: Flux
    :rtype: DriftStream
    """
    if isinstance(cfg, SyntheticStreamConfig):
        return generate_synthetic_stream(cfg.with_seed(seed))
    if dataset is None:
        raise ConfigurationError("le protocole P exige un jeu de données", 'dataset')
    return build_protocol_p(dataset, cfg.with_seed(seed))


@dataclass
class RunResult:
    """Résultat d'une configuration sur une répétition."""

    config: str
    repeat: int
    seed: int
    record: PrequentialRecord
    trace: DriftTrace
    stream_checksum: str


@dataclass
class ConfigAggregate:
    """
    Agrégat d'une configuration sur les répétitions.

    :param config: Nom de la configuration
    :type config: str
    :param runs: Résultats par répétition, dans l'ordre des répétitions
    :type runs: List[RunResult]
    """

    config: str
    runs: List[RunResult] = field(default_factory=list)

    @property
    def phases(self) -> List[str]:
        return self.runs[0].record.phases if self.runs else []

    @property
    def mean_scores(self) -> np.ndarray:
        return np.mean([run.record.scores for run in self.runs], axis=0)

    @property
    def mean_smoothed(self) -> np.ndarray:
        """Courbe lissée moyenne sur les répétitions."""
        return np.mean([run.record.smoothed for run in self.runs], axis=0)

    def mean_curve(self, smoothing: int) -> np.ndarray:
        """
        Moyenne des courbes lissées avec une autre fenêtre (courbes de tracé).

        :param smoothing: Fenêtre de lissage
        :type smoothing: int
        :return: Courbe moyenne
        :rtype: np.ndarray
        """
        return np.mean([smooth(run.record.scores, smoothing) for run in self.runs], axis=0)

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean([run.record.accuracy for run in self.runs]))

    def mean_record(self) -> pd.DataFrame:
        """Tableau ``step, score, smoothed, phase`` des moyennes."""
        return pd.DataFrame({
            'step': np.arange(len(self.phases)),
            'score': self.mean_scores,
            'smoothed': self.mean_smoothed,
            'phase': self.phases
        })


@dataclass
class RepeatedRunResult:
    """Résultats de toutes les configurations, dans l'ordre de déclaration."""

    aggregates: Dict[str, ConfigAggregate]
    seeds: List[int]

    def __getitem__(self, config: str) -> ConfigAggregate:
        return self.aggregates[config]

    @property
    def configs(self) -> List[str]:
        return list(self.aggregates)


def run_repeat(dataset: Optional[Dataset], cfg: StreamConfig, configs: Mapping[str, HyperParams],
               repeat: int, seed: int, smoothing: int = DEFAULT_SMOOTHING,
               record_model: Optional[str] = None,
               replay_trace: Optional[DriftTrace] = None) -> List[RunResult]:
    """
    Exécuter toutes les configurations sur le flux d'une répétition.

    Avec ``record_model``, cette configuration est jouée en premier avec le
    détecteur et sa trace est rejouée sur les autres. Avec ``replay_trace``,
    toutes les configurations rejouent la trace fournie.

    :param dataset: Jeu de données (None pour un flux synthétique)
    :type dataset: Optional[Dataset]
    :param cfg: Configuration du flux
    :type cfg: StreamConfig
    :param configs: Hyperparamètres par nom de configuration
    :type configs: Mapping[str, HyperParams]
    :param repeat: Indice de la répétition
    :type repeat: int
    :param seed: Graine de la répétition
    :type seed: int
    :param smoothing: Fenêtre de lissage
    :type smoothing: int
    :param record_model: Configuration qui enregistre la trace
    :type record_model: Optional[str]
    :param replay_trace: Trace imposée à toutes les configurations
    :type replay_trace: Optional[DriftTrace]
    :return: Résultats dans l'ordre des configurations
    :rtype: List[RunResult]
    """
    stream = build_stream(dataset, cfg, seed)
    checksum = stream.checksum
    results: Dict[str, RunResult] = {}

    def run(name: str, mode: TraceMode, trace: Optional[DriftTrace] = None) -> RunResult:
        hyperparams = configs[name]
        factory = system_factory(hyperparams, stream.feature_dim)
        record, produced = prequential_run(factory, stream, mode, trace, smoothing)
        return RunResult(name, repeat, seed, record, produced, checksum)

    shared = replay_trace
    if replay_trace is None and record_model is not None:
        if record_model not in configs:
            raise ConfigurationError(f"configuration inconnue '{record_model}'", 'record_model')
        results[record_model] = run(record_model, TraceMode.RECORD)
        shared = results[record_model].trace

    for name in configs:
        if name in results:
            continue
        results[name] = run(name, TraceMode.DETECT) if shared is None else run(name, TraceMode.REPLAY, shared)

    logger.info("Répétition %d terminée (graine %d)", repeat + 1, seed)
    return [results[name] for name in configs]


def _run_repeat_job(args: Tuple) -> List[RunResult]:
    return run_repeat(*args)


def repeated_runs(dataset: Optional[Dataset], cfg: StreamConfig, m: int, configs: Mapping[str, HyperParams],
                  master_seed: int = 0, smoothing: int = DEFAULT_SMOOTHING,
                  record_model: Optional[str] = None, workers: int = 1) -> RepeatedRunResult:
    """
    Répéter l'évaluation prequential sur m flux mélangés.

    Toutes les configurations d'une répétition voient le même flux. Les résultats
    sont fusionnés dans l'ordre (configuration, répétition), quel que soit le
    nombre de processus.

    :param dataset: Jeu de données (None pour un flux synthétique)
    :type dataset: Optional[Dataset]
    :param cfg: Configuration du flux
    :type cfg: StreamConfig
    :param m: Nombre de répétitions
    :type m: int
    :param configs: Hyperparamètres par nom de configuration
    :type configs: Mapping[str, HyperParams]
    :param master_seed: Graine maîtresse
    :type master_seed: int
    :param smoothing: Fenêtre de lissage
    :type smoothing: int
    :param record_model: Configuration qui enregistre la trace rejouée sur les autres
    :type record_model: Optional[str]
    :param workers: Nombre de processus
    :type workers: int
    :return: Résultats agrégés
    :rtype: RepeatedRunResult
    """
    if m < 1:
        raise ConfigurationError(f"doit être >= 1 ({m})", 'repeats')
    if not configs:
        raise ConfigurationError("au moins une configuration est requise", 'models')
    if workers < 1:
        raise ConfigurationError(f"doit être >= 1 ({workers})", 'workers')

    seeds = [derive_seed(master_seed, r) for r in range(m)]
    jobs = [(dataset, cfg, dict(configs), r, seeds[r], smoothing, record_model)
            for r in range(m)]

    if workers == 1 or m == 1:
        per_repeat = [_run_repeat_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map conserve l'ordre des répétitions
            per_repeat = list(pool.map(_run_repeat_job, jobs))

    aggregates = {name: ConfigAggregate(name) for name in configs}
    for results in per_repeat:
        for result in results:
            aggregates[result.config].runs.append(result)
    return RepeatedRunResult(aggregates=aggregates, seeds=seeds)

"""
Protocole P : génération de flux avec dérives brutales à partir d'un jeu de
données statique.

Le jeu de données est mélangé, puis :

* phase A : les T1 premiers exemples des n1 premières classes ;
* phase B : les T2 - T1 exemples suivants des n2 classes suivantes, renommées
  avec les étiquettes de la phase A (la j-ième classe de B prend la j-ième
  étiquette de A) ;
* phase C : idem avec les n3 classes suivantes.

Les classes sont prises dans l'ordre d'apparition dans le fichier.
"""

import hashlib
import logging
from dataclasses import dataclass, field, replace
from typing import List, Dict, Any, Tuple, Optional

import numpy as np

from .dataset import Dataset
from ..utils.constants import PROTOCOL_PRESETS, PHASES
from ..utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def derive_seed(master_seed: int, repeat_index: int) -> int:
    """
    Graine d'une répétition : finaliseur splitmix64 appliqué à
    master_seed + (repeat_index + 1) * 0x9E3779B97F4A7C15 (mod 2^64).

    :param master_seed: Graine maîtresse
    :type master_seed: int
    :param repeat_index: Indice de la répétition (à partir de 0)
    :type repeat_index: int
    :return: Graine sur 64 bits
    :rtype: int
    """
    z = (master_seed + (repeat_index + 1) * _GOLDEN_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _as_int(value: Any, field_name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigurationError(f"doit être un entier ({value!r})", field_name)
    return int(value)


def make_rng(seed: int) -> np.random.Generator:
    """Générateur PCG64 déterministe."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class ProtocolPConfig:
    """
    Paramètres du protocole P. Les bornes T1, T2, T3 sont cumulées.

    :param t1: Fin de la phase A
    :type t1: int
    :param t2: Fin de la phase B
    :type t2: int
    :param t3: Fin de la phase C (longueur du flux)
    :type t3: int
    :param n1: Nombre de classes de la phase A
    :type n1: int
    :param n2: Nombre de classes de la phase B (0 = pas de dérive)
    :type n2: int
    :param n3: Nombre de classes de la phase C
    :type n3: int
    :param seed: Graine du mélange
    :type seed: int
    """

    t1: int
    t2: int
    t3: int
    n1: int
    n2: int
    n3: int
    seed: int = 0

    def __post_init__(self):
        if self.n1 < 1:
            raise ConfigurationError(f"doit être >= 1 ({self.n1})", 'n1')
        if self.t1 < 1:
            raise ConfigurationError(f"doit être >= 1 ({self.t1})", 't1')
        if self.n2 < 0 or self.n2 > self.n1:
            raise ConfigurationError(f"doit être dans [0, n1={self.n1}] ({self.n2})", 'n2')
        if self.n3 < 0 or self.n3 > self.n1:
            raise ConfigurationError(f"doit être dans [0, n1={self.n1}] ({self.n3})", 'n3')
        if self.n3 > 0 and self.n2 == 0:
            raise ConfigurationError("une phase C exige une phase B", 'n3')
        if self.n2 > 0 and not self.t1 < self.t2:
            raise ConfigurationError(f"doit respecter T1 < T2 ({self.t1}, {self.t2})", 't2')
        if self.n3 > 0 and not self.t2 < self.t3:
            raise ConfigurationError(f"doit respecter T2 < T3 ({self.t2}, {self.t3})", 't3')
        if self.seed < 0:
            raise ConfigurationError(f"doit être positive ({self.seed})", 'seed')

    @property
    def phase_lengths(self) -> Dict[str, int]:
        """Longueur de chaque phase (0 pour une phase absente)."""
        length_b = self.t2 - self.t1 if self.n2 > 0 else 0
        length_c = self.t3 - self.t2 if self.n3 > 0 else 0
        return {'A': self.t1, 'B': length_b, 'C': length_c}

    @property
    def phase_classes(self) -> Dict[str, int]:
        return {'A': self.n1, 'B': self.n2, 'C': self.n3}

    @property
    def length(self) -> int:
        return sum(self.phase_lengths.values())

    def with_seed(self, seed: int) -> 'ProtocolPConfig':
        return replace(self, seed=seed)

    @classmethod
    def preset(cls, name: str, seed: int = 0) -> 'ProtocolPConfig':
        """
        Paramètres expérimentaux prédéfinis (letters, pendigits, laviola).

        :param name: Nom du jeu de données
        :type name: str
        :param seed: Graine du mélange
        :type seed: int
        :return: Configuration
        :rtype: ProtocolPConfig
        """
        if name not in PROTOCOL_PRESETS:
            raise ConfigurationError(f"préréglage inconnu '{name}' ({', '.join(PROTOCOL_PRESETS)})", 'preset')
        return cls(seed=seed, **PROTOCOL_PRESETS[name])

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ProtocolPConfig':
        """
        Créer une configuration depuis un dictionnaire ; la clé 'preset' fournit
        les valeurs par défaut.

        :param data: Dictionnaire
        :type data: Dict[str, Any]
        :return: Configuration
        :rtype: ProtocolPConfig
        """
        values: Dict[str, Any] = {}
        if 'preset' in data:
            if data['preset'] not in PROTOCOL_PRESETS:
                raise ConfigurationError(f"préréglage inconnu '{data['preset']}'", 'preset')
            values.update(PROTOCOL_PRESETS[data['preset']])
        for key in ('t1', 't2', 't3', 'n1', 'n2', 'n3', 'seed'):
            if key in data:
                values[key] = data[key]

        missing = [key for key in ('t1', 't2', 't3', 'n1', 'n2', 'n3') if key not in values]
        if missing:
            raise ConfigurationError("champ obligatoire manquant", missing[0])
        return cls(**{key: _as_int(value, key) for key, value in values.items()})

    def to_dict(self) -> Dict[str, Any]:
        return {'t1': self.t1, 't2': self.t2, 't3': self.t3,
                'n1': self.n1, 'n2': self.n2, 'n3': self.n3, 'seed': self.seed}


@dataclass
class DriftStream:
    """
    Flux ordonné d'exemples étiquetés avec phases et instants de dérive.

    :param features: Matrice T x n
    :type features: np.ndarray
    :param labels: Étiquettes présentées (étiquettes de la phase A)
    :type labels: List[str]
    :param phases: Phase de chaque exemple ('A', 'B' ou 'C')
    :type phases: List[str]
    :param original_labels: Étiquettes d'origine avant renommage
    :type original_labels: List[str]
    :param drift_times: Instants des dérives (T1, T2)
    :type drift_times: Tuple[int, ...]
    """

    features: np.ndarray
    labels: List[str]
    phases: List[str]
    original_labels: List[str] = field(default_factory=list)
    drift_times: Tuple[int, ...] = ()
    name: str = ""
    seed: Optional[int] = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        if not self.original_labels:
            self.original_labels = list(self.labels)
        lengths = {self.features.shape[0], len(self.labels), len(self.phases), len(self.original_labels)}
        if len(lengths) != 1:
            raise ValueError("Longueurs incohérentes dans le flux")

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    def phase_slices(self) -> List[Tuple[str, int, int]]:
        """
        Segments contigus (phase, début, fin exclue) dans l'ordre du flux.

        :return: Liste de segments
        :rtype: List[Tuple[str, int, int]]
        """
        segments = []
        start = 0
        for index in range(1, len(self.phases) + 1):
            if index == len(self.phases) or self.phases[index] != self.phases[start]:
                segments.append((self.phases[start], start, index))
                start = index
        return segments

    @property
    def checksum(self) -> str:
        """
        Empreinte SHA-256 du flux (caractéristiques, étiquettes, phases).

        :return: Empreinte hexadécimale
        :rtype: str
        """
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(self.features).tobytes())
        digest.update("\n".join(self.labels).encode('utf-8'))
        digest.update("".join(self.phases).encode('utf-8'))
        return digest.hexdigest()


def build_protocol_p(dataset: Dataset, cfg: ProtocolPConfig) -> DriftStream:
    """
    Construire le flux du protocole P.

    Le comptage des exemples de chaque phase se fait après le filtrage des classes.

    :param dataset: Jeu de données
    :type dataset: Dataset
    :param cfg: Paramètres du protocole
    :type cfg: ProtocolPConfig
    :return: Flux de longueur cfg.length
    :rtype: DriftStream
    :raises ConfigurationError: Si les classes ou les exemples sont insuffisants
    """
    classes = dataset.classes
    needed = cfg.n1 + cfg.n2 + cfg.n3
    if needed > len(classes):
        raise ConfigurationError(f"{needed} classes demandées, {len(classes)} disponibles", 'n1')

    blocks = {
        'A': classes[:cfg.n1],
        'B': classes[cfg.n1:cfg.n1 + cfg.n2],
        'C': classes[cfg.n1 + cfg.n2:needed]
    }
    labels_a = blocks['A']

    order = make_rng(cfg.seed).permutation(len(dataset))
    shuffled_labels = np.asarray(dataset.labels)[order]

    indices: List[np.ndarray] = []
    presented: List[str] = []
    phases: List[str] = []
    lengths = cfg.phase_lengths
    for phase in PHASES:
        length = lengths[phase]
        if length == 0:
            continue
        phase_classes = blocks[phase]
        selected = order[np.isin(shuffled_labels, phase_classes)][:length]
        if len(selected) < length:
            raise ConfigurationError(
                f"phase {phase}: {len(selected)} exemples disponibles pour {length} demandés", 't3')

        relabel = dict(zip(phase_classes, labels_a))
        indices.append(selected)
        presented.extend(relabel[dataset.labels[i]] for i in selected)
        phases.extend([phase] * length)

    selected = np.concatenate(indices)
    drift_times = tuple(t for t, n in ((cfg.t1, cfg.n2), (cfg.t2, cfg.n3)) if n > 0)
    stream = DriftStream(
        features=dataset.features[selected],
        labels=presented,
        phases=phases,
        original_labels=[dataset.labels[i] for i in selected],
        drift_times=drift_times,
        name=dataset.name,
        seed=cfg.seed
    )
    logger.debug("Flux %s (graine %d): %d exemples, dérives %s", dataset.name, cfg.seed, len(stream), drift_times)
    return stream

"""
Configuration d'une expérience (fichier JSON).

Exemple minimal ::

    {
      "dataset": {"path": "pendigits.tra", "layout": "pendigits"},
      "protocol": {"preset": "pendigits"},
      "models": ["Para1", "Para2", "I1", {"preset": "GEFS*", "kappa": 2.6}],
      "repeats": 10,
      "seed": 42
    }
"""

import json
import os
import re
from dataclasses import dataclass, field
from typing import List, Dict, Any, Optional, Union

from ..data.dataset import DatasetLayout
from ..data.protocol import ProtocolPConfig
from ..data.synthetic import SyntheticStreamConfig
from ..models.hyperparams import HyperParams, CreationRule
from ..utils.constants import (
    MODEL_PRESETS, GEFS_KAPPA, DEFAULT_REPEATS, DEFAULT_SMOOTHING, DEFAULT_PLOT_SMOOTHING,
    DATA_DIR_ENV_VAR
)
from ..utils.errors import ConfigurationError


def _prefixed(error: ConfigurationError, prefix: str) -> ConfigurationError:
    field_name = f"{prefix}.{error.field}" if error.field else prefix
    return ConfigurationError(error.detail, field_name)


def slugify(name: str) -> str:
    """Nom de configuration utilisable dans un nom de fichier (GEFS* -> GEFS_)."""
    return re.sub(r'[^A-Za-z0-9_-]', '_', name)


def resolve_path(path: str, base_dir: str) -> str:
    """
    Résoudre un chemin relatif : d'abord par rapport au dossier du fichier de
    configuration, puis au dossier ``PARAFIS_DATA_DIR`` s'il est défini.

    :param path: Chemin tel qu'écrit dans la configuration
    :type path: str
    :param base_dir: Dossier du fichier de configuration
    :type base_dir: str
    :return: Chemin résolu (le premier candidat si aucun n'existe)
    :rtype: str
    """
    if os.path.isabs(path):
        return path
    candidates = [os.path.join(base_dir, path)]
    data_dir = os.environ.get(DATA_DIR_ENV_VAR)
    if data_dir:
        candidates.append(os.path.join(data_dir, path))
    return next((candidate for candidate in candidates if os.path.exists(candidate)), candidates[0])


@dataclass
class ModelConfig:
    """
    Configuration nommée d'un modèle.

    :param name: Nom affiché et utilisé dans les fichiers
    :type name: str
    :param hyperparams: Hyperparamètres
    :type hyperparams: HyperParams
    """

    name: str
    hyperparams: HyperParams

    def __post_init__(self):
        if not self.name:
            raise ConfigurationError("nom vide", 'name')

    @classmethod
    def from_dict(cls, data: Union[str, Dict[str, Any]], dataset_key: Optional[str] = None) -> 'ModelConfig':
        """
        Créer une configuration depuis un nom de préréglage (Para1, Para2, I1,
        I2, I3, GEFS*) ou un dictionnaire.

        Pour GEFS*, kappa prend par défaut la valeur associée au jeu de données.

        :param data: Nom de préréglage ou dictionnaire
        :type data: Union[str, Dict[str, Any]]
        :param dataset_key: Nom du préréglage de jeu de données (pour kappa)
        :type dataset_key: Optional[str]
        :return: Configuration
        :rtype: ModelConfig
        """
        if isinstance(data, str):
            data = {'preset': data}
        if not isinstance(data, dict):
            raise ConfigurationError("doit être un nom de préréglage ou un objet")

        preset = data.get('preset')
        values: Dict[str, Any] = {}
        if preset is not None:
            if preset not in MODEL_PRESETS:
                raise ConfigurationError(f"préréglage inconnu '{preset}' ({', '.join(MODEL_PRESETS)})", 'preset')
            values.update(MODEL_PRESETS[preset])
        values.update({key: value for key, value in data.items() if key not in ('preset', 'name')})

        if ('kappa' not in values and dataset_key in GEFS_KAPPA
                and values.get('creation_rule') == CreationRule.GEFS_STAR.value):
            values['kappa'] = GEFS_KAPPA[dataset_key]

        name = data.get('name') or preset
        if not name:
            raise ConfigurationError("champ obligatoire manquant", 'name')
        try:
            return cls(name=str(name), hyperparams=HyperParams.from_dict(values))
        except (TypeError, ValueError) as e:
            raise ConfigurationError(str(e))

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, **self.hyperparams.to_dict()}


@dataclass
class DatasetConfig:
    """
    Source du flux : fichier(s) de données avec leur disposition, ou flux synthétique.

    :param paths: Fichiers de données (concaténés dans l'ordre)
    :type paths: List[str]
    :param layout: Disposition des colonnes
    :type layout: DatasetLayout
    :param name: Nom du jeu de données
    :type name: str
    :param synthetic: Paramètres du flux synthétique (remplace les fichiers)
    :type synthetic: Optional[SyntheticStreamConfig]
    """

    paths: List[str] = field(default_factory=list)
    layout: DatasetLayout = field(default_factory=DatasetLayout)
    name: str = ""
    synthetic: Optional[SyntheticStreamConfig] = None
    layout_key: Optional[str] = None

    def __post_init__(self):
        if self.synthetic is None and not self.paths:
            raise ConfigurationError("champ obligatoire manquant", 'path')

    @property
    def is_synthetic(self) -> bool:
        return self.synthetic is not None

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: str = ".") -> 'DatasetConfig':
        if not isinstance(data, dict):
            raise ConfigurationError("doit être un objet")
        if 'synthetic' in data:
            synthetic = data['synthetic'] if isinstance(data['synthetic'], dict) else {}
            return cls(name='synthetic', synthetic=SyntheticStreamConfig.from_dict(synthetic))

        if 'path' not in data:
            raise ConfigurationError("champ obligatoire manquant", 'path')
        raw_paths = data['path'] if isinstance(data['path'], list) else [data['path']]
        paths = [resolve_path(str(path), base_dir) for path in raw_paths]

        layout_data = data.get('layout', {})
        layout_key = layout_data if isinstance(layout_data, str) else layout_data.get('preset')
        layout = DatasetLayout.from_dict(layout_data)
        name = data.get('name') or layout_key or os.path.splitext(os.path.basename(paths[0]))[0]
        return cls(paths=paths, layout=layout, name=str(name), layout_key=layout_key)

    def to_dict(self) -> Dict[str, Any]:
        if self.synthetic is not None:
            return {'synthetic': self.synthetic.to_dict()}
        return {'path': self.paths if len(self.paths) > 1 else self.paths[0],
                'layout': self.layout.to_dict(), 'name': self.name}


@dataclass
class ExperimentConfig:
    """
    Configuration complète d'une expérience.

    :param dataset: Source du flux
    :type dataset: DatasetConfig
    :param protocol: Protocole P (None pour un flux synthétique)
    :type protocol: Optional[ProtocolPConfig]
    :param models: Configurations de modèles
    :type models: List[ModelConfig]
    :param seed: Graine maîtresse (obligatoire)
    :type seed: int
    :param repeats: Nombre de répétitions m
    :type repeats: int
    """

    dataset: DatasetConfig
    protocol: Optional[ProtocolPConfig]
    models: List[ModelConfig]
    seed: int
    repeats: int = DEFAULT_REPEATS
    smoothing: int = DEFAULT_SMOOTHING
    plot_smoothing: int = DEFAULT_PLOT_SMOOTHING
    output_dir: str = "results"
    record_model: Optional[str] = None
    workers: int = 1
    excel_report: bool = False

    def __post_init__(self):
        if not self.models:
            raise ConfigurationError("au moins une configuration de modèle est requise", 'models')
        names = [model.name for model in self.models]
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise ConfigurationError(f"noms en double: {', '.join(duplicates)}", 'models')
        if self.protocol is None and not self.dataset.is_synthetic:
            raise ConfigurationError("champ obligatoire manquant", 'protocol')
        if self.record_model is not None and self.record_model not in names:
            raise ConfigurationError(f"configuration inconnue '{self.record_model}'", 'record_model')
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f"doit être un entier sur 64 bits ({self.seed!r})", 'seed')
        for field_name in ('repeats', 'smoothing', 'plot_smoothing', 'workers'):
            value = getattr(self, field_name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigurationError(f"doit être un entier >= 1 ({value!r})", field_name)

    @property
    def stream_config(self) -> Union[ProtocolPConfig, SyntheticStreamConfig]:
        return self.dataset.synthetic if self.dataset.is_synthetic else self.protocol

    @property
    def hyperparams(self) -> Dict[str, HyperParams]:
        """Hyperparamètres par nom, dans l'ordre de déclaration."""
        return {model.name: model.hyperparams for model in self.models}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: str = ".") -> 'ExperimentConfig':
        """
        Créer une configuration depuis un dictionnaire ; les erreurs nomment le
        champ fautif (par exemple ``models[1].alpha2``).

        :param data: Dictionnaire issu du fichier JSON
        :type data: Dict[str, Any]
        :param base_dir: Dossier de référence des chemins relatifs
        :type base_dir: str
        :return: Configuration
        :rtype: ExperimentConfig
        :raises ConfigurationError: Si un champ est absent ou invalide
        """
        if not isinstance(data, dict):
            raise ConfigurationError("le fichier doit contenir un objet JSON")
        for key in ('dataset', 'models', 'seed'):
            if key not in data:
                raise ConfigurationError("champ obligatoire manquant", key)

        try:
            dataset = DatasetConfig.from_dict(data['dataset'], base_dir)
        except ConfigurationError as e:
            raise _prefixed(e, 'dataset')

        protocol = None
        if 'protocol' in data:
            protocol_data = data['protocol']
            if isinstance(protocol_data, str):
                protocol_data = {'preset': protocol_data}
            try:
                protocol = ProtocolPConfig.from_dict(protocol_data)
            except ConfigurationError as e:
                raise _prefixed(e, 'protocol')

        dataset_key = None
        if isinstance(data.get('protocol'), dict):
            dataset_key = data['protocol'].get('preset')
        elif isinstance(data.get('protocol'), str):
            dataset_key = data['protocol']
        dataset_key = dataset_key or dataset.layout_key

        if not isinstance(data['models'], list):
            raise ConfigurationError("doit être une liste", 'models')
        models = []
        for index, model_data in enumerate(data['models']):
            try:
                models.append(ModelConfig.from_dict(model_data, dataset_key))
            except ConfigurationError as e:
                raise _prefixed(e, f"models[{index}]")

        known = {'dataset', 'protocol', 'models', 'seed', 'repeats', 'smoothing', 'plot_smoothing',
                 'output_dir', 'record_model', 'workers', 'excel_report'}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError("champ inconnu", unknown[0])

        output_dir = data.get('output_dir', 'results')
        if not os.path.isabs(output_dir):
            output_dir = os.path.join(base_dir, output_dir)

        return cls(
            dataset=dataset,
            protocol=protocol,
            models=models,
            seed=data['seed'],
            repeats=data.get('repeats', DEFAULT_REPEATS),
            smoothing=data.get('smoothing', DEFAULT_SMOOTHING),
            plot_smoothing=data.get('plot_smoothing', DEFAULT_PLOT_SMOOTHING),
            output_dir=output_dir,
            record_model=data.get('record_model'),
            workers=data.get('workers', 1),
            excel_report=bool(data.get('excel_report', False))
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dataset': self.dataset.to_dict(),
            'protocol': self.protocol.to_dict() if self.protocol else None,
            'models': [model.to_dict() for model in self.models],
            'seed': self.seed,
            'repeats': self.repeats,
            'smoothing': self.smoothing,
            'plot_smoothing': self.plot_smoothing,
            'output_dir': self.output_dir,
            'record_model': self.record_model,
            'workers': self.workers,
            'excel_report': self.excel_report
        }

    def save(self, path: str):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2, ensure_ascii=False)


def load_config(path: str) -> ExperimentConfig:
    """
    Charger une configuration JSON.

    :param path: Fichier de configuration
    :type path: str
    :return: Configuration validée
    :rtype: ExperimentConfig
    :raises ConfigurationError: Si le fichier est absent, illisible ou invalide
    """
    if not os.path.exists(path):
        raise ConfigurationError(f"fichier introuvable: {path}", 'config')
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"JSON invalide ligne {e.lineno}: {e.msg}", 'config')

    return ExperimentConfig.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))

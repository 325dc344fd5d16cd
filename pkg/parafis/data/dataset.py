"""
Chargement des jeux de données statiques (fichiers texte délimités).

La disposition des colonnes est déclarée par la configuration : position de
l'étiquette, séparateur, nombre de caractéristiques.
"""

import logging
import os
import re
from dataclasses import dataclass, field
from typing import List, Dict, Any, Optional, Union, Sequence

import numpy as np
import pandas as pd

from ..utils.constants import DATASET_LAYOUTS
from ..utils.errors import (
    ConfigurationError, DatasetEmptyError, DatasetNotFoundError, ParseError, NonNumericFeatureError
)

logger = logging.getLogger(__name__)

LABEL_POSITIONS = ('first', 'last')


@dataclass
class DatasetLayout:
    """
    Disposition des colonnes d'un fichier de données.

    :param delimiter: Séparateur de champs
    :type delimiter: str
    :param label_position: 'first' ou 'last'
    :type label_position: str
    :param n_features: Nombre de caractéristiques attendu (None = déduit du fichier)
    :type n_features: Optional[int]
    :param has_header: Première ligne d'en-tête
    :type has_header: bool
    :param comment: Préfixe des lignes de commentaire
    :type comment: Optional[str]
    """

    delimiter: str = ','
    label_position: str = 'last'
    n_features: Optional[int] = None
    has_header: bool = False
    comment: Optional[str] = None

    def __post_init__(self):
        if self.label_position not in LABEL_POSITIONS:
            raise ConfigurationError(f"'{self.label_position}' invalide (first ou last)", 'label_position')
        if self.n_features is not None and self.n_features < 1:
            raise ConfigurationError(f"doit être >= 1 ({self.n_features})", 'n_features')
        if not self.delimiter:
            raise ConfigurationError("séparateur vide", 'delimiter')

    @classmethod
    def preset(cls, name: str) -> 'DatasetLayout':
        """
        Disposition prédéfinie (pendigits, letters).

        :param name: Nom du préréglage
        :type name: str
        :return: Disposition
        :rtype: DatasetLayout
        :raises ConfigurationError: Si le préréglage est inconnu
        """
        if name not in DATASET_LAYOUTS:
            raise ConfigurationError(f"disposition inconnue '{name}' ({', '.join(DATASET_LAYOUTS)})", 'layout')
        return cls(**DATASET_LAYOUTS[name])

    @classmethod
    def from_dict(cls, data: Union[str, Dict[str, Any]]) -> 'DatasetLayout':
        """
        Créer une disposition depuis un nom de préréglage ou un dictionnaire.

        :param data: Nom ou dictionnaire (clé 'preset' optionnelle pour partir d'un préréglage)
        :type data: Union[str, Dict[str, Any]]
        :return: Disposition
        :rtype: DatasetLayout
        """
        if isinstance(data, str):
            return cls.preset(data)

        values = dict(DATASET_LAYOUTS[data['preset']]) if data.get('preset') in DATASET_LAYOUTS else {}
        values.update({key: data[key] for key in
                       ('delimiter', 'label_position', 'n_features', 'has_header', 'comment') if key in data})
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'delimiter': self.delimiter,
            'label_position': self.label_position,
            'n_features': self.n_features,
            'has_header': self.has_header,
            'comment': self.comment
        }


@dataclass
class Dataset:
    """
    Jeu de données chargé et normalisé.

    :param name: Nom du jeu de données
    :type name: str
    :param features: Matrice N x n des caractéristiques normalisées dans [0, 1]
    :type features: np.ndarray
    :param labels: Étiquettes brutes (chaînes)
    :type labels: List[str]
    """

    name: str
    features: np.ndarray
    labels: List[str]
    feature_min: Optional[np.ndarray] = field(default=None, repr=False)
    feature_max: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        if self.features.ndim != 2:
            raise ValueError("Les caractéristiques doivent former une matrice")
        if self.features.shape[0] != len(self.labels):
            raise ValueError(f"{self.features.shape[0]} lignes pour {len(self.labels)} étiquettes")
        if any(label == '' for label in self.labels):
            raise ValueError("Étiquette vide")

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def classes(self) -> List[str]:
        """Classes dans l'ordre d'apparition dans le fichier."""
        return list(dict.fromkeys(self.labels))

    def class_counts(self) -> Dict[str, int]:
        return pd.Series(self.labels).value_counts(sort=False).to_dict()

    def summary(self) -> str:
        return f"{self.name}: {len(self)} exemples, {self.n_features} caractéristiques, {len(self.classes)} classes"


def min_max_normalize(features: np.ndarray):
    """
    Normaliser chaque caractéristique dans [0, 1] sur tout le fichier.
    Une caractéristique constante est ramenée à 0.

    :param features: Matrice N x n
    :type features: np.ndarray
    :return: (matrice normalisée, minimums, maximums)
    :rtype: Tuple[np.ndarray, np.ndarray, np.ndarray]
    """
    lower = features.min(axis=0)
    upper = features.max(axis=0)
    span = upper - lower
    scale = np.where(span > 0, span, 1.0)
    normalized = (features - lower) / scale
    normalized[:, span == 0] = 0.0
    return normalized, lower, upper


def _read_table(path: str, layout: DatasetLayout) -> pd.DataFrame:
    if not os.path.exists(path):
        raise DatasetNotFoundError(path)

    try:
        table = pd.read_csv(
            path,
            sep=layout.delimiter,
            header=0 if layout.has_header else None,
            dtype=str,
            comment=layout.comment,
            skipinitialspace=True,
            skip_blank_lines=True,
            keep_default_na=False,
            na_values=['']
        )
    except pd.errors.EmptyDataError:
        raise DatasetEmptyError(path)
    except pd.errors.ParserError as e:
        # Message pandas : "Expected 17 fields in line 5, saw 18"
        match = re.search(r'line (\d+)', str(e))
        raise ParseError(f"{path}: nombre de champs incorrect", int(match.group(1)) if match else None)

    if table.empty:
        raise DatasetEmptyError(path)
    return table


def _parse_table(table: pd.DataFrame, layout: DatasetLayout, path: str):
    first_row = 2 if layout.has_header else 1
    n_columns = table.shape[1]
    if n_columns < 2:
        raise ParseError(f"{path}: au moins une caractéristique et une étiquette sont requises", first_row)
    if layout.n_features is not None and n_columns != layout.n_features + 1:
        raise ParseError(f"{path}: {n_columns} colonnes, attendu {layout.n_features + 1}", first_row)

    missing = table.isna().any(axis=1).to_numpy()
    if missing.any():
        row = int(np.argmax(missing))
        raise ParseError(f"{path}: champ manquant", first_row + row)

    if layout.label_position == 'first':
        labels = table.iloc[:, 0]
        raw_features = table.iloc[:, 1:]
    else:
        labels = table.iloc[:, -1]
        raw_features = table.iloc[:, :-1]

    labels = labels.str.strip()
    empty = (labels == '').to_numpy()
    if empty.any():
        raise ParseError(f"{path}: étiquette vide", first_row + int(np.argmax(empty)))

    features = np.empty(raw_features.shape, dtype=float)
    for column in range(raw_features.shape[1]):
        values = raw_features.iloc[:, column].str.strip()
        numeric = pd.to_numeric(values, errors='coerce')
        invalid = (numeric.isna() | ~np.isfinite(numeric.fillna(0.0))).to_numpy()
        if invalid.any():
            row = int(np.argmax(invalid))
            raise NonNumericFeatureError(first_row + row, column + 1, values.iloc[row])
        features[:, column] = numeric.to_numpy(dtype=float)

    return features, labels.tolist()


def load_dataset(path: Union[str, Sequence[str]], layout: Optional[DatasetLayout] = None,
                 name: Optional[str] = None, normalize: bool = True) -> Dataset:
    """
    Charger un jeu de données délimité.

    Plusieurs fichiers (par exemple apprentissage puis test) sont concaténés dans
    l'ordre donné. La normalisation min-max est calculée sur l'ensemble des lignes.

    :param path: Chemin ou liste de chemins
    :type path: Union[str, Sequence[str]]
    :param layout: Disposition des colonnes (défaut : étiquette en dernier, virgules)
    :type layout: Optional[DatasetLayout]
    :param name: Nom du jeu de données (défaut : nom du premier fichier)
    :type name: Optional[str]
    :param normalize: Appliquer la normalisation min-max
    :type normalize: bool
    :return: Jeu de données
    :rtype: Dataset
    :raises DatasetNotFoundError: Si un fichier est absent
    :raises DatasetEmptyError: Si un fichier est vide
    :raises ParseError: Si une ligne est mal formée
    :raises NonNumericFeatureError: Si une caractéristique n'est pas numérique
    """
    layout = layout or DatasetLayout()
    paths = [path] if isinstance(path, (str, os.PathLike)) else list(path)
    if not paths:
        raise ConfigurationError("aucun fichier", 'path')

    blocks, labels = [], []
    for file_path in map(str, paths):
        features, file_labels = _parse_table(_read_table(file_path, layout), layout, file_path)
        if blocks and features.shape[1] != blocks[0].shape[1]:
            raise ParseError(f"{file_path}: {features.shape[1]} caractéristiques, attendu {blocks[0].shape[1]}")
        blocks.append(features)
        labels.extend(file_labels)

    features = np.vstack(blocks)
    feature_min = feature_max = None
    if normalize:
        features, feature_min, feature_max = min_max_normalize(features)

    dataset = Dataset(
        name=name or os.path.splitext(os.path.basename(str(paths[0])))[0],
        features=features,
        labels=labels,
        feature_min=feature_min,
        feature_max=feature_max
    )
    logger.info("Jeu de données chargé: %s", dataset.summary())
    return dataset

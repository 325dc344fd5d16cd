"""
Export et relecture des fichiers CSV de résultats.

Tous les fichiers sont écrits sans horodatage, avec un format de nombres fixe,
pour que deux exécutions identiques produisent des fichiers identiques octet
par octet.
"""

import logging
import os
from typing import List, Mapping, Sequence, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..calculations.fitting import PhaseFit, SummaryRow
from ..utils.constants import (
    CSV_FLOAT_FORMAT, RECORD_COLUMNS, FIT_COLUMNS, ACCURACY_COLUMNS, SUMMARY_COLUMNS, PLOT_COLUMNS
)
from ..utils.errors import RecordFormatError

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def _write(df: pd.DataFrame, path: PathLike):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep='nan', lineterminator='\n')
    logger.debug("Fichier écrit: %s", path)


def write_record_csv(record: pd.DataFrame, path: PathLike):
    """
    Écrire un tableau ``step, score, smoothed, phase``.

    :param record: Tableau (PrequentialRecord.to_dataframe ou moyenne)
    :type record: pd.DataFrame
    :param path: Fichier de sortie
    :type path: PathLike
    """
    _write(record[RECORD_COLUMNS], path)


def write_fits_csv(fits: Mapping[str, List[PhaseFit]], path: PathLike):
    """
    Écrire les ajustements par phase : ``config, phase, S_plus_smin, tau, residual``.

    :param fits: Ajustements par configuration
    :type fits: Mapping[str, List[PhaseFit]]
    :param path: Fichier de sortie
    :type path: PathLike
    """
    rows = [{'config': name, 'phase': fit.phase, 'S_plus_smin': fit.steady_state,
             'tau': fit.tau, 'residual': fit.residual}
            for name, phase_fits in fits.items() for fit in phase_fits]
    _write(pd.DataFrame(rows, columns=FIT_COLUMNS), path)


def write_accuracy_csv(accuracies: Mapping[str, float], path: PathLike):
    rows = [{'config': name, 'mean_acc': accuracy} for name, accuracy in accuracies.items()]
    _write(pd.DataFrame(rows, columns=ACCURACY_COLUMNS), path)


def write_summary_csv(rows: Sequence[SummaryRow], path: PathLike):
    """
    Écrire le tableau de synthèse ``config, S_plus_smin, tau, mean_acc``.

    :param rows: Lignes de synthèse
    :type rows: Sequence[SummaryRow]
    :param path: Fichier de sortie
    :type path: PathLike
    """
    _write(pd.DataFrame([row.to_dict() for row in rows], columns=SUMMARY_COLUMNS), path)


def write_plot_csv(curve: Sequence[float], path: PathLike):
    """Courbe de tracé ``step, smoothed_score``."""
    curve = np.asarray(curve, dtype=float)
    _write(pd.DataFrame({'step': np.arange(len(curve)), 'smoothed_score': curve}, columns=PLOT_COLUMNS), path)


def read_score_csv(path: PathLike) -> Tuple[np.ndarray, Optional[List[str]]]:
    """
    Relire une courbe de score : fichier de scores (``smoothed``, ``phase``) ou
    courbe de tracé (``smoothed_score``).

    :param path: Fichier CSV
    :type path: PathLike
    :return: (courbe lissée, phases ou None)
    :rtype: Tuple[np.ndarray, Optional[List[str]]]
    :raises RecordFormatError: Si le fichier est absent ou mal formé
    """
    if not os.path.exists(path):
        raise RecordFormatError(f"Fichier introuvable: {path}")

    try:
        df = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise RecordFormatError(f"{path}: CSV illisible ({e})")

    column = next((name for name in ('smoothed', 'smoothed_score') if name in df.columns), None)
    if column is None:
        raise RecordFormatError(f"{path}: colonne 'smoothed' ou 'smoothed_score' absente")

    values = pd.to_numeric(df[column], errors='coerce')
    if values.isna().any():
        row = int(np.argmax(values.isna().to_numpy())) + 2
        raise RecordFormatError(f"{path}: valeur non numérique ligne {row}")

    phases = df['phase'].astype(str).tolist() if 'phase' in df.columns else None
    return values.to_numpy(dtype=float), phases

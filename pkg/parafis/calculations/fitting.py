"""
Analyse des scores prequential : lissage, ajustement du modèle de réactivité
y(t) = S (1 - exp(-t / tau)) + s_min sur chaque phase, et tableaux de synthèse.

Pour tau fixé, (S, s_min) est la solution d'un problème linéaire borné
(S >= 0, s_min >= 0, S + s_min <= 1) ; tau est cherché sur une grille puis
affiné par minimisation scalaire bornée de log(tau).
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Dict, Any, Mapping, Sequence, Tuple, Optional

import numpy as np
import pandas as pd
from scipy.optimize import lsq_linear, minimize_scalar

from ..utils.constants import (
    TAU_GRID, MIN_PHASE_LENGTH, FLAT_AMPLITUDE, REFINEMENT_XATOL, REFINEMENT_MAXITER, BOUND_MARGIN, PHASES,
    ERROR_MESSAGES
)
from ..utils.errors import FitError

logger = logging.getLogger(__name__)


@dataclass
class PhaseFit:
    """
    Paramètres ajustés du modèle de réactivité sur une phase.

    :param phase: Nom de la phase
    :type phase: str
    :param S: Amplitude du score
    :type S: float
    :param s_min: Score initial
    :type s_min: float
    :param tau: Temps caractéristique en nombre d'exemples (NaN si non identifiable)
    :type tau: float
    :param residual: Erreur quadratique moyenne de l'ajustement
    :type residual: float
    :param converged: L'affinement a convergé à l'intérieur de l'intervalle de recherche
    :type converged: bool
    :param identifiable: tau est identifiable (courbe non plate)
    :type identifiable: bool
    """

    phase: str
    S: float
    s_min: float
    tau: float
    residual: float
    converged: bool = True
    identifiable: bool = True

    @property
    def steady_state(self) -> float:
        """Score asymptotique S + s_min."""
        return self.S + self.s_min

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        """
        Évaluer la courbe ajustée.

        :param t: Instants depuis le début de la phase
        :type t: np.ndarray
        :return: y(t)
        :rtype: np.ndarray
        """
        t = np.asarray(t, dtype=float)
        if not self.identifiable:
            return np.full_like(t, self.s_min)
        return self.S * (1.0 - np.exp(-t / self.tau)) + self.s_min

    def to_dict(self) -> Dict[str, Any]:
        return {
            'phase': self.phase,
            'S': self.S,
            's_min': self.s_min,
            'S_plus_smin': self.steady_state,
            'tau': self.tau,
            'residual': self.residual,
            'converged': self.converged,
            'identifiable': self.identifiable
        }


@dataclass
class SummaryRow:
    """
    Ligne du tableau de synthèse d'une configuration.

    :param config: Nom de la configuration
    :type config: str
    :param fits: Ajustements par phase, dans l'ordre A, B, C
    :type fits: List[PhaseFit]
    :param mean_acc: Précision moyenne sur tout le flux
    :type mean_acc: float
    """

    config: str
    fits: List[PhaseFit]
    mean_acc: float

    @property
    def mean_steady_state(self) -> float:
        """Moyenne non pondérée de S + s_min sur les phases."""
        if not self.fits:
            return math.nan
        return float(np.mean([fit.steady_state for fit in self.fits]))

    @property
    def mean_tau(self) -> float:
        """Moyenne non pondérée de tau, phases plates exclues."""
        taus = [fit.tau for fit in self.fits if not math.isnan(fit.tau)]
        return float(np.mean(taus)) if taus else math.nan

    def to_dict(self) -> Dict[str, Any]:
        return {
            'config': self.config,
            'S_plus_smin': self.mean_steady_state,
            'tau': self.mean_tau,
            'mean_acc': self.mean_acc
        }


def smooth(series: Sequence[float], n: int) -> np.ndarray:
    """
    Moyenne glissante sur les n derniers points ; les n - 1 premiers points sont
    moyennés sur le préfixe disponible.

    :param series: Scores
    :type series: Sequence[float]
    :param n: Taille de la fenêtre
    :type n: int
    :return: Série lissée
    :rtype: np.ndarray
    """
    if n < 1:
        raise ValueError(f"Fenêtre de lissage invalide: {n}")
    values = np.asarray(series, dtype=float)
    if values.size == 0:
        return values.copy()
    smoothed = pd.Series(values).rolling(n, min_periods=1).mean().to_numpy()
    return np.clip(smoothed, values.min(), values.max())


def _solve_linear(t: np.ndarray, y: np.ndarray, tau: float) -> Tuple[float, float, float]:
    """
    (S, s_min, somme des carrés) pour tau fixé, sous les contraintes S >= 0,
    s_min >= 0 et S + s_min <= 1.
    """
    rising = 1.0 - np.exp(-t / tau)
    basis = np.column_stack([rising, np.ones_like(t)])
    S, s_min = lsq_linear(basis, y, bounds=([0.0, 0.0], [1.0, 1.0]), method='bvls').x

    if S + s_min > 1.0:
        # Optimum sur l'arête S + s_min = 1 : y - rising = s_min (1 - rising)
        remaining = 1.0 - rising
        s_min = float(lsq_linear(remaining[:, None], y - rising, bounds=([0.0], [1.0]), method='bvls').x[0])
        S = 1.0 - s_min

    residuals = y - (S * rising + s_min)
    return float(S), float(s_min), float(residuals @ residuals)


def _on_bound(tau: float, lower: float, upper: float) -> bool:
    margin = BOUND_MARGIN * math.log(upper / lower)
    return math.log(tau / lower) <= margin or math.log(upper / tau) <= margin


def fit_phase(series: Sequence[float], phase: str = 'A',
              tau_grid: Sequence[float] = TAU_GRID) -> PhaseFit:
    """
    Ajuster y(t) = S (1 - exp(-t / tau)) + s_min par moindres carrés, avec t
    remis à 0 au début de la phase.

    :param series: Scores lissés de la phase
    :type series: Sequence[float]
    :param phase: Nom de la phase
    :type phase: str
    :param tau_grid: Grille de départ pour tau
    :type tau_grid: Sequence[float]
    :return: Paramètres ajustés
    :rtype: PhaseFit
    :raises FitError: Si la phase compte moins de 10 points
    """
    y = np.asarray(series, dtype=float)
    if y.size < MIN_PHASE_LENGTH:
        raise FitError(f"{ERROR_MESSAGES['phase_too_short']} "
                       f"({phase}: {y.size} points, minimum {MIN_PHASE_LENGTH})")
    if not np.all(np.isfinite(y)):
        raise FitError(f"phase {phase}: valeurs non finies")

    t = np.arange(y.size, dtype=float)
    grid = sorted(float(tau) for tau in tau_grid)
    candidates = [(_solve_linear(t, y, tau), tau) for tau in grid]
    best = int(np.argmin([candidate[0][2] for candidate in candidates]))
    (S, s_min, sse), tau = candidates[best]

    lower = grid[best - 1] if best > 0 else grid[0] / 10.0
    upper = grid[best + 1] if best < len(grid) - 1 else grid[-1] * 10.0
    result = minimize_scalar(
        lambda log_tau: _solve_linear(t, y, math.exp(log_tau))[2],
        bounds=(math.log(lower), math.log(upper)),
        method='bounded',
        options={'xatol': REFINEMENT_XATOL, 'maxiter': REFINEMENT_MAXITER}
    )

    converged = bool(result.success)
    if converged:
        refined_tau = math.exp(float(result.x))
        refined = _solve_linear(t, y, refined_tau)
        if refined[2] <= sse:
            (S, s_min, sse), tau = refined, refined_tau
        if abs(S) >= FLAT_AMPLITUDE and _on_bound(tau, lower, upper):
            converged = False
            logger.warning("Phase %s: tau=%.4g atteint une borne de recherche [%.4g, %.4g]",
                           phase, tau, lower, upper)
    else:
        logger.warning("Phase %s: affinement de tau non convergé, meilleur point de grille conservé", phase)

    identifiable = abs(S) >= FLAT_AMPLITUDE
    if not identifiable:
        # Toute valeur de tau convient à une courbe plate
        S, s_min, tau = 0.0, float(np.mean(y)), math.nan
        sse = float(np.sum((y - s_min) ** 2))

    return PhaseFit(
        phase=phase,
        S=S,
        s_min=s_min,
        tau=tau,
        residual=math.sqrt(sse / y.size),
        converged=converged,
        identifiable=identifiable
    )


def phase_names(count: int) -> List[str]:
    return [PHASES[i] if i < len(PHASES) else f"P{i + 1}" for i in range(count)]


def fit_phases(series: Sequence[float], phases: Sequence[str]) -> List[PhaseFit]:
    """
    Ajuster chaque segment contigu de phase.

    :param series: Scores lissés du flux complet
    :type series: Sequence[float]
    :param phases: Phase de chaque point
    :type phases: Sequence[str]
    :return: Un ajustement par phase, dans l'ordre du flux
    :rtype: List[PhaseFit]
    """
    values = np.asarray(series, dtype=float)
    if len(values) != len(phases):
        raise ValueError(f"{len(values)} scores pour {len(phases)} phases")

    fits = []
    start = 0
    for index in range(1, len(phases) + 1):
        if index == len(phases) or phases[index] != phases[start]:
            fits.append(fit_phase(values[start:index], phase=str(phases[start])))
            start = index
    return fits


def fit_with_boundaries(series: Sequence[float], boundaries: Optional[Sequence[int]] = None) -> List[PhaseFit]:
    """
    Ajuster une série découpée par des bornes cumulées (par exemple 2000, 6000).

    :param series: Scores lissés
    :type series: Sequence[float]
    :param boundaries: Débuts des phases suivant la première ; une dernière borne
        égale à la longueur de la série (T3) marque sa fin et est ignorée
    :type boundaries: Optional[Sequence[int]]
    :return: Un ajustement par phase
    :rtype: List[PhaseFit]
    :raises FitError: Si une borne sort de la série ou si une phase est trop courte
    """
    values = np.asarray(series, dtype=float)
    inner = sorted(int(b) for b in (boundaries or []))
    if inner and inner[-1] == len(values):
        inner.pop()
    cuts = [0] + inner + [len(values)]
    if cuts[1:-1] and (cuts[1] <= 0 or cuts[-2] >= len(values)):
        raise FitError(f"bornes {list(boundaries)} hors de la série de {len(values)} points")

    names = phase_names(len(cuts) - 1)
    return [fit_phase(values[start:end], phase=name) for name, start, end in zip(names, cuts, cuts[1:])]


def summarize(fits: Mapping[str, List[PhaseFit]], accuracies: Mapping[str, float]) -> List[SummaryRow]:
    """
    Construire le tableau de synthèse : par configuration, moyennes non
    pondérées sur les phases de S + s_min et tau, et précision moyenne.

    :param fits: Ajustements par configuration
    :type fits: Mapping[str, List[PhaseFit]]
    :param accuracies: Précision moyenne par configuration
    :type accuracies: Mapping[str, float]
    :return: Lignes dans l'ordre des configurations
    :rtype: List[SummaryRow]
    """
    return [SummaryRow(config=name, fits=list(phase_fits), mean_acc=float(accuracies.get(name, math.nan)))
            for name, phase_fits in fits.items()]


def summary_dataframe(rows: Sequence[SummaryRow]) -> pd.DataFrame:
    """Tableau pandas ``config, S_plus_smin, tau, mean_acc``."""
    return pd.DataFrame([row.to_dict() for row in rows], columns=['config', 'S_plus_smin', 'tau', 'mean_acc'])

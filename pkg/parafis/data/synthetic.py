"""
Flux synthétique à deux classes gaussiennes en 2D, avec une dérive brutale.

La classe ``a`` est centrée en 0 avec l'écart-type ``sigma``. La classe ``b``,
plus resserrée (``b_ratio * sigma``), est à ``gap`` écarts-types sur le premier
axe. À l'instant ``drift_at`` la moyenne de ``a`` saute de ``jump`` écarts-types
sur ce même axe et passe au-delà de ``b`` : la conclusion linéaire apprise pour
séparer ``a`` de ``b`` classe alors les nouveaux points de ``a`` dans ``b``.
"""

from dataclasses import dataclass, replace
from typing import Dict, Any

import numpy as np

from .protocol import DriftStream, make_rng
from ..utils.errors import ConfigurationError

CLASS_A_MEAN = (0.0, 0.0)
DRIFT_AXIS = (1.0, 0.0)


@dataclass(frozen=True)
class SyntheticStreamConfig:
    """
    Paramètres du flux synthétique.

    :param length: Nombre d'exemples
    :type length: int
    :param drift_at: Instant du saut (premier exemple de la phase B)
    :type drift_at: int
    :param sigma: Écart-type de la classe a
    :type sigma: float
    :param jump: Amplitude du saut de la classe a, en écarts-types
    :type jump: float
    :param gap: Distance entre les classes a et b avant le saut, en écarts-types
    :type gap: float
    :param b_ratio: Écart-type de la classe b rapporté à sigma
    :type b_ratio: float
    :param seed: Graine
    :type seed: int
    """

    length: int = 1000
    drift_at: int = 500
    sigma: float = 1.0
    jump: float = 10.0
    gap: float = 4.0
    b_ratio: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if self.length < 2:
            raise ConfigurationError(f"doit être >= 2 ({self.length})", 'length')
        if not 0 < self.drift_at < self.length:
            raise ConfigurationError(f"doit être dans ]0, {self.length}[ ({self.drift_at})", 'drift_at')
        for field_name in ('sigma', 'gap', 'b_ratio'):
            if getattr(self, field_name) <= 0:
                raise ConfigurationError(f"doit être positif ({getattr(self, field_name)})", field_name)

    @property
    def class_b_mean(self) -> np.ndarray:
        return np.asarray(CLASS_A_MEAN) + self.gap * self.sigma * np.asarray(DRIFT_AXIS)

    @property
    def drifted_a_mean(self) -> np.ndarray:
        return np.asarray(CLASS_A_MEAN) + self.jump * self.sigma * np.asarray(DRIFT_AXIS)

    def with_seed(self, seed: int) -> 'SyntheticStreamConfig':
        return replace(self, seed=seed)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SyntheticStreamConfig':
        return cls(
            length=int(data.get('length', 1000)),
            drift_at=int(data.get('drift_at', 500)),
            sigma=float(data.get('sigma', 1.0)),
            jump=float(data.get('jump', 10.0)),
            gap=float(data.get('gap', 4.0)),
            b_ratio=float(data.get('b_ratio', 0.25)),
            seed=int(data.get('seed', 0))
        )

    def to_dict(self) -> Dict[str, Any]:
        return {'length': self.length, 'drift_at': self.drift_at, 'sigma': self.sigma,
                'jump': self.jump, 'gap': self.gap, 'b_ratio': self.b_ratio, 'seed': self.seed}


def generate_synthetic_stream(cfg: SyntheticStreamConfig) -> DriftStream:
    """
    Générer le flux synthétique.

    Chaque exemple est de classe ``a`` ou ``b`` avec probabilité 1/2.

    :param cfg: Paramètres
    :type cfg: SyntheticStreamConfig
    :return: Flux avec les phases A (avant le saut) et B (après)
    :rtype: DriftStream
    """
    rng = make_rng(cfg.seed)
    is_b = rng.integers(0, 2, size=cfg.length).astype(bool)
    noise = rng.normal(0.0, 1.0, size=(cfg.length, 2))

    after = np.arange(cfg.length) >= cfg.drift_at
    means = np.where(after[:, None], cfg.drifted_a_mean, CLASS_A_MEAN)
    means[is_b] = cfg.class_b_mean
    spreads = np.where(is_b, cfg.b_ratio * cfg.sigma, cfg.sigma)

    return DriftStream(
        features=means + spreads[:, None] * noise,
        labels=['b' if flag else 'a' for flag in is_b],
        phases=['B' if flag else 'A' for flag in after],
        drift_times=(cfg.drift_at,),
        name='synthetic',
        seed=cfg.seed
    )

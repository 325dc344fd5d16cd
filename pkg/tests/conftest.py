"""
Fixtures communes des tests de ParaFIS
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from parafis.data.dataset import Dataset
from parafis.data.protocol import DriftStream
from parafis.models.hyperparams import HyperParams
from parafis.models.rule import Rule
from parafis.models.rule_system import RuleSystem


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="exécuter les expériences longues")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: expérience longue (--runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="expérience longue, utiliser --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def make_rule(center, covariance=None, conclusion=None, n_classes=1, omega=100.0, count=0):
    """Règle de test ; covariance identité et conclusion nulle par défaut."""
    center = np.asarray(center, dtype=float)
    n = center.shape[0]
    return Rule(
        center=center,
        covariance=np.eye(n) if covariance is None else np.asarray(covariance, dtype=float),
        conclusion=np.zeros((n_classes, n + 1)) if conclusion is None else np.asarray(conclusion, dtype=float),
        correlation=omega * np.eye(n + 1),
        sample_count=count
    )


def make_system(rules, classes, hyperparams=None):
    """Système sans module d'anticipation construit à partir de règles."""
    return RuleSystem(
        feature_dim=rules[0].feature_dim if rules else 2,
        hyperparams=hyperparams or HyperParams(),
        rules=list(rules),
        classes=list(classes)
    )


def gaussian_stream(centers, n_points, sigma, seed=0):
    """Flux à classes gaussiennes tirées au hasard, sans dérive."""
    rng = np.random.default_rng(seed)
    labels = [f"c{i}" for i in rng.integers(0, len(centers), size=n_points)]
    means = np.array([centers[int(label[1:])] for label in labels], dtype=float)
    features = means + rng.normal(0.0, sigma, size=means.shape)
    return DriftStream(features=features, labels=labels, phases=['A'] * n_points)


@pytest.fixture
def six_class_dataset():
    """300 exemples, 6 classes de 50 exemples, apparues dans l'ordre c0..c5."""
    rng = np.random.default_rng(3)
    labels = [f"c{i % 6}" for i in range(300)]
    return Dataset(name="toy", features=rng.random((300, 4)), labels=labels)


@pytest.fixture
def toy_dataset_file(tmp_path):
    """Fichier au format pendigits (étiquette en dernier) : 4 classes de 60 exemples."""
    rng = np.random.default_rng(11)
    centers = rng.integers(0, 100, size=(4, 16))
    lines = []
    for i in range(240):
        label = i % 4
        values = np.clip(centers[label] + rng.integers(-5, 6, size=16), 0, 100)
        lines.append(",".join(f"{v:3d}" for v in values) + f",{label:2d}")
    path = tmp_path / "toy.tra"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path

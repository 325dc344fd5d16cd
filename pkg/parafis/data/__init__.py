"""
Accès aux données : jeux de données, protocole P et flux synthétiques
"""

from .dataset import DatasetLayout, Dataset, load_dataset
from .protocol import ProtocolPConfig, DriftStream, build_protocol_p, derive_seed
from .synthetic import SyntheticStreamConfig, generate_synthetic_stream

__all__ = [
    'DatasetLayout', 'Dataset', 'load_dataset',
    'ProtocolPConfig', 'DriftStream', 'build_protocol_p', 'derive_seed',
    'SyntheticStreamConfig', 'generate_synthetic_stream'
]

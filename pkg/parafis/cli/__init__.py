"""
Ligne de commande pour ParaFIS
"""

from .config import ExperimentConfig, ModelConfig, DatasetConfig, load_config
from .commands import cmd_run, cmd_replay, cmd_fit, build_parser, main

__all__ = [
    'ExperimentConfig', 'ModelConfig', 'DatasetConfig', 'load_config',
    'cmd_run', 'cmd_replay', 'cmd_fit', 'build_parser', 'main'
]

"""
Configuration de la journalisation
"""

import logging
import os

from .constants import DEBUG_ENV_VAR

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def debug_enabled() -> bool:
    """
    Indiquer si le mode debug est activé par la variable d'environnement ``PARAFIS_DEBUG``.

    :return: True si ``PARAFIS_DEBUG=1``
    :rtype: bool
    """
    return os.environ.get(DEBUG_ENV_VAR, '') == '1'


def configure_logging(verbose: bool = False) -> logging.Logger:
    """
    Installer un gestionnaire unique sur le logger ``parafis``.

    :param verbose: Forcer le niveau DEBUG
    :type verbose: bool
    :return: Le logger racine du paquet
    :rtype: logging.Logger
    """
    logger = logging.getLogger('parafis')
    level = logging.DEBUG if (verbose or debug_enabled()) else logging.INFO
    logger.setLevel(level)

    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)

    return logger

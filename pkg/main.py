#!/usr/bin/env python3
"""
Point d'entrée principal de ParaFIS

Exemples ::

    python main.py run --config experiments/pendigits.json --repeats 10
    python main.py replay --config experiments/letters_init.json --trace results/letters_init/traces/Para1_rep0.trace
    python main.py fit results/pendigits/records/Para1_mean.csv --boundaries 2000,5000
"""

import sys
import os

# Ajouter le répertoire parent au path pour les imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from parafis.cli.commands import main


if __name__ == "__main__":
    sys.exit(main())

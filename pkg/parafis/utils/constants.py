"""
Constantes pour ParaFIS
"""

# Paramètres du modèle (valeurs par défaut des expériences)
DEFAULT_OMEGA = 100.0  # Initialisation de la matrice de corrélation C = Omega * Id
DEFAULT_N_MIN = 20  # Condition 2 (inertie)
DEFAULT_ALPHA1 = 1.0
DEFAULT_ALPHA2 = 0.9
DEFAULT_KAPPA = 2.6
DEFAULT_M_EXP = 4.0
INIT_COVARIANCE_SCALE = 1.0 / 100  # cov_kl = 1/100 delta_kl
I3_COVARIANCE_DIVISOR = 10.0

# Stabilité numérique
EIGENVALUE_FLOOR = 1e-10

# Évaluation prequential
DEFAULT_SMOOTHING = 5
DEFAULT_PLOT_SMOOTHING = 100
DEFAULT_REPEATS = 1
PAPER_REPEATS = 100
PHASES = ('A', 'B', 'C')

# Ajustement du modèle de réactivité
TAU_GRID = (10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0)
MIN_PHASE_LENGTH = 10
FLAT_AMPLITUDE = 1e-6  # |S| en dessous duquel tau n'est pas identifiable
REFINEMENT_XATOL = 1e-12  # tolérance sur log(tau)
REFINEMENT_MAXITER = 500
BOUND_MARGIN = 1e-3  # fraction de l'intervalle de log(tau) considérée comme une borne

# Dispositions des fichiers UCI
DATASET_LAYOUTS = {
    'pendigits': {
        'delimiter': ',',
        'label_position': 'last',
        'n_features': 16
    },
    'letters': {
        'delimiter': ',',
        'label_position': 'first',
        'n_features': 16
    }
}

# Protocole P (T1, T2, T3 cumulés)
PROTOCOL_PRESETS = {
    'letters': {'t1': 2000, 't2': 6000, 't3': 10000, 'n1': 10, 'n2': 10, 'n3': 6},
    'pendigits': {'t1': 2000, 't2': 5000, 't3': 8000, 'n1': 4, 'n2': 3, 'n3': 3},
    'laviola': {'t1': 2000, 't2': 5000, 't3': 8000, 'n1': 10, 'n2': 10, 'n3': 10}
}

# Paramètres GEFS* par jeu de données
GEFS_KAPPA = {
    'letters': 1.6,
    'pendigits': 2.6,
    'laviola': 2.5
}

# Configurations de modèles prédéfinies
MODEL_PRESETS = {
    'Para1': {'creation_rule': 'separability', 'init_method': 'anticipation',
              'alpha1': 1.0, 'alpha2': 0.9},
    'Para2': {'creation_rule': 'separability', 'init_method': 'anticipation',
              'alpha1': 1.0, 'alpha2': 0.95},
    'I1': {'creation_rule': 'separability', 'init_method': 'I1'},
    'I2': {'creation_rule': 'separability', 'init_method': 'I2'},
    'I3': {'creation_rule': 'separability', 'init_method': 'I3'},
    'GEFS*': {'creation_rule': 'gefs_star', 'init_method': 'I2', 'm_exp': 4.0}
}

# Fichiers de sortie
OUTPUT_FILES = {
    'records_dir': 'records',
    'traces_dir': 'traces',
    'plots_dir': 'plots',
    'replay_dir': 'replay',
    'fits': 'fits.csv',
    'accuracy': 'accuracy.csv',
    'summary': 'summary.csv',
    'excel': 'summary.xlsx'
}

RECORD_COLUMNS = ['step', 'score', 'smoothed', 'phase']
FIT_COLUMNS = ['config', 'phase', 'S_plus_smin', 'tau', 'residual']
ACCURACY_COLUMNS = ['config', 'mean_acc']
SUMMARY_COLUMNS = ['config', 'S_plus_smin', 'tau', 'mean_acc']
PLOT_COLUMNS = ['step', 'smoothed_score']
CSV_FLOAT_FORMAT = '%.12g'

# Codes de sortie de la ligne de commande
EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

# Variable d'environnement pour le mode debug
DEBUG_ENV_VAR = 'PARAFIS_DEBUG'
DATA_DIR_ENV_VAR = 'PARAFIS_DATA_DIR'

# Messages d'erreur standardisés
ERROR_MESSAGES = {
    'no_rules': "Aucune règle dans le système",
    'degenerate_covariance': "Matrice de covariance dégénérée",
    'undefined_direction': "Direction indéfinie (vecteur nul)",
    'dataset_empty': "Le fichier de données est vide",
    'dataset_not_found': "Fichier de données introuvable",
    'trace_mismatch': "La trace ne correspond pas au flux",
    'phase_too_short': "Phase trop courte pour l'ajustement",
    'unexpected': "Erreur inattendue"
}

# Messages de statut
STATUS_MESSAGES = {
    'loading': "Chargement des données...",
    'running': "Tests prequential en cours...",
    'replaying': "Rejeu de la trace en cours...",
    'fitting': "Ajustement du modèle de réactivité...",
    'writing': "Écriture des résultats...",
    'complete': "Expérience terminée",
    'error': "Erreur détectée"
}

"""
Ligne de commande de ParaFIS : ``run``, ``replay`` et ``fit``.

Codes de sortie : 0 succès, 1 erreur d'exécution, 2 erreur d'utilisation ou
de configuration.
"""

import argparse
import logging
import os
import sys
import traceback
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

from .config import ExperimentConfig, load_config, slugify
from ..calculations.fitting import PhaseFit, fit_phases, fit_with_boundaries, fit_phase, summarize
from ..calculations.prequential import (
    ConfigAggregate, RepeatedRunResult, repeated_runs, run_repeat
)
from ..data.dataset import load_dataset
from ..data.protocol import derive_seed
from ..export.csv_export import (
    write_record_csv, write_fits_csv, write_accuracy_csv, write_summary_csv, write_plot_csv, read_score_csv
)
from ..export.excel_export import export_summary_to_excel
from ..models.events import DriftTrace
from ..utils.constants import (
    OUTPUT_FILES, PAPER_REPEATS, STATUS_MESSAGES, ERROR_MESSAGES, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE
)
from ..utils.errors import ParafisError, ConfigurationError
from ..utils.log import configure_logging, debug_enabled

logger = logging.getLogger(__name__)


def _load_source(config: ExperimentConfig):
    if config.dataset.is_synthetic:
        return None
    return load_dataset(config.dataset.paths, config.dataset.layout, name=config.dataset.name)


def _fit_aggregates(result: RepeatedRunResult) -> Dict[str, List[PhaseFit]]:
    return {name: fit_phases(aggregate.mean_smoothed, aggregate.phases)
            for name, aggregate in result.aggregates.items()}


def write_outputs(config: ExperimentConfig, result: RepeatedRunResult, output_dir: str):
    """
    Écrire tous les fichiers de résultats d'une expérience.

    :param config: Configuration
    :type config: ExperimentConfig
    :param result: Résultats agrégés
    :type result: RepeatedRunResult
    :param output_dir: Dossier de sortie
    :type output_dir: str
    :return: Lignes de synthèse
    :rtype: List[SummaryRow]
    """
    records_dir = os.path.join(output_dir, OUTPUT_FILES['records_dir'])
    traces_dir = os.path.join(output_dir, OUTPUT_FILES['traces_dir'])
    plots_dir = os.path.join(output_dir, OUTPUT_FILES['plots_dir'])
    for directory in (records_dir, traces_dir, plots_dir):
        os.makedirs(directory, exist_ok=True)

    for name, aggregate in result.aggregates.items():
        slug = slugify(name)
        for run in aggregate.runs:
            write_record_csv(run.record.to_dataframe(), os.path.join(records_dir, f"{slug}_rep{run.repeat}.csv"))
            run.trace.save(os.path.join(traces_dir, f"{slug}_rep{run.repeat}.trace"))
        write_record_csv(aggregate.mean_record(), os.path.join(records_dir, f"{slug}_mean.csv"))
        write_plot_csv(aggregate.mean_curve(config.plot_smoothing), os.path.join(plots_dir, f"{slug}.csv"))

    fits = _fit_aggregates(result)
    accuracies = {name: aggregate.mean_accuracy for name, aggregate in result.aggregates.items()}
    summary = summarize(fits, accuracies)

    write_fits_csv(fits, os.path.join(output_dir, OUTPUT_FILES['fits']))
    write_accuracy_csv(accuracies, os.path.join(output_dir, OUTPUT_FILES['accuracy']))
    write_summary_csv(summary, os.path.join(output_dir, OUTPUT_FILES['summary']))
    if config.excel_report:
        export_summary_to_excel(summary, fits, os.path.join(output_dir, OUTPUT_FILES['excel']))
    return summary


def _print_summary(summary):
    print(f"{'Configuration':<16}{'<S+s_min> (%)':>15}{'<tau>':>10}{'<Acc> (%)':>12}")
    for row in summary:
        print(f"{row.config:<16}{100 * row.mean_steady_state:>15.1f}{row.mean_tau:>10.0f}{100 * row.mean_acc:>12.1f}")


def _apply_overrides(config: ExperimentConfig, out: Optional[str], seed: Optional[int],
                     repeats: Optional[int], long_run: bool = False) -> ExperimentConfig:
    changes = {}
    if out is not None:
        changes['output_dir'] = out
    if seed is not None:
        changes['seed'] = seed
    if repeats is not None:
        changes['repeats'] = repeats
    if long_run:
        changes['repeats'] = PAPER_REPEATS
    return replace(config, **changes) if changes else config


def cmd_run(config_file: str, out: Optional[str] = None, seed: Optional[int] = None,
            repeats: Optional[int] = None, long_run: bool = False) -> int:
    """
    Exécuter les répétitions prequential de toutes les configurations et écrire
    les résultats.

    :param config_file: Fichier de configuration JSON
    :type config_file: str
    :param out: Dossier de sortie (remplace la configuration)
    :type out: Optional[str]
    :param seed: Graine maîtresse (remplace la configuration)
    :type seed: Optional[int]
    :param repeats: Nombre de répétitions (remplace la configuration)
    :type repeats: Optional[int]
    :param long_run: Réglage complet (m = 100)
    :type long_run: bool
    :return: Code de sortie
    :rtype: int
    """
    config = _apply_overrides(load_config(config_file), out, seed, repeats, long_run)

    print(f"⏳ {STATUS_MESSAGES['loading']}")
    dataset = _load_source(config)

    print(f"⏳ {STATUS_MESSAGES['running']} ({config.repeats} répétition(s), {len(config.models)} configuration(s))")
    result = repeated_runs(dataset, config.stream_config, config.repeats, config.hyperparams,
                           master_seed=config.seed, smoothing=config.smoothing,
                           record_model=config.record_model, workers=config.workers)

    print(f"⏳ {STATUS_MESSAGES['writing']}")
    summary = write_outputs(config, result, config.output_dir)
    _print_summary(summary)
    print(f"✅ {STATUS_MESSAGES['complete']}: {config.output_dir}")
    return EXIT_OK


def cmd_replay(config_file: str, trace_file: str, repeat_index: int = 0, out: Optional[str] = None,
               seed: Optional[int] = None) -> int:
    """
    Rejouer une trace de détection sur toutes les configurations, avec le flux
    de la répétition ``repeat_index``.

    :param config_file: Fichier de configuration JSON
    :type config_file: str
    :param trace_file: Fichier de trace
    :type trace_file: str
    :param repeat_index: Indice de la répétition qui a produit la trace
    :type repeat_index: int
    :param out: Dossier de sortie (défaut : sous-dossier ``replay`` du dossier de
        sortie de la configuration)
    :type out: Optional[str]
    :param seed: Graine maîtresse
    :type seed: Optional[int]
    :return: Code de sortie
    :rtype: int
    """
    config = load_config(config_file)
    out = out or os.path.join(config.output_dir, OUTPUT_FILES['replay_dir'])
    config = _apply_overrides(config, out, seed, None)
    if repeat_index < 0:
        raise ConfigurationError(f"doit être positif ({repeat_index})", 'repeat_index')
    if not os.path.exists(trace_file):
        raise ConfigurationError(f"fichier introuvable: {trace_file}", 'trace')
    trace = DriftTrace.load(trace_file)

    print(f"⏳ {STATUS_MESSAGES['loading']}")
    dataset = _load_source(config)

    print(f"⏳ {STATUS_MESSAGES['replaying']} ({len(trace)} événements)")
    repeat_seed = derive_seed(config.seed, repeat_index)
    runs = run_repeat(dataset, config.stream_config, config.hyperparams, repeat_index, repeat_seed,
                      config.smoothing, replay_trace=trace)
    aggregates = {run.config: ConfigAggregate(run.config, [run]) for run in runs}
    result = RepeatedRunResult(aggregates=aggregates, seeds=[repeat_seed])

    print(f"⏳ {STATUS_MESSAGES['writing']}")
    summary = write_outputs(config, result, config.output_dir)
    _print_summary(summary)
    print(f"✅ {STATUS_MESSAGES['complete']}: {config.output_dir}")
    return EXIT_OK


def cmd_fit(record_csv: str, boundaries: Optional[Sequence[int]] = None, out: Optional[str] = None) -> int:
    """
    Ajuster le modèle de réactivité sur une courbe de score exportée.

    Les phases sont données par ``boundaries`` ; à défaut par la colonne
    ``phase`` du fichier ; à défaut la courbe forme une seule phase.

    :param record_csv: Fichier ``step,score,smoothed,phase`` ou ``step,smoothed_score``
    :type record_csv: str
    :param boundaries: Débuts des phases B, C, ...
    :type boundaries: Optional[Sequence[int]]
    :param out: Fichier CSV de sortie (défaut : ``<nom>_fits.csv`` à côté de l'entrée)
    :type out: Optional[str]
    :return: Code de sortie
    :rtype: int
    """
    series, phases = read_score_csv(record_csv)

    print(f"⏳ {STATUS_MESSAGES['fitting']}")
    if boundaries:
        fits = fit_with_boundaries(series, boundaries)
    elif phases is not None:
        fits = fit_phases(series, phases)
    else:
        fits = [fit_phase(series)]

    print(f"{'Phase':<8}{'S+s_min':>10}{'tau':>12}{'Résidu':>12}")
    for fit in fits:
        print(f"{fit.phase:<8}{fit.steady_state:>10.4f}{fit.tau:>12.2f}{fit.residual:>12.2e}")

    stem = os.path.splitext(os.path.basename(record_csv))[0]
    out = out or os.path.join(os.path.dirname(os.path.abspath(record_csv)), f"{stem}_fits.csv")
    write_fits_csv({stem: fits}, out)
    print(f"✅ {out}")
    return EXIT_OK


def _parse_boundaries(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bornes invalides: '{text}' (attendu: 2000,6000)")


def build_parser() -> argparse.ArgumentParser:
    """
    Construire l'analyseur des arguments.

    :return: Analyseur avec les sous-commandes run, replay et fit
    :rtype: argparse.ArgumentParser
    """
    parser = argparse.ArgumentParser(
        prog='parafis',
        description="Classifieur flou évolutif ParaFIS et banc d'essai de dérives brutales"
    )
    parser.add_argument('-v', '--verbose', action='store_true', help="journalisation détaillée")
    subparsers = parser.add_subparsers(dest='command', required=True)

    run = subparsers.add_parser('run', help="exécuter une expérience")
    run.add_argument('--config', required=True, help="fichier de configuration JSON")
    run.add_argument('--out', help="dossier de sortie")
    run.add_argument('--seed', type=int, help="graine maîtresse")
    run.add_argument('--repeats', type=int, help="nombre de répétitions m")
    run.add_argument('--long', action='store_true', help="réglage complet (m = 100)")

    replay = subparsers.add_parser('replay', help="rejouer une trace de détection")
    replay.add_argument('--config', required=True, help="fichier de configuration JSON")
    replay.add_argument('--trace', required=True, help="fichier de trace")
    replay.add_argument('--repeat-index', type=int, default=0, help="répétition qui a produit la trace")
    replay.add_argument('--out', help="dossier de sortie (défaut : <output_dir>/replay)")
    replay.add_argument('--seed', type=int, help="graine maîtresse")

    fit = subparsers.add_parser('fit', help="ajuster le modèle de réactivité sur une courbe")
    fit.add_argument('record_csv', help="fichier CSV de score")
    fit.add_argument('--boundaries', type=_parse_boundaries, help="débuts des phases, ex. 2000,6000")
    fit.add_argument('--out', help="fichier CSV de sortie")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Point d'entrée de la ligne de commande.

    :param argv: Arguments (défaut : sys.argv)
    :type argv: Optional[Sequence[str]]
    :return: Code de sortie
    :rtype: int
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    configure_logging(args.verbose)
    try:
        if args.command == 'run':
            return cmd_run(args.config, args.out, args.seed, args.repeats, args.long)
        if args.command == 'replay':
            return cmd_replay(args.config, args.trace, args.repeat_index, args.out, args.seed)
        return cmd_fit(args.record_csv, args.boundaries, args.out)

    except ParafisError as e:
        print(f"❌ {STATUS_MESSAGES['error']}: {e}", file=sys.stderr)
        if debug_enabled() or args.verbose:
            traceback.print_exc()
        return e.exit_code

    except Exception as e:
        print(f"❌ {ERROR_MESSAGES['unexpected']}: {e}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_RUNTIME

"""
Export du rapport de synthèse vers Excel
"""

import logging
import math
from typing import List, Mapping, Sequence

import openpyxl
from openpyxl.styles import Font, Alignment, Border, Side, PatternFill
from openpyxl.utils import get_column_letter

from ..calculations.fitting import PhaseFit, SummaryRow

logger = logging.getLogger(__name__)

HEADER_COLOR = "4472C4"


def _styles():
    border = Border(
        left=Side(style='thin'), right=Side(style='thin'),
        top=Side(style='thin'), bottom=Side(style='thin')
    )
    return {
        'title': Font(bold=True, size=14, color="000080"),
        'header': Font(bold=True, size=11, color="FFFFFF"),
        'fill': PatternFill(start_color=HEADER_COLOR, end_color=HEADER_COLOR, fill_type="solid"),
        'border': border,
        'center': Alignment(horizontal='center', vertical='center', wrap_text=True)
    }


def _cell_value(value):
    # Les NaN (tau non identifiable) sont affichés comme "n/a"
    if isinstance(value, float) and math.isnan(value):
        return "n/a"
    return value


def _write_table(ws, title: str, headers: List[str], rows: List[List], number_format: str = '0.0000'):
    styles = _styles()
    last_column = get_column_letter(len(headers))

    ws.merge_cells(f'A1:{last_column}1')
    ws['A1'] = title
    ws['A1'].font = styles['title']
    ws['A1'].alignment = styles['center']

    for col, header in enumerate(headers, 1):
        cell = ws.cell(row=3, column=col, value=header)
        cell.font = styles['header']
        cell.fill = styles['fill']
        cell.alignment = styles['center']
        cell.border = styles['border']
        ws.column_dimensions[get_column_letter(col)].width = max(14, len(header) + 4)

    for i, row in enumerate(rows):
        for col, value in enumerate(row, 1):
            cell = ws.cell(row=4 + i, column=col, value=_cell_value(value))
            cell.border = styles['border']
            if isinstance(cell.value, float):
                cell.number_format = number_format


def export_summary_to_excel(summary: Sequence[SummaryRow], fits: Mapping[str, List[PhaseFit]],
                            filename: str = "summary.xlsx"):
    """
    Exporter le tableau de synthèse et les ajustements par phase vers Excel.

    :param summary: Lignes de synthèse par configuration
    :type summary: Sequence[SummaryRow]
    :param fits: Ajustements par configuration
    :type fits: Mapping[str, List[PhaseFit]]
    :param filename: Nom du fichier Excel de sortie
    :type filename: str
    :raises OSError: Si le fichier ne peut pas être écrit
    """
    wb = openpyxl.Workbook()

    ws = wb.active
    ws.title = "Synthèse"
    _write_table(
        ws, "SCORE MOYEN SUR LES TROIS PHASES",
        ["Configuration", "<S + s_min> (%)", "<tau>", "<Acc> (%)"],
        [[row.config, 100.0 * row.mean_steady_state, row.mean_tau, 100.0 * row.mean_acc] for row in summary],
        number_format='0.0'
    )

    ws_fits = wb.create_sheet("Ajustements")
    _write_table(
        ws_fits, "PARAMÈTRES AJUSTÉS DU MODÈLE DE RÉACTIVITÉ",
        ["Configuration", "Phase", "S", "s_min", "S + s_min", "tau", "Résidu", "Convergé"],
        [[name, fit.phase, fit.S, fit.s_min, fit.steady_state, fit.tau, fit.residual,
          "oui" if fit.converged else "non"]
         for name, phase_fits in fits.items() for fit in phase_fits]
    )

    wb.save(filename)
    logger.info("Rapport Excel écrit: %s", filename)

"""
Tests des exports CSV et Excel
"""

import math

import numpy as np
import openpyxl
import pandas as pd
import pytest

from parafis.calculations.fitting import PhaseFit, summarize
from parafis.calculations.prequential import PrequentialRecord
from parafis.export.csv_export import (
    write_record_csv, write_fits_csv, write_summary_csv, write_plot_csv, read_score_csv
)
from parafis.export.excel_export import export_summary_to_excel
from parafis.utils.errors import RecordFormatError

FITS = {
    'Para1': [PhaseFit('A', 0.2, 0.75, 120.0, 0.01), PhaseFit('B', 0.0, 0.9, math.nan, 0.02, identifiable=False)],
    'GEFS*': [PhaseFit('A', 0.25, 0.7, 80.0, 0.01), PhaseFit('B', 0.3, 0.6, 200.0, 0.03)]
}


def test_record_csv_round_trip(tmp_path):
    record = PrequentialRecord(scores=[0, 1, 1, 0, 1], phases=['A', 'A', 'A', 'B', 'B'], smoothing=2)
    path = tmp_path / "records" / "run.csv"
    write_record_csv(record.to_dataframe(), path)

    series, phases = read_score_csv(path)
    np.testing.assert_allclose(series, record.smoothed)
    assert phases == ['A', 'A', 'A', 'B', 'B']
    assert path.read_text(encoding='utf-8').splitlines()[0] == "step,score,smoothed,phase"


def test_plot_csv_has_no_phase(tmp_path):
    path = tmp_path / "plot.csv"
    write_plot_csv([0.5, 0.75], path)
    series, phases = read_score_csv(path)
    np.testing.assert_allclose(series, [0.5, 0.75])
    assert phases is None


def test_fits_and_summary_csv(tmp_path):
    write_fits_csv(FITS, tmp_path / "fits.csv")
    fits = pd.read_csv(tmp_path / "fits.csv")
    assert list(fits.columns) == ['config', 'phase', 'S_plus_smin', 'tau', 'residual']
    assert len(fits) == 4
    assert math.isnan(fits.loc[1, 'tau'])

    summary = summarize(FITS, {'Para1': 0.95, 'GEFS*': 0.9})
    write_summary_csv(summary, tmp_path / "summary.csv")
    lines = (tmp_path / "summary.csv").read_text(encoding='utf-8').splitlines()
    assert lines[0] == "config,S_plus_smin,tau,mean_acc"
    assert lines[1] == "Para1,0.925,120,0.95"


@pytest.mark.parametrize("content", [
    "step,score\n0,1\n",
    "step,smoothed\n0,abc\n",
])
def test_malformed_score_csv(tmp_path, content):
    path = tmp_path / "bad.csv"
    path.write_text(content, encoding='utf-8')
    with pytest.raises(RecordFormatError):
        read_score_csv(path)


def test_missing_score_csv(tmp_path):
    with pytest.raises(RecordFormatError):
        read_score_csv(tmp_path / "absent.csv")


def test_excel_report(tmp_path):
    summary = summarize(FITS, {'Para1': 0.95, 'GEFS*': 0.9})
    path = tmp_path / "summary.xlsx"
    export_summary_to_excel(summary, FITS, str(path))

    wb = openpyxl.load_workbook(path)
    assert wb.sheetnames == ["Synthèse", "Ajustements"]
    ws = wb["Synthèse"]
    assert ws.cell(row=3, column=1).value == "Configuration"
    assert ws.cell(row=3, column=1).fill.start_color.rgb.endswith("4472C4")
    assert ws.cell(row=4, column=1).value == "Para1"
    assert ws.cell(row=4, column=4).value == pytest.approx(95.0)
    assert wb["Ajustements"].cell(row=5, column=6).value == "n/a"

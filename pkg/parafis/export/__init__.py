"""
Modules d'export pour ParaFIS
"""

from .csv_export import (
    write_record_csv, write_fits_csv, write_accuracy_csv, write_summary_csv,
    write_plot_csv, read_score_csv
)
from .excel_export import export_summary_to_excel

__all__ = [
    'write_record_csv',
    'write_fits_csv',
    'write_accuracy_csv',
    'write_summary_csv',
    'write_plot_csv',
    'read_score_csv',
    'export_summary_to_excel'
]

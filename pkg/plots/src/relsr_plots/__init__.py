"""Figure scripts for the simulation CSVs.

Pure file-to-file transforms: each script reads one or more result CSVs
produced by the relsr command line, overlays the requested series, and
writes the figure as both SVG and PNG.  No physics is recomputed here;
if a value is wrong in a figure it was wrong in the CSV.
"""

__version__ = "0.1.0"

from .figures import FigureSpec, plot_kernel, plot_scan, plot_transient
from .io import CsvFormatError, ResultTable, read_result_csv

__all__ = [
    "__version__",
    "CsvFormatError",
    "FigureSpec",
    "ResultTable",
    "plot_kernel",
    "plot_scan",
    "plot_transient",
    "read_result_csv",
]

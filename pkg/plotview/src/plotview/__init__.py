"""plotview: static error-curve figures from legasym CSV artifacts."""

from .render import (EmptyInput, MissingColumn, PlotSpec, load_rows,
                     make_figure, render)

__version__ = "0.1.0"

__all__ = ["EmptyInput", "MissingColumn", "PlotSpec", "load_rows",
           "make_figure", "render"]

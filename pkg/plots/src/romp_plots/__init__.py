"""Figure rendering for romp-kit result CSVs."""

__version__ = "0.1.0"

from .figures import (
    EXPECTED_HEADER,
    FIGURE_KINDS,
    SENTINEL_NO_BOUNDARY,
    FigureSpec,
    SchemaError,
    read_rows,
    render,
)

__all__ = [
    "EXPECTED_HEADER",
    "FIGURE_KINDS",
    "SENTINEL_NO_BOUNDARY",
    "FigureSpec",
    "SchemaError",
    "read_rows",
    "render",
]

"""Figure regeneration from sweep CSV output; no numerics of its own."""

from .errors import EmptyInput, FigscriptsError, SchemaMismatch
from .figures import (
    FIGURE_SPECS,
    FigureSpec,
    NTH_STYLES,
    build_figure,
    save_figure,
)
from .reader import (
    ARGMAX_COLUMN,
    CSV_COLUMNS,
    SCHEMA_VERSION,
    load_csv,
    load_sidecar,
    masked_series,
)

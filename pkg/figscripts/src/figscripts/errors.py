"""Error types for the figure-regeneration scripts."""


class FigscriptsError(Exception):
    """Base class for figure-script failures."""


class SchemaMismatch(FigscriptsError):
    """CSV header does not match the documented sweep schema."""


class EmptyInput(FigscriptsError):
    """CSV contains a header but no data rows (or no usable rows)."""

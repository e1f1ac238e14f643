"""Static figure rendering for sdic sweep CSV output."""

from .render import FigureSpec, SchemaMismatch, load_spec, merge_series, render

__version__ = "0.1.0"

__all__ = ["FigureSpec", "SchemaMismatch", "load_spec", "merge_series", "render"]

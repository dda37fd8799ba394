"""Figure rendering for sweep CSV tables."""

from .figures import FigureSpec, load_table, preset_spec, render

__version__ = "0.1.0"

__all__ = ["FigureSpec", "load_table", "preset_spec", "render"]

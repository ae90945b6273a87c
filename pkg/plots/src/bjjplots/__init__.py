"""Static figure rendering for junction-simulator output files."""

from .readers import ParseError, read_husimi, read_sweep, read_trajectory
from .render import load_recipe, render, render_to_file

__all__ = [
    "ParseError",
    "load_recipe",
    "read_husimi",
    "read_sweep",
    "read_trajectory",
    "render",
    "render_to_file",
]

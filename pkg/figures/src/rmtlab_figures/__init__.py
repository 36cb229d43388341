"""Figure rendering for rmtlab experiment output."""

from .csvio import FigureInputError  # noqa: F401
from .render import FIGURES, render  # noqa: F401

__version__ = "0.1.0"

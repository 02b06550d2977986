"""Exact homotopy-invariant calculus for finite-dimensional graded algebras."""

from masseykit.errors import InconclusiveSearch, InconclusiveWindow, WindowOverflow

__version__ = "0.1.0"

__all__ = [
    "InconclusiveSearch",
    "InconclusiveWindow",
    "WindowOverflow",
    "__version__",
]

"""Named exceptions shared across the package."""

from __future__ import annotations


class WindowOverflow(ValueError):
    """Raised when a computation needs graded components above the known window.

    Degrees below the window are genuinely zero for the truncated algebras
    handled by this package, but degrees above the window are unknown; any
    operation that would have to read one raises instead of silently
    returning zero.
    """


class InconclusiveWindow(ValueError):
    """Raised when a verdict would depend on cohomology outside the known window."""


class InconclusiveSearch(ValueError):
    """Raised when a certified yes/no answer is out of reach for the search bounds."""

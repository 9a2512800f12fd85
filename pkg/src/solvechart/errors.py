"""Shared error base class.

Every domain error raised by this package derives from SolveChartError so
callers (the CLI in particular) can map failures to exit codes with a single
except clause.
"""

from __future__ import annotations


class SolveChartError(Exception):
    """Base class for all domain errors raised by this package."""

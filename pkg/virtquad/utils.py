"""Utility functions for virtquad."""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler
from sympy import factorint

from . import config


def setup_logging(verbose: bool = False, level: Optional[str] = None) -> None:
    """
    Route library logging to stderr through rich.

    stdout stays reserved for reports. `verbose` forces DEBUG; otherwise
    the level comes from `level` or VQS_LOG_LEVEL.
    """
    if verbose:
        resolved = logging.DEBUG
    else:
        resolved = logging.getLevelName((level or config.VQS_LOG_LEVEL).upper())
        if not isinstance(resolved, int):
            resolved = logging.WARNING
    handler = RichHandler(console=Console(stderr=True), show_path=False, markup=False)
    root = logging.getLogger("virtquad")
    root.handlers = [handler]
    root.setLevel(resolved)
    root.propagate = False


def format_order(value: int, group: bool = True) -> str:
    """
    Exact decimal text of a group order.

    Example:
        >>> format_order(13680866400)
        '13,680,866,400'
    """
    return f"{value:,}" if group else str(value)


def prime_powers(qmax: int, qmin: int = 2) -> list[int]:
    """Field orders qmin <= q <= qmax."""
    return [q for q in range(max(qmin, 2), qmax + 1) if len(factorint(q)) == 1]

"""Shared text/byte output helpers for the CSV and PGM exporters."""
from __future__ import annotations

import io
from contextlib import contextmanager


def fmt9(x: float) -> str:
    """Render a float with 9 significant digits, trailing zeros kept."""
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(float(x), "#.9g")


@contextmanager
def open_text(destination):
    """Yield a text stream for a path or pass a file-like object through."""
    if hasattr(destination, "write"):
        yield destination
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


@contextmanager
def open_binary(destination):
    """Yield a binary stream for a path or pass a file-like object through."""
    if hasattr(destination, "write") and not isinstance(destination, io.TextIOBase):
        yield destination
    else:
        with open(destination, "wb") as fh:
            yield fh

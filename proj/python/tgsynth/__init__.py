"""Realizability checking for bounded safety specifications."""

from ._tgs import SpecError, bench, check, families, generate

__all__ = ["SpecError", "bench", "check", "families", "generate", "check_file"]


def check_file(path, **kwargs):
    """Like check, reading the specification from a file."""
    with open(path, encoding="utf-8") as f:
        return check(f.read(), **kwargs)

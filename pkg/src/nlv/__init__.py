"""Nonlocal game values, quantum measurement simulation, synchronous
tracial correlations, matrix moment maps, and a 3-tape Turing machine
interpreter, with a command-line workbench (``nlv``) over all of it."""

from importlib import resources

__version__ = "0.1.0"


def data_path(name: str):
    """Filesystem path of a bundled data file (e.g. ``chsh.json``)."""
    return resources.files("nlv").joinpath("data", name)

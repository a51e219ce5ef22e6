"""Perron eigen-data, weak KAM solutions and large-deviation tools for the
speed-k random walk on the discretized circle."""

from ._core import *  # noqa: F401,F403
from ._core import Direction, Error, Potential

__all__ = [name for name in dir() if not name.startswith("_")]

"""Minimum-energy kinodynamic path planning for a fixed-wing aircraft in thermals."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

"""Fractional powers of sparse SPD operators via rational approximation."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

"""Stochastic-geometry simulator and analytical toolkit for threshold-based
frequency reuse in ultra-dense networks."""

from ffrsim._core import *  # noqa: F401,F403
from ffrsim._core import __version__  # noqa: F401

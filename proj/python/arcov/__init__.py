"""Optimal restricted AR/VAR models for reproducing a target autocovariance function."""

from ._arcov import *  # noqa: F401,F403
from ._arcov import __version__  # noqa: F401

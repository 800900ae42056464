"""Violation-rate counting for feedforward ReLU networks."""

from ._reachcount import *  # noqa: F401,F403
from ._reachcount import __version__  # noqa: F401

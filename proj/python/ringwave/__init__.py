"""Varactor-loaded ring resonator analysis.

Thin Python layer over the C++ core: calibration, dispersion, ring
resonances, parametric theory, the coupled-line filter, transient
divider/doubler runs and the ranging Monte Carlo.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__, _run_command  # noqa: F401


def run(name, config="", figure="", **knobs):
    """Run a CLI subcommand in-process; returns {file name: content}."""
    return _run_command(name, config, figure, knobs)

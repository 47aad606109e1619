"""Leader-follower consensus for hierarchical multi-agent systems with a
time-varying set of active followers: graph families, the periodic switching
rule, multi-rate simulation, and numerical convergence certificates."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

"""Plan precondition monitoring: single-failure DP, NPC/VAPC combination, joint oracle."""

from ._precmon import *  # noqa: F401,F403
from ._precmon import __version__  # noqa: F401

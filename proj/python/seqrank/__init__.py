"""Rank aggregation over partial temporal sequences.

Builds pairwise precedence matrices from per-actor event histories and
extracts a global item ordering with six aggregation methods, each scored by
a consistency coefficient.
"""

from seqrank._core import *  # noqa: F401,F403
from seqrank._core import __version__  # noqa: F401

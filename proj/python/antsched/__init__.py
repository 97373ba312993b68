"""Anticipatory video segment scheduling.

Thin Python layer over the C++ library: schedulers, the radio channel model,
HLS playlist rewriting and the experiment harness.
"""

from ._antsched import *  # noqa: F401,F403
from ._antsched import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]

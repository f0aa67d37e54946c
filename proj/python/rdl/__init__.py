"""Primal/dual risk minimization over linear classes, with bound audits."""
from ._rdl import *  # noqa: F401,F403
from ._rdl import __doc__  # noqa: F401

__version__ = "0.1.0"

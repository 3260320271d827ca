from ._so21osc import *  # noqa: F401,F403
from ._so21osc import So21Error

__all__ = [n for n in dir() if not n.startswith("_")]

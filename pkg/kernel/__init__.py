"""
Kernel: evaluation, conversion and bidirectional checking.

Only the exceptions are re-exported here; the syntax and tope packages
import them while they are themselves being imported. Use
`kernel.checker`, `kernel.context` and friends directly.
"""

from .errors import *  # noqa: F401,F403
from .errors import InternalError, KernelError

__all__ = ["InternalError", "KernelError"]

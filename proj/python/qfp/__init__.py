"""Coherent-state fingerprinting toolkit.

Thin re-export of the compiled core.  Installed wheels carry the extension
inside this package; in a plain CMake build tree the extension sits on
PYTHONPATH next to it, so both layouts are tried.
"""

try:
    from ._qfp import *  # noqa: F401,F403
    from . import _qfp as _core
except ImportError:
    from _qfp import *  # noqa: F401,F403
    import _qfp as _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
__version__ = "0.1.0"

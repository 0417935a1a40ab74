"""Select the compiled core when available, else the numpy fallback.

Set ``ADDGRAPH_BACKEND=python`` to force the fallback.
"""

import os

from . import _fallback

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_requested = os.environ.get("ADDGRAPH_BACKEND", "").strip().lower()

if _core is not None and _requested not in ("python", "fallback"):
    impl = _core
else:
    impl = _fallback

BACKEND = impl.NAME


def available():
    names = [_fallback.NAME]
    if _core is not None:
        names.insert(0, _core.NAME)
    return names


def get(name=None):
    """Backend module by name; ``None`` gives the active one."""
    if name is None:
        return impl
    if name == _fallback.NAME:
        return _fallback
    if name == "compiled":
        if _core is None:
            raise ImportError("compiled core is not built")
        return _core
    raise ValueError(f"unknown backend {name!r}")

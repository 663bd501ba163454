"""Kernel backend selection.

The compiled Cython core is preferred; the numpy fallback is selected when the
extension is missing.  DEPTHFORGE_BACKEND={compiled,python} forces the choice
(useful for the backend-comparison benchmark and for debugging).
"""

from __future__ import annotations

import os

_forced = os.environ.get("DEPTHFORGE_BACKEND")

if _forced == "python":
    from . import _pyfallback as backend
elif _forced == "compiled":
    from . import _kernels as backend  # noqa: F401  (ImportError is the answer)
else:
    try:
        from . import _kernels as backend  # type: ignore[no-redef]
    except ImportError:
        from . import _pyfallback as backend  # type: ignore[no-redef]


def backend_name() -> str:
    """Name of the active backend: 'compiled' or 'python'."""
    return backend.name


def get_backend(name: str):
    """Fetch a specific backend module regardless of the active selection."""
    if name == "python":
        from . import _pyfallback

        return _pyfallback
    if name == "compiled":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")

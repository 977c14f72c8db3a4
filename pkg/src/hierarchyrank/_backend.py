"""Chain-kernel backend selection.

The compiled extension is preferred when importable; otherwise the
pure-Python kernel is used. Both produce identical output for identical
inputs, so the choice only affects speed. Set HIERARCHYRANK_BACKEND to
``c`` or ``python`` to force one.
"""

from __future__ import annotations

import os

from . import _mvr_py

_forced = os.environ.get("HIERARCHYRANK_BACKEND", "").strip().lower()

if _forced == "python":
    _impl = _mvr_py
    BACKEND = "python"
elif _forced == "c":
    from . import _mvr_c as _impl  # raises ImportError if the extension is missing

    BACKEND = "c"
elif _forced:
    raise ValueError(f"HIERARCHYRANK_BACKEND must be 'c' or 'python', got {_forced!r}")
else:
    try:
        from . import _mvr_c as _impl

        BACKEND = "c"
    except ImportError:
        _impl = _mvr_py
        BACKEND = "python"

run_chain_kernel = _impl.run_chain_kernel


def backend_name() -> str:
    """Name of the active chain kernel: 'c' (compiled) or 'python' (fallback)."""
    return BACKEND

"""Hot-kernel backend selection.

The heavy inner loops (batched holomorph products and table-closure BFS)
exist twice: a numba ``@njit`` backend and a pure-numpy fallback with the
same semantics.  Selection happens once at import time via the
``BRACEFORGE_BACKEND`` environment variable:

* ``auto`` (default) - numba when importable, else numpy;
* ``numba`` - require the jitted backend, fail loudly if unavailable;
* ``numpy`` - force the fallback (useful for debugging and benchmarking).
"""

from __future__ import annotations

import os

_requested = os.environ.get("BRACEFORGE_BACKEND", "auto").strip().lower()
if _requested not in {"auto", "numba", "numpy"}:
    raise RuntimeError(
        f"BRACEFORGE_BACKEND={_requested!r}; expected 'auto', 'numba' or 'numpy'"
    )

if _requested in {"auto", "numba"}:
    try:
        from . import _numba as _impl

        _name = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import _numpy as _impl

        _name = "numpy"
else:
    from . import _numpy as _impl

    _name = "numpy"

mul_rows = _impl.mul_rows
mul_cross = _impl.mul_cross
act_rows = _impl.act_rows
closure_table = _impl.closure_table
closure_table_injective = _impl.closure_table_injective


def backend_name() -> str:
    """Name of the active kernel backend ('numba' or 'numpy')."""
    return _name

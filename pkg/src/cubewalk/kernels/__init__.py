"""Walk-kernel backend selection.

The compiled extension is used when present; the numpy fallback is selected
otherwise.  Both consume identical random streams and return identical
results — the extension is purely a speed optimization.  Set
CUBEWALK_KERNEL=py or CUBEWALK_KERNEL=c to force a backend.
"""
from __future__ import annotations

import os

from . import _walk_py

_requested = os.environ.get("CUBEWALK_KERNEL", "auto").lower()
if _requested not in ("auto", "c", "compiled", "py", "python"):
    raise ValueError(f"CUBEWALK_KERNEL={_requested!r} not understood")

_compiled = None
if _requested in ("auto", "c", "compiled"):
    try:
        from . import _walk_cy as _compiled
    except ImportError:
        if _requested != "auto":
            raise ImportError(
                "CUBEWALK_KERNEL requested the compiled kernel but the "
                "extension is not built; run `python setup.py build_ext --inplace`"
            ) from None

_impl = _compiled if _compiled is not None else _walk_py

run_trials = _impl.run_trials


def backend_name() -> str:
    return "compiled" if _impl is not _walk_py else "numpy"


def available_backends() -> dict:
    out = {"numpy": _walk_py.run_trials}
    if _compiled is not None:
        out["compiled"] = _compiled.run_trials
    else:
        try:
            from . import _walk_cy  # noqa: F401

            out["compiled"] = _walk_cy.run_trials
        except ImportError:
            pass
    return out

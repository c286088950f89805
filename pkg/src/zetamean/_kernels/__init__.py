"""Backend selection for the hot Dirichlet-sum kernel.

The compiled extension is preferred when it imported cleanly; the numpy
implementation is the fallback.  Set ``ZETAMEAN_PURE_PYTHON=1`` to force
the fallback (used by the benchmark and the backend-agreement tests).
Both backends implement the same contract; see ``_fallback`` for the
reference semantics.
"""

import os

if os.environ.get("ZETAMEAN_PURE_PYTHON", "").strip() not in ("", "0"):
    from . import _fallback as _impl
else:
    try:
        from . import _zetacore as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _fallback as _impl

BACKEND = _impl.BACKEND
dirichlet_partial_sum = _impl.dirichlet_partial_sum

"""Inner-loop kernels for trace histograms and affine zero counts.

Two interchangeable backends: a compiled extension (built from
_fastcore.pyx at install time) and a pure-Python reference in pure.py.
The compiled one is picked when present; set WEILLAB_FORCE_PURE=1 to
override.  Both expose the same two functions with identical contracts,
and the test suite runs them against each other.
"""

import os

from . import pure

if os.environ.get("WEILLAB_FORCE_PURE"):
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _fastcore as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

trace_histogram = _impl.trace_histogram
zero_count = _impl.zero_count

__all__ = ["BACKEND", "trace_histogram", "zero_count", "pure"]

"""Select the compiled kernel extension, falling back to pure numpy.

Set QKDREC_FORCE_NUMPY=1 to skip the extension (used by the benchmark and
the backend-parity tests).
"""

import os

if os.environ.get("QKDREC_FORCE_NUMPY"):
    from . import _kernels_np as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_np as _impl

boxplus_pair = _impl.boxplus_pair
bp_decode = _impl.bp_decode


def backend_name() -> str:
    return _impl.BACKEND

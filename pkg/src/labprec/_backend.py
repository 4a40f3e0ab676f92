"""Select the resampling kernel implementation at import time.

The compiled extension is preferred; setting ``LABPREC_PURE_PYTHON=1`` or a
missing build falls back to the numpy implementation, which returns
identical results more slowly.
"""

import os

if os.environ.get("LABPREC_PURE_PYTHON", "") not in ("", "0"):
    from . import _fallback as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        from . import _fallback as kernels

BACKEND = kernels.NAME

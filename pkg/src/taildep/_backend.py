"""Kernel backend selection: compiled extension if available, NumPy otherwise.

Set ``TAILDEP_PURE_PYTHON=1`` to force the NumPy implementation even when the
extension was built (used by the benchmark and backend-equivalence tests).
"""

import os

_force_py = os.environ.get("TAILDEP_PURE_PYTHON", "") not in ("", "0")

if _force_py:
    from taildep._kernels_py import counts_at_levels, exceedance_thresholds

    USING_COMPILED_KERNELS = False
else:
    try:
        from taildep._kernels import counts_at_levels, exceedance_thresholds

        USING_COMPILED_KERNELS = True
    except ImportError:
        from taildep._kernels_py import counts_at_levels, exceedance_thresholds

        USING_COMPILED_KERNELS = False

__all__ = ["counts_at_levels", "exceedance_thresholds", "USING_COMPILED_KERNELS"]

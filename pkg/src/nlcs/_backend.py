"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``NLCS_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("NLCS_PURE_PYTHON", "") not in ("", "0"):
    from nlcs import _pykernels as kernels

    BACKEND = "python"
else:
    try:
        from nlcs import _ckernels as kernels

        BACKEND = "cython"
    except ImportError:
        from nlcs import _pykernels as kernels

        BACKEND = "python"

laguerre_sequence = kernels.laguerre_sequence
signed_log_cumprod = kernels.signed_log_cumprod

__all__ = ["BACKEND", "laguerre_sequence", "signed_log_cumprod"]

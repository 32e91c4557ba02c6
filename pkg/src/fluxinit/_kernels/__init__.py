"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set FLUXINIT_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the kernel-equivalence tests).
"""
import os

if os.environ.get("FLUXINIT_PURE_PYTHON"):
    from ._reduced_py import propagate_reduced

    KERNEL_IMPL = "python"
else:
    try:
        from ._reduced_cy import propagate_reduced

        KERNEL_IMPL = "cython"
    except ImportError:
        from ._reduced_py import propagate_reduced

        KERNEL_IMPL = "python"

__all__ = ["propagate_reduced", "KERNEL_IMPL"]

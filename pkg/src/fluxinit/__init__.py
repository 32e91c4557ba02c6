"""Pulse-level simulator and calibration toolkit for flux-enabled sideband
initialization of fluxonium qubits."""

from ._kernels import KERNEL_IMPL

__version__ = "0.1.0"

__all__ = ["KERNEL_IMPL", "__version__"]

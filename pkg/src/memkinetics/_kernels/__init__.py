"""Backend selection for the history kernels.

The compiled Cython module is preferred; the numpy implementation is the
fallback.  Set MEMKINETICS_PURE_PYTHON=1 to force the fallback (used by the
benchmark and the backend-parity tests).
"""

import os

from . import _fractional_py


def _load_compiled():
    try:
        from . import _fractional_cy

        return _fractional_cy
    except ImportError:
        return None


if os.environ.get("MEMKINETICS_PURE_PYTHON"):
    _impl = _fractional_py
else:
    _impl = _load_compiled() or _fractional_py

BACKEND = _impl.BACKEND

abm_linear_scalar = _impl.abm_linear_scalar
abm_linear_system = _impl.abm_linear_system
# The L1 batch is a plain convolution; numpy's convolve beats the compiled
# scalar loop on every grid size tried (see benchmarks/bench_kernels.py),
# so it always comes from the numpy implementation.
caputo_l1_batch = _fractional_py.caputo_l1_batch


def available_backends():
    """Names of the kernel implementations importable right now."""
    names = ["python"]
    if _load_compiled() is not None:
        names.insert(0, "cython")
    return names


def get_backend(name: str):
    """Fetch a specific kernel implementation module by name."""
    if name == "python":
        return _fractional_py
    if name == "cython":
        mod = _load_compiled()
        if mod is None:
            raise ImportError("compiled kernel module is not built")
        return mod
    raise ValueError(f"unknown kernel backend {name!r}")

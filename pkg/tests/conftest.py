import numpy as np
import pytest

from memkinetics import _kernels


@pytest.fixture(params=_kernels.available_backends())
def kernel_backend(request):
    """Run a test against every importable kernel implementation."""
    return _kernels.get_backend(request.param)


def max_rel_err(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    denom = np.where(np.abs(a) > 0, np.abs(a), 1.0)
    return float(np.max(np.abs(a - b) / denom))

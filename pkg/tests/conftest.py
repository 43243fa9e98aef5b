import numpy as np
import pytest

from twofold import Flavor, Method, run_flavor


@pytest.fixture(scope="session")
def warm_kernels():
    """Force numba compilation of every kernel path before timed tests."""
    for dtype in (np.float32, np.float64):
        data = np.ones(32, dtype)
        for method in Method:
            if method is Method.WIDE and dtype is not np.float32:
                continue
            for flavor in (Flavor.sequential(), Flavor.unrolled(4)):
                run_flavor(method, flavor, data)
                run_flavor(method, flavor, data, data)
    return True

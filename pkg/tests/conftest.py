import pytest

from mstep.boolmat import BoolMatrix, bm_mul


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the JIT kernel once so timed tests see steady-state speed
    eye = BoolMatrix.identity(8)
    bm_mul(eye, eye)

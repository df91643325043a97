import numpy as np
import pytest

from wngdf import _backend, _fallback
from wngdf.geometry import ArrayGeometry, FrequencyGrid

BACKENDS = ["python"]
try:
    from wngdf import _kernels  # noqa: F401
    BACKENDS.append("compiled")
except ImportError:
    pass


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture(scope="session")
def geom30():
    return ArrayGeometry(30, 0.02)


@pytest.fixture(scope="session")
def grid():
    return FrequencyGrid()


@pytest.fixture(params=BACKENDS)
def kernels(request):
    return _backend.load(request.param)


def random_hermitian(rng, n, cond=10.0):
    """Random Hermitian positive-definite matrix with the given condition number."""
    q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    eig = np.geomspace(1.0, cond, n)
    return (q * eig) @ q.conj().T


def random_cvec(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split("C", 1)[1].split(":")[0])):
            terminalreporter.write_line(line)

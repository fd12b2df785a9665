import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from driftcast import kernels  # noqa: E402

DATA = Path(str(resources.files("driftcast") / "data"))


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    prev = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(prev)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")

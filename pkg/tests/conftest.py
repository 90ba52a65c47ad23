import sys
from pathlib import Path

import pytest

from partcat import kernels

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(params=kernels.AVAILABLE)
def backend(request):
    """Run the test once per available kernel backend."""
    with kernels.using(request.param):
        yield request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])

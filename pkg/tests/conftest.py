import pytest

from gravab import _kernels
from gravab.clock import ClockTransition
from gravab.missions import CS_PHARAO, H_MASER, get_preset
from gravab.orbit import from_apsides


@pytest.fixture
def iss():
    return get_preset("iss").elements


@pytest.fixture
def galileo():
    return get_preset("galileo").elements


@pytest.fixture
def h_maser():
    return ClockTransition(H_MASER)


@pytest.fixture
def cs_clock():
    return ClockTransition(CS_PHARAO)


@pytest.fixture
def circular():
    return from_apsides(7.0e6, 7.0e6)


@pytest.fixture(params=sorted(_kernels.backends()))
def kernels(request):
    """Each available kernel module in turn (compiled and numpy fallback)."""
    return _kernels.backends()[request.param]


def pytest_terminal_summary(terminalreporter):
    import sys

    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(acceptance.RESULTS, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)

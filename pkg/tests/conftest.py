import pytest

from ctsense.models import NetworkModel, uniform_profiles


@pytest.fixture
def network():
    return NetworkModel(num_sensors=5, pi0=0.2, alpha=0.1, beta=0.9)


@pytest.fixture
def profiles():
    return uniform_profiles(5, gamma=1.0)


_ACCEPTANCE = []


@pytest.fixture
def record():
    """Log one acceptance line: record(criterion, passed, detail)."""

    def _record(criterion, passed, detail):
        line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)

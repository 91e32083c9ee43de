import pytest

from jamnet.geometry import JammerParams, NetworkParams

ACCEPTANCE_LINES = []


@pytest.fixture
def net():
    return NetworkParams.defaults()


@pytest.fixture
def jam(net):
    return JammerParams.scaled(4, 1, net.lambda_T)


@pytest.fixture
def report():
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

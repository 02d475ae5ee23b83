import pytest

from sparseries.sim import SimulationConfig, run_simulation

_acceptance = {}


@pytest.fixture(scope="session")
def desk_simulation():
    """Design density, B = 100, N in {5000, 10000, 15000, 20000}, J = 200."""
    return run_simulation(SimulationConfig(replications=100, seed=20240101))


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name in sorted(_acceptance):
        status = "PASS" if _acceptance[name] == "passed" else "FAIL"
        tr.write_line(f"{status}  {name}")

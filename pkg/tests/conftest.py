import mpmath
import pytest

from zetareg.zeros import scan_zeros

ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion.

    The line is printed immediately and repeated in the terminal summary so
    it survives output capture.
    """
    lines = request.config.stash[ACCEPTANCE_KEY]

    def report(number: int, passed: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines.append((number, line))
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def zeros_545():
    """The first 301 zeros (ordinates up to 545)."""
    return scan_zeros(1.0, 545.0, 0.1, 1e-10)


@pytest.fixture(scope="session")
def zeros_101():
    return scan_zeros(1.0, 101.0, 0.1, 1e-10)


@pytest.fixture(scope="session")
def mp_zeros():
    with mpmath.workdps(30):
        return [float(mpmath.zetazero(n).imag) for n in range(1, 31)]

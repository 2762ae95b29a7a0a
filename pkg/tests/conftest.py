import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_series(rng, degree, scale=1.0):
    c = rng.normal(size=2 * degree + 1) + 1j * rng.normal(size=2 * degree + 1)
    from circlediff.laurent import LaurentSeries

    return LaurentSeries(scale * c)


def dense_annulus_max(func, inner, outer, radial=201, angular=2048):
    """Brute-force max of |func| over a polar grid of the closed annulus."""
    r = np.linspace(inner, outer, radial)[:, None]
    th = np.linspace(0.0, 2 * np.pi, angular, endpoint=False)[None, :]
    return float(np.max(np.abs(func(r * np.exp(1j * th)))))


# acceptance criteria register one line each; the summary is printed at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture
def criterion():
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])

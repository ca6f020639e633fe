import pytest

from geolab.optimize import OptConfig
from geolab.spaces import DEFAULT_CATALOG
from geolab.verify import run_claims


@pytest.fixture(scope="session")
def catalog():
    return list(DEFAULT_CATALOG)


@pytest.fixture(scope="session")
def coarse():
    # cheap settings for property tests; exact values use the defaults
    return OptConfig(grid_resolution=64, top_cells=4, extra_starts=2)


@pytest.fixture(scope="session")
def catalog_reports(catalog):
    """Full claim registry on the default catalog, computed once."""
    return run_claims(catalog)


_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary prints them after the run."""

    def record(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])

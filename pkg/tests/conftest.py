import sys

import pytest

from invlat.census import enumerate_i_lattices, lattices_of_size


@pytest.fixture(scope="session")
def lattices_upto_7():
    return [L for n in range(1, 8) for L in lattices_of_size(n)]


@pytest.fixture(scope="session")
def i_lattices_upto_6():
    return [A for n in range(1, 7) for A in enumerate_i_lattices(n)]


@pytest.fixture(scope="session")
def i_lattices_upto_7():
    return [A for n in range(1, 8) for A in enumerate_i_lattices(n)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        status, title, elapsed, detail = results[number]
        line = f"criterion {number}: {status}  {title}  ({elapsed:.2f} s)"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)

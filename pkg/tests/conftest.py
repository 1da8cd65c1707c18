import pytest

from cavity_routing.network import NetworkConfig, reference_sets

FIGURES = {
    3: (2, 1), 4: (2, 2),
    5: (3, 1), 6: (3, 2), 7: (3, 3),
    8: (4, 1), 9: (4, 2), 10: (4, 3), 11: (4, 4),
}


def figure_config(fig):
    n, active = FIGURES[fig]
    return NetworkConfig(n, reference_sets(n), active)


@pytest.fixture
def fig3():
    return figure_config(3)


@pytest.fixture
def n2_set2():
    return figure_config(4)


_CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def record_criterion(request):
    """Record one PASS/FAIL line per acceptance criterion; returns the verdict."""
    lines = request.config.stash.setdefault(_CRITERIA, {})

    def record(number, name, ok, detail):
        line = f"criterion {number} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
        lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])

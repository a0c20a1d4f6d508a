import numpy as np
import pytest

from qzsprk import init_zs_soliton, make_grid, make_state


@pytest.fixture(scope="session")
def soliton_1024():
    """Soliton data on [-64, 64) with 1024 nodes, q tracked."""
    g = make_grid((-64, 64), 1024)
    return make_state(g, *init_zs_soliton(g), track_q=True)


@pytest.fixture(scope="session")
def cosine_32():
    from qzsprk.experiments import cosine_2d

    return cosine_2d(eps=0.25, points=32).state0


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for line in acceptance_lines(verdicts):
        tr.write_line(line)


def acceptance_lines(verdicts):
    order = []
    grouped = {}
    for crit, ok, msg in verdicts:
        key = str(crit)[0]
        if key not in grouped:
            order.append(key)
            grouped[key] = []
        grouped[key].append((ok, msg))
    lines = []
    for key in sorted(order):
        checks = grouped[key]
        failed = [m for ok, m in checks if not ok]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(checks) - len(failed)}/{len(checks)} checks"
        if failed:
            detail += "; failing: " + " | ".join(failed)
        lines.append(f"criterion {key}: {status} ({detail})")
    return lines

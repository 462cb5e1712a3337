import pytest

from nsexpander import (CAVITATING, SMOOTH, CavitatingBoundaryData, PhysicalParams,
                        SmoothBoundaryData, default_config, solve_cavitating, solve_smooth)

PARAMS = PhysicalParams(R=1.0, mu=1.0, lam=0.0, C_V=1.0, kappa=1.0, d=3)
SMOOTH_B = SmoothBoundaryData(P0=1.0, Theta0=1e-3)
CAV_B = CavitatingBoundaryData(P_delta=1e-2, delta=1e-1, Theta0=1e-2, alpha=1e-3)

_cache = {}


def smooth_run(n_cells=4000, b=SMOOTH_B, **kw):
    key = ("s", n_cells, b, tuple(sorted(kw.items())))
    if key not in _cache:
        _cache[key] = solve_smooth(PARAMS, b, default_config(SMOOTH, n_cells=n_cells, **kw))
    return _cache[key]


def cav_run(n_cells=4000, b=CAV_B, **kw):
    key = ("c", n_cells, b, tuple(sorted(kw.items())))
    if key not in _cache:
        _cache[key] = solve_cavitating(PARAMS, b, default_config(CAVITATING, n_cells=n_cells, **kw))
    return _cache[key]


@pytest.fixture(scope="session")
def smooth_ref():
    return smooth_run()


@pytest.fixture(scope="session")
def cav_ref():
    return cav_run()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

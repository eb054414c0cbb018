import itertools

import numpy as np
import pytest

from finestrat.design import DrawnSample
from finestrat.population import FinitePopulation, Stratum


def make_population(groups, xs=None, sizes=None):
    xs = xs if xs is not None else [(h + 1) / len(groups) for h in range(len(groups))]
    strata = []
    for h, units in enumerate(groups):
        strata.append(Stratum(id=h + 1, x=xs[h], units=np.asarray(units, float),
                              sizes=None if sizes is None else np.asarray(sizes[h], float)))
    return FinitePopulation(tuple(strata))


def srswor_samples(pop, n_h):
    """Every srswor sample (one combination per stratum) with its DrawnSample."""
    per_stratum = [list(itertools.combinations(range(s.size), n)) for s, n in zip(pop.strata, n_h)]
    for combo in itertools.product(*per_stratum):
        stratum = np.concatenate([np.full(len(c), h + 1) for h, c in enumerate(combo)])
        unit = np.concatenate([np.asarray(c, int) for c in combo])
        y = np.concatenate([pop.strata[h].units[list(c)] for h, c in enumerate(combo)])
        pi = np.concatenate([np.full(len(c), len(c) / pop.strata[h].size) for h, c in enumerate(combo)])
        yield DrawnSample(stratum, unit, y, pi, pop.x, pop.stratum_sizes, "srswor")


@pytest.fixture
def tiny_pop():
    """Two strata {1,3} and {5,7}."""
    return make_population([[1.0, 3.0], [5.0, 7.0]], xs=[0.5, 1.0])


@pytest.fixture
def tiny_sample(tiny_pop):
    """Units 1 and 5 selected, pi = 0.5 each."""
    return DrawnSample([1, 2], [0, 0], [1.0, 5.0], [0.5, 0.5], tiny_pop.x, tiny_pop.stratum_sizes)


# CRITERION lines recorded by test_acceptance.py, keyed by criterion number
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])

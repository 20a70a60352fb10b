import numpy as np
import pytest

from bigraph_states.graph_model import BipartiteGraph, star_graph
from bigraph_states.state_engine import QubitParams

PI = np.pi


@pytest.fixture
def star():
    return star_graph(3)


@pytest.fixture
def star_quarter(star):
    return QubitParams.for_graph(star, theta_u=PI / 4, phi_u=PI / 4, theta_v=PI / 4, phi_v=PI / 4)


def random_graph(rng: np.random.Generator, max_side: int = 6, density=None) -> BipartiteGraph:
    nu = int(rng.integers(1, max_side + 1))
    nv = int(rng.integers(1, max_side + 1))
    p = rng.uniform(0.1, 0.9) if density is None else density
    edges = [(u, nu + v) for u in range(nu) for v in range(nv) if rng.random() < p]
    rng.shuffle(edges)
    return BipartiteGraph(nu, nv, tuple(map(tuple, edges)))


def random_params(rng: np.random.Generator, g: BipartiteGraph) -> QubitParams:
    return QubitParams(rng.uniform(0, PI, g.n_qubits), rng.uniform(0, 2 * PI, g.n_qubits),
                       g.u_count)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

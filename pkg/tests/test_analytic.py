import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from bigraph_states import analytic
from bigraph_states.errors import WrongSide
from bigraph_states.graph_model import BipartiteGraph, parity_sets, star_graph
from bigraph_states.state_engine import PauliString, QubitParams, build_graph_state, pauli_expectation
from conftest import random_graph, random_params

PI = np.pi
R2 = np.sqrt(2) / 2
SHARED_TARGET = BipartiteGraph(2, 1, ((0, 2), (1, 2)))
SHARED_PLUS_ISOLATED = BipartiteGraph(3, 1, ((0, 3), (1, 3)))


def quarter(g):
    return QubitParams.for_graph(g, theta_u=PI / 4, phi_u=PI / 4, theta_v=PI / 4, phi_v=PI / 4)


def test_mean_u_isolated():
    g = BipartiteGraph(2, 1, ((1, 2),))
    p = QubitParams.for_graph(g, theta_u=PI / 2)
    assert analytic.mean_u(g, p, 0) == pytest.approx((1, 0, 0), abs=1e-15)


def test_mean_u_hub_unit_base(star):
    p = QubitParams.for_graph(star, theta_u=PI / 4, theta_v=PI / 2)
    assert analytic.mean_u(star, p, 0) == pytest.approx((R2, 0, R2), abs=1e-15)


def test_mean_u_hub_quarter(star):
    mx, my, mz = analytic.mean_u(star, quarter(star), 0)
    assert mx == pytest.approx(0.0625, abs=1e-15)
    assert my == pytest.approx(0.0625, abs=1e-15)
    assert mz == pytest.approx(R2, abs=1e-15)


def test_mean_v_isolated():
    g = BipartiteGraph(1, 2, ((0, 1),))
    p = QubitParams.for_graph(g, theta_v=PI / 2, phi_v=PI / 2)
    assert analytic.mean_v(g, p, 2) == pytest.approx((0, 1, 0), abs=1e-15)


def test_mean_v_leaf_annihilated(star):
    p = QubitParams.for_graph(star, theta_u=PI / 2, theta_v=1.1, phi_v=0.4)
    mx, my, mz = analytic.mean_v(star, p, 2)
    assert (my, mz) == pytest.approx((0, 0), abs=1e-15)
    assert mx == pytest.approx(np.cos(0.4) * np.sin(1.1))


def test_mean_v_leaf_quarter(star):
    assert analytic.mean_v(star, quarter(star), 1) == pytest.approx((0.5, 0.5 * R2, 0.5),
                                                                    abs=1e-15)


def test_wrong_side(star, star_quarter):
    with pytest.raises(WrongSide):
        analytic.mean_u(star, star_quarter, 1)
    with pytest.raises(WrongSide):
        analytic.mean_v(star, star_quarter, 0)


def test_entanglement_examples(star):
    rng = np.random.default_rng(0)
    g = BipartiteGraph(2, 2, ((0, 2),))
    p = random_params(rng, g)
    assert analytic.entanglement_distance(g, p, 1) == 0.0
    assert analytic.entanglement_distance(g, p, 3) == 0.0
    p = QubitParams.for_graph(star, theta_u=PI / 2, theta_v=PI / 2)
    assert analytic.entanglement_distance(star, p, 0) == pytest.approx(0.0, abs=1e-15)
    p = QubitParams.for_graph(star, theta_u=PI / 2, theta_v=PI / 4)
    assert analytic.entanglement_distance(star, p, 0) == pytest.approx(0.875, abs=1e-12)


def test_star_correlators(star):
    p = quarter(star)
    psi = oracle.graph_state(star.edges, p.theta, p.phi)
    expected = {
        "cxx_all": oracle.expectation(psi, {k: "X" for k in range(4)}),
        "cx_U": oracle.expectation(psi, {0: "X"}),
        "czz_all": oracle.expectation(psi, {k: "Z" for k in range(4)}),
        "cz_V": oracle.expectation(psi, {k: "Z" for k in (1, 2, 3)}),
    }
    # frozen from the dense oracle
    assert expected == pytest.approx(
        {"cxx_all": 0.5, "cx_U": 0.0625, "czz_all": R2**3, "cz_V": 0.25}, abs=1e-12)
    for name, fn in analytic.CORRELATORS.items():
        assert fn(star, p) == pytest.approx(expected[name], abs=1e-12)


def test_shared_target_correlators():
    p = quarter(SHARED_TARGET)
    assert analytic.correlator_xx_all(SHARED_TARGET, p) == pytest.approx(0.125, abs=1e-15)
    assert analytic.correlator_x_U(SHARED_TARGET, p) == pytest.approx(0.25, abs=1e-15)
    psi = oracle.graph_state(SHARED_TARGET.edges, p.theta, p.phi)
    assert oracle.expectation(psi, {0: "X", 1: "X", 2: "X"}) == pytest.approx(0.125, abs=1e-12)
    assert oracle.expectation(psi, {0: "X", 1: "X"}) == pytest.approx(0.25, abs=1e-12)


def test_shared_target_with_isolated_u():
    g = SHARED_PLUS_ISOLATED
    p = quarter(g)
    psi = oracle.graph_state(g.edges, p.theta, p.phi)
    assert analytic.correlator_zz_all(g, p) == pytest.approx(0.5, abs=1e-15)
    assert oracle.expectation(psi, {k: "Z" for k in range(4)}) == pytest.approx(0.5, abs=1e-12)
    assert analytic.correlator_z_V(g, p) == pytest.approx(R2**3, abs=1e-15)
    assert oracle.expectation(psi, {3: "Z"}) == pytest.approx(R2**3, abs=1e-12)


def test_trivial_correlators():
    edgeless = BipartiteGraph(2, 2)
    p = QubitParams.for_graph(edgeless, theta_u=PI / 2)
    # V_odd is empty; the all-qubit product still carries sin(theta_V) = 0
    assert analytic.correlator_x_U(edgeless, p) == pytest.approx(1.0)
    assert analytic.correlator_xx_all(edgeless, p) == 0.0
    assert analytic.correlator_zz_all(edgeless, QubitParams.uniform(2, 2)) == 1.0
    g = star_graph()
    p = QubitParams.for_graph(g, theta_u=PI / 2, theta_v=PI / 2)
    assert analytic.correlator_x_U(g, p) == pytest.approx(1.0)
    assert analytic.correlator_zz_all(g, p) == pytest.approx(0.0, abs=1e-15)
    p = QubitParams.for_graph(g, theta_u=0.0, theta_v=1.0)
    assert analytic.correlator_xx_all(g, p) == 0.0
    assert analytic.correlator_z_V(g, QubitParams.uniform(1, 3)) == 1.0


# -- closed forms for uniform per-side angles, written independently ------


def uniform_forms(g, tu, pu, tv, pv):
    ps = parity_sets(g)
    bu, bv = np.cos(pu) * np.sin(tu), np.cos(pv) * np.sin(tv)
    cu, cv = np.cos(tu), np.cos(tv)
    nU, nV = g.u_count, g.v_count
    e = {}
    for u in g.U:
        e[u] = np.sin(tu) ** 2 * (1 - bv ** (2 * ps.degree[u]))
    for v in g.V:
        e[v] = (1 - np.cos(pv) ** 2 * np.sin(tv) ** 2
                - (np.sin(pv) ** 2 * np.sin(tv) ** 2 + np.cos(tv) ** 2) * cu ** (2 * ps.degree[v]))
    corr = {
        "cxx_all": bu**nU * bv ** len(ps.v_even),
        "cx_U": bu**nU * bv ** len(ps.v_odd),
        "czz_all": cv**nV * cu ** len(ps.u_even),
        "cz_V": cv**nV * cu ** len(ps.u_odd),
    }
    return e, corr


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_uniform_specialisations(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, 5)
    tu, tv = rng.uniform(0, PI, 2)
    pu, pv = rng.uniform(0, 2 * PI, 2)
    p = QubitParams.for_graph(g, theta_u=tu, phi_u=pu, theta_v=tv, phi_v=pv)
    e, corr = uniform_forms(g, tu, pu, tv, pv)
    for q in range(g.n_qubits):
        assert analytic.entanglement_distance(g, p, q) == pytest.approx(e[q], abs=1e-12)
    for name, fn in analytic.CORRELATORS.items():
        assert fn(g, p) == pytest.approx(corr[name], abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_report_invariants(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, 5)
    rep = analytic.analytic_report(g, random_params(rng, g))
    assert np.allclose(rep.e, 1 - (rep.mx**2 + rep.my**2 + rep.mz**2), atol=1e-12)
    assert np.all((rep.e >= 0) & (rep.e <= 1))
    for arr in (rep.mx, rep.my, rep.mz):
        assert np.all(np.abs(arr) <= 1 + 1e-15)
    ps = parity_sets(g)
    for q, d in ps.degree.items():
        if d == 0:
            assert rep.e[q] == pytest.approx(0.0, abs=1e-12)


def test_oracle_equivalence_small_dense():
    rng = np.random.default_rng(17)
    for _ in range(25):
        g = random_graph(rng, 3)
        p = random_params(rng, g)
        psi = oracle.graph_state(g.edges, p.theta, p.phi)
        for q in range(g.n_qubits):
            assert analytic.pauli_means(g, p, q) == pytest.approx(
                tuple(oracle.reduced_bloch(psi, q)), abs=1e-12)


def test_oracle_equivalence_statevector():
    rng = np.random.default_rng(99)
    for _ in range(30):
        g = random_graph(rng, 5)
        p = random_params(rng, g)
        s = build_graph_state(g, p)
        rep = analytic.analytic_report(g, p)
        for q in range(g.n_qubits):
            for axis, arr in zip("XYZ", (rep.mx, rep.my, rep.mz)):
                assert arr[q] == pytest.approx(
                    pauli_expectation(s, PauliString({q: axis})), abs=1e-10)
        support = {"cxx_all": ("X", range(g.n_qubits)), "cx_U": ("X", g.U),
                   "czz_all": ("Z", range(g.n_qubits)), "cz_V": ("Z", g.V)}
        for name, (label, qs) in support.items():
            assert getattr(rep, name) == pytest.approx(
                pauli_expectation(s, PauliString.uniform(label, qs)), abs=1e-10)


@pytest.mark.parametrize("base_angle", [0.3, 0.9, 1.3])
def test_degree_monotonicity(base_angle):
    # U = {0}, V = 6 leaves, first n edges present; base b = sin(theta_V) in (0, 1)
    values = []
    for n in range(7):
        g = BipartiteGraph(1, 6, tuple((0, v) for v in range(1, n + 1)))
        p = QubitParams.for_graph(g, theta_u=1.0, theta_v=base_angle)
        values.append(analytic.entanglement_distance(g, p, 0))
    assert all(b > a for a, b in zip(values, values[1:]))

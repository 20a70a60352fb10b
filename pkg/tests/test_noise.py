import numpy as np
import pytest

from bigraph_states.graph_model import BipartiteGraph, star_graph
from bigraph_states.noise import NoiseModel, noisy_sample
from bigraph_states.protocols import measure_parity_correlators
from bigraph_states.state_engine import QubitParams, build_graph_state, parity_estimate, sample
from conftest import random_graph, random_params

PI = np.pi
ONE_EDGE = BipartiteGraph(1, 1, ((0, 1),))


def test_defaults():
    m = NoiseModel()
    assert (m.readout_flip, m.single_x_error, m.cnot_error) == (1e-2, 1e-4, 1e-2)
    assert m.cnot_channel == "depolarizing2"


def test_parse_and_spec_round_trip():
    m = NoiseModel.parse("readout=0.02, x1=0.001, cnot=0.05, channel=bitflip_both")
    assert m == NoiseModel(0.02, 0.001, 0.05, "bitflip_both")
    assert NoiseModel.parse(m.to_spec()) == m
    assert NoiseModel.parse("ideal").is_ideal
    assert NoiseModel.parse("cnot=0.2") == NoiseModel(cnot_error=0.2)


@pytest.mark.parametrize("bad", ["readout=2", "cnot=-0.1", "channel=amplitude", "foo=1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        NoiseModel.parse(bad)


def test_noiseless_limit_bit_exact():
    rng = np.random.default_rng(8)
    for seed in range(15):
        g = random_graph(rng, 4)
        p = random_params(rng, g)
        rot = [(q, "XYZ"[rng.integers(3)]) for q in range(g.n_qubits) if rng.random() < 0.5]
        ideal = sample(build_graph_state(g, p), rot, 300, seed)
        assert noisy_sample(g, p, rot, 300, seed, NoiseModel.ideal()) == ideal


def test_readout_flip_rate():
    g = BipartiteGraph(1, 1)
    rec = noisy_sample(g, QubitParams.uniform(1, 1), [], 10**6, 3, NoiseModel(0.01, 0, 0))
    ones = sum(c for bits, c in rec.counts.items() if bits[0] == "1")
    assert ones / rec.shots == pytest.approx(0.01, abs=0.0005)


def test_x_fault_locations():
    # qubit 0 starts in |+>: its two prep faults leave it alone and the fault
    # after the X-basis rotation turns the certain "0" into "1". Qubit 1 gets
    # two prep faults that cancel, and no rotation fault for the Z basis.
    g = BipartiteGraph(1, 1)
    p = QubitParams.uniform(1, 1, theta_u=PI / 2)
    rec = noisy_sample(g, p, [(0, "X")], 50, 0, NoiseModel(0, 1.0, 0))
    assert rec.counts == {"10": 50}
    rec = noisy_sample(g, p, [(0, "X"), (1, "Z")], 50, 0, NoiseModel(0, 1.0, 0))
    assert rec.counts == {"10": 50}


def test_x_fault_after_rotation_only():
    g = BipartiteGraph(1, 1)
    p = QubitParams.uniform(1, 1, theta_u=PI / 2, theta_v=PI / 2)
    # every location faults; prep faults act on |+> trivially
    rec = noisy_sample(g, p, [(0, "X"), (1, "X")], 20, 1, NoiseModel(0, 1.0, 0))
    assert rec.counts == {"11": 20}


def test_bitflip_both_channel():
    rec = noisy_sample(star_graph(), QubitParams.uniform(1, 3), [], 40, 0,
                       NoiseModel(0, 0, 1.0, "bitflip_both"))
    # CNOT1 idle, XX -> hub=1, v1=1; CNOT2 fires, XX -> hub=0, v2=0;
    # CNOT3 idle, XX -> hub=1, v3=1
    assert rec.counts == {"1101": 40}


def test_depolarizing_marginal():
    rec = noisy_sample(ONE_EDGE, QubitParams.uniform(1, 1), [], 150_000, 2, NoiseModel(0, 0, 1.0))
    # 8 of the 15 non-identity two-qubit Paulis flip the control bit
    ones = sum(c for bits, c in rec.counts.items() if bits[0] == "1")
    assert ones / rec.shots == pytest.approx(8 / 15, abs=0.005)
    assert "00" in rec.counts  # Z-type faults leave both bits alone


def test_deterministic_per_seed():
    g, p = star_graph(), QubitParams.uniform(1, 3, 1.0, 0.2, 0.7, 0.4)
    m = NoiseModel(0.05, 0.01, 0.05)
    a = noisy_sample(g, p, [(0, "X")], 2000, 5, m)
    assert a == noisy_sample(g, p, [(0, "X")], 2000, 5, m)
    assert a != noisy_sample(g, p, [(0, "X")], 2000, 6, m)


def test_monotone_degradation(star_quarter):
    g = star_graph()
    means = []
    for flip in (0.0, 0.05, 0.2):
        model = NoiseModel(flip, 0.0, 0.0)
        vals = [abs(parity_estimate(noisy_sample(g, star_quarter, [], 1024, s, model), [1, 2, 3]))
                for s in range(30)]
        means.append(np.mean(vals))
    assert means[0] > means[1] > means[2]


def test_star_noisy_fixture(star, star_quarter):
    c = measure_parity_correlators(star, star_quarter, 1024, 7, NoiseModel())
    # frozen from a trajectory run (seed 7, default model)
    assert c.cz_V.value == pytest.approx(0.23046875, abs=1e-12)
    assert c.czz_all.value == pytest.approx(0.357421875, abs=1e-12)
    assert 0.25 - c.cz_V.value == pytest.approx(0.02, abs=0.01)

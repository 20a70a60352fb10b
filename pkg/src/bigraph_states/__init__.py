"""Bipartite graph states built from CNOT circuits.

Statevector simulation, closed-form Pauli means and correlators, trajectory
noise, and the protocols that turn correlators into odd/even degree counts.
"""

from .analytic import (
    AnalyticReport,
    analytic_report,
    correlator_x_U,
    correlator_xx_all,
    correlator_z_V,
    correlator_zz_all,
    entanglement_distance,
    mean_u,
    mean_v,
)
from .graph_model import (
    BipartiteGraph,
    DegreeSummary,
    load_graph,
    neighborhood,
    parity_sets,
    parse_graph,
    serialize_graph,
    star_graph,
)
from .noise import NoiseModel, noisy_sample
from .protocols import (
    EstimationResult,
    ParityCorrelators,
    ParityCountEstimate,
    estimate_even_counts,
    estimate_odd_counts,
    estimate_parity_counts,
    measure_entanglement_distance,
    measure_parity_correlators,
)
from .state_engine import (
    PauliString,
    QubitParams,
    ShotRecord,
    StateVector,
    apply_cnot,
    build_graph_state,
    parity_estimate,
    pauli_expectation,
    prepare_initial,
    sample,
)

__version__ = "0.1.0"

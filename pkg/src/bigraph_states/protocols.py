"""Measurement protocols and the parity-count inversion built on them.

Entanglement protocol: prepare the graph state, rotate qubit ``q`` into the
``X``, ``Y`` or ``Z`` basis, measure, and combine the three means into
``E = 1 - (mx^2 + my^2 + mz^2)``.

Parity protocol: one run with every qubit rotated to the ``X`` basis and one
run with no rotation. Parities over all qubits, over ``U`` only, and over ``V``
only give the four global correlators. With uniform per-side angles each
correlator is a product of a known factor and ``base**count``, so a logarithm
recovers the count:

=========  ============================  =================
quantity   correlator                    base
=========  ============================  =================
``|V_odd|``   ``<prod_U X>``                ``cos phi_V sin theta_V``
``|V_even|``  ``<prod_all X>``              ``cos phi_V sin theta_V``
``|U_odd|``   ``<prod_V Z>``                ``cos theta_U``
``|U_even|``  ``<prod_all Z>``              ``cos theta_U``
=========  ============================  =================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import analytic
from .errors import NonInvertibleParameters, NonPositiveCorrelator
from .graph_model import BipartiteGraph
from .noise import NoiseModel, noisy_sample
from .state_engine import (
    PauliString,
    QubitParams,
    build_graph_state,
    parity_estimate,
    pauli_expectation,
    sample,
)

METHODS = ("analytic", "exact_statevector", "sampled_ideal", "sampled_noisy")
AXES = ("X", "Y", "Z")
_BASE_EPS = 1e-12


@dataclass(frozen=True)
class EstimationResult:
    value: float
    stderr: float = 0.0
    shots: int = 0
    seed: Optional[int] = None
    method: str = "analytic"
    means: Optional[tuple[float, float, float]] = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.stderr < 0:
            raise ValueError("stderr must be non-negative")

    def to_dict(self) -> dict:
        out = {"value": self.value, "stderr": self.stderr, "shots": self.shots,
               "seed": self.seed, "method": self.method}
        if self.means is not None:
            out["means"] = list(self.means)
        return out


def child_seeds(seed: int, k: int) -> list[int]:
    """``k`` independent 64-bit seeds derived from ``seed``."""
    seq = np.random.SeedSequence(int(seed) & (2**64 - 1))
    return [int(s) for s in seq.generate_state(k, dtype=np.uint64)]


def _resolve_method(method: Optional[str], model: Optional[NoiseModel]) -> str:
    if method is None:
        return "sampled_ideal" if model is None or model.is_ideal else "sampled_noisy"
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    return method


def _run(g, params, rotations, shots, seed, method, model, state=None):
    if method == "sampled_noisy":
        return noisy_sample(g, params, rotations, shots, seed, model or NoiseModel())
    if state is None:
        state = build_graph_state(g, params)
    return sample(state, rotations, shots, seed)


def measure_entanglement_distance(
    g: BipartiteGraph,
    params: QubitParams,
    q: int,
    shots: int = 1024,
    seed: int = 0,
    model: Optional[NoiseModel] = None,
    method: Optional[str] = None,
) -> EstimationResult:
    method = _resolve_method(method, model)
    if method == "analytic":
        return EstimationResult(
            analytic.entanglement_distance(g, params, q),
            method=method,
            means=analytic.pauli_means(g, params, q),
        )
    if method == "exact_statevector":
        state = build_graph_state(g, params)
        means = tuple(pauli_expectation(state, PauliString({q: a})) for a in AXES)
        return EstimationResult(1.0 - sum(m * m for m in means), method=method, means=means)

    if shots < 1:
        raise ValueError("shots must be >= 1")
    state = build_graph_state(g, params) if method == "sampled_ideal" else None
    means = []
    for axis, axis_seed in zip(AXES, child_seeds(seed, 3)):
        record = _run(g, params, [(q, axis)], shots, axis_seed, method, model, state)
        means.append(parity_estimate(record, [q]))
    m2 = np.square(means)
    stderr = 2.0 * math.sqrt(float(np.sum(m2 * (1.0 - m2)))) / math.sqrt(shots)
    return EstimationResult(
        float(1.0 - m2.sum()), stderr, shots, seed, method, tuple(float(m) for m in means)
    )


@dataclass(frozen=True)
class ParityCorrelators:
    cxx_all: EstimationResult
    cx_U: EstimationResult
    czz_all: EstimationResult
    cz_V: EstimationResult

    def values(self) -> dict[str, float]:
        return {k: getattr(self, k).value for k in analytic.CORRELATORS}

    def to_dict(self) -> dict:
        return {k: getattr(self, k).to_dict() for k in analytic.CORRELATORS}


def _correlator_support(g: BipartiteGraph) -> dict[str, list[int]]:
    everything = list(range(g.n_qubits))
    return {"cxx_all": everything, "cx_U": list(g.U), "czz_all": everything, "cz_V": list(g.V)}


def measure_parity_correlators(
    g: BipartiteGraph,
    params: QubitParams,
    shots: int = 1024,
    seed: int = 0,
    model: Optional[NoiseModel] = None,
    method: Optional[str] = None,
) -> ParityCorrelators:
    """The four global correlators from one ``X``-basis and one ``Z``-basis run."""
    method = _resolve_method(method, model)
    support = _correlator_support(g)
    if method == "analytic":
        return ParityCorrelators(**{
            name: EstimationResult(fn(g, params), method=method)
            for name, fn in analytic.CORRELATORS.items()
        })
    if method == "exact_statevector":
        state = build_graph_state(g, params)
        label = {"cxx_all": "X", "cx_U": "X", "czz_all": "Z", "cz_V": "Z"}
        return ParityCorrelators(**{
            name: EstimationResult(
                pauli_expectation(state, PauliString.uniform(label[name], qs)), method=method
            )
            for name, qs in support.items()
        })

    if shots < 1:
        raise ValueError("shots must be >= 1")
    state = build_graph_state(g, params) if method == "sampled_ideal" else None
    x_seed, z_seed = child_seeds(seed, 2)
    x_run = _run(g, params, [(k, "X") for k in range(g.n_qubits)], shots, x_seed, method,
                 model, state)
    z_run = _run(g, params, [], shots, z_seed, method, model, state)
    results = {}
    for name, qs in support.items():
        record = x_run if name.startswith("cx") else z_run
        value = parity_estimate(record, qs)
        stderr = math.sqrt(max(0.0, 1.0 - value * value) / shots)
        results[name] = EstimationResult(value, stderr, shots, seed, method)
    return ParityCorrelators(**results)


# --------------------------------------------------------------------------
# Parity-count inversion

Number = Union[float, EstimationResult]


@dataclass(frozen=True)
class ParityCountEstimate:
    """Unrounded vertex-count estimates; fields not requested stay ``None``."""

    v_odd_est: Optional[float] = None
    u_odd_est: Optional[float] = None
    v_even_est: Optional[float] = None
    u_even_est: Optional[float] = None
    stderr: dict[str, float] = field(default_factory=dict)
    correlators: dict[str, float] = field(default_factory=dict)
    angles: dict[str, float] = field(default_factory=dict)

    def estimates(self) -> dict[str, float]:
        names = ("v_odd_est", "u_odd_est", "v_even_est", "u_even_est")
        return {n[:-4]: getattr(self, n) for n in names if getattr(self, n) is not None}

    def merge(self, other: "ParityCountEstimate") -> "ParityCountEstimate":
        pick = lambda a, b: a if a is not None else b  # noqa: E731
        return ParityCountEstimate(
            pick(self.v_odd_est, other.v_odd_est),
            pick(self.u_odd_est, other.u_odd_est),
            pick(self.v_even_est, other.v_even_est),
            pick(self.u_even_est, other.u_even_est),
            {**self.stderr, **other.stderr},
            {**self.correlators, **other.correlators},
            {**self.angles, **other.angles},
        )

    def rounded(self) -> dict[str, dict]:
        """Nearest integers, flagged when further than ``2 * stderr`` away."""
        out = {}
        for name, value in self.estimates().items():
            nearest = int(round(value))
            tol = max(2.0 * self.stderr.get(name, 0.0), 1e-6)
            out[name] = {"value": nearest, "flagged": abs(value - nearest) > tol}
        return out

    def to_dict(self) -> dict:
        return {"estimates": self.estimates(), "stderr": dict(self.stderr),
                "correlators": dict(self.correlators), "angles": dict(self.angles)}


def _split(x: Number) -> tuple[float, float]:
    if isinstance(x, EstimationResult):
        return x.value, x.stderr
    return float(x), 0.0


def _log_base(base: float, label: str, *, divisor: bool) -> float:
    upper_ok = base < 1.0 - _BASE_EPS if divisor else base <= 1.0 + _BASE_EPS
    if not (base > _BASE_EPS and upper_ok):
        raise NonInvertibleParameters(
            f"{label} = {base:.6g} must lie in (0, 1) for the parity inversion"
        )
    return math.log(min(base, 1.0))


def _invert(corr: Number, label: str, known_base: float, known_power: int,
            count_base: float, known_label: str, count_label: str) -> tuple[float, float]:
    value, se = _split(corr)
    if value <= 0.0:
        raise NonPositiveCorrelator(f"{label} = {value:.6g} is not positive; cannot take its log")
    log_known = _log_base(known_base, known_label, divisor=False)
    log_count = _log_base(count_base, count_label, divisor=True)
    est = (math.log(value) - known_power * log_known) / log_count
    return est, se / (value * abs(log_count))


def _bases(params: QubitParams) -> dict[str, float]:
    theta_u, phi_u, theta_v, phi_v = params.uniform_angles()
    return {
        "theta_u": theta_u, "phi_u": phi_u, "theta_v": theta_v, "phi_v": phi_v,
        "b_U": math.cos(phi_u) * math.sin(theta_u),
        "b_V": math.cos(phi_v) * math.sin(theta_v),
        "c_U": math.cos(theta_u),
        "c_V": math.cos(theta_v),
    }


def estimate_odd_counts(cx_U: Number, cz_V: Number, params: QubitParams) -> ParityCountEstimate:
    """``|V_odd|`` from ``<prod_U X>`` and ``|U_odd|`` from ``<prod_V Z>``.

    ``params`` must be uniform on each side.

    Raises
    ------
    NonInvertibleParameters
        A base that divides the log is not strictly inside (0, 1).
    NonPositiveCorrelator
        A correlator is <= 0, e.g. after shot noise.
    """
    b = _bases(params)
    u, v = params.u_count, params.v_count
    v_odd, v_se = _invert(cx_U, "cx_U", b["b_U"], u, b["b_V"], "cos(phi_U) sin(theta_U)",
                          "cos(phi_V) sin(theta_V)")
    u_odd, u_se = _invert(cz_V, "cz_V", b["c_V"], v, b["c_U"], "cos(theta_V)", "cos(theta_U)")
    return ParityCountEstimate(
        v_odd_est=v_odd, u_odd_est=u_odd,
        stderr={"v_odd": v_se, "u_odd": u_se},
        correlators={"cx_U": _split(cx_U)[0], "cz_V": _split(cz_V)[0]},
        angles={k: b[k] for k in ("theta_u", "phi_u", "theta_v", "phi_v")},
    )


def estimate_even_counts(cxx_all: Number, czz_all: Number,
                         params: QubitParams) -> ParityCountEstimate:
    """``|V_even|`` from ``<prod_all X>`` and ``|U_even|`` from ``<prod_all Z>``."""
    b = _bases(params)
    u, v = params.u_count, params.v_count
    v_even, v_se = _invert(cxx_all, "cxx_all", b["b_U"], u, b["b_V"],
                           "cos(phi_U) sin(theta_U)", "cos(phi_V) sin(theta_V)")
    u_even, u_se = _invert(czz_all, "czz_all", b["c_V"], v, b["c_U"], "cos(theta_V)",
                           "cos(theta_U)")
    return ParityCountEstimate(
        v_even_est=v_even, u_even_est=u_even,
        stderr={"v_even": v_se, "u_even": u_se},
        correlators={"cxx_all": _split(cxx_all)[0], "czz_all": _split(czz_all)[0]},
        angles={k: b[k] for k in ("theta_u", "phi_u", "theta_v", "phi_v")},
    )


def estimate_parity_counts(corr: ParityCorrelators, params: QubitParams) -> ParityCountEstimate:
    return estimate_odd_counts(corr.cx_U, corr.cz_V, params).merge(
        estimate_even_counts(corr.cxx_all, corr.czz_all, params)
    )

"""Closed-form Pauli means, entanglement distance and global correlators.

With ``b_k = cos(phi_k) sin(theta_k)`` and ``c_k = cos(theta_k)``, conjugating
by the CNOTs (control in ``U``) maps ``X_u -> X_u prod_{v in N(u)} X_v`` and
``Z_v -> Z_v prod_{u in N(v)} Z_u``. So:

* the all-qubit ``X`` product keeps ``X_v`` on vertices of even degree,
  ``<prod X> = prod_U b_u * prod_{V_even} b_v``;
* the ``U``-only ``X`` product picks up odd-degree ``V`` vertices,
  ``<prod_U X> = prod_U b_u * prod_{V_odd} b_v``;
* likewise ``<prod Z> = prod_V c_v * prod_{U_even} c_u`` and
  ``<prod_V Z> = prod_V c_v * prod_{U_odd} c_u``.

Empty products are 1, so isolated vertices behave as unentangled qubits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SizeMismatch, WrongSide
from .graph_model import BipartiteGraph, parity_sets
from .state_engine import QubitParams


def _check(g: BipartiteGraph, params: QubitParams) -> None:
    if params.n_qubits != g.n_qubits or params.u_count != g.u_count:
        raise SizeMismatch("parameter layout does not match the graph")


def _x_base(params: QubitParams, k: int) -> float:
    return float(np.cos(params.phi[k]) * np.sin(params.theta[k]))


def _z_base(params: QubitParams, k: int) -> float:
    return float(np.cos(params.theta[k]))


def _prod(values) -> float:
    return float(np.prod(list(values), dtype=float)) if values else 1.0


def mean_u(g: BipartiteGraph, params: QubitParams, u: int) -> tuple[float, float, float]:
    """``(<X_u>, <Y_u>, <Z_u>)`` for a control-side qubit."""
    _check(g, params)
    if not g.in_u(u):
        raise WrongSide(f"vertex {u} is not in U")
    t, p = params.theta[u], params.phi[u]
    nb = _prod([_x_base(params, m) for m in g.neighbors(u)])
    return (
        float(np.cos(p) * np.sin(t) * nb),
        float(np.sin(p) * np.sin(t) * nb),
        float(np.cos(t)),
    )


def mean_v(g: BipartiteGraph, params: QubitParams, v: int) -> tuple[float, float, float]:
    """``(<X_v>, <Y_v>, <Z_v>)`` for a target-side qubit."""
    _check(g, params)
    if g.in_u(v):
        raise WrongSide(f"vertex {v} is not in V")
    t, p = params.theta[v], params.phi[v]
    nb = _prod([_z_base(params, m) for m in g.neighbors(v)])
    return (
        float(np.cos(p) * np.sin(t)),
        float(np.sin(p) * np.sin(t) * nb),
        float(np.cos(t) * nb),
    )


def pauli_means(g: BipartiteGraph, params: QubitParams, q: int) -> tuple[float, float, float]:
    return mean_u(g, params, q) if g.in_u(q) else mean_v(g, params, q)


def entanglement_distance(g: BipartiteGraph, params: QubitParams, q: int) -> float:
    """``1 - sum_j <sigma^j_q>^2`` from the side-specific closed forms."""
    _check(g, params)
    t, p = params.theta[q], params.phi[q]
    if g.in_u(q):
        nb2 = _prod([_x_base(params, m) ** 2 for m in g.neighbors(q)])
        value = np.sin(t) ** 2 * (1.0 - nb2)
    else:
        nb2 = _prod([_z_base(params, m) ** 2 for m in g.neighbors(q)])
        bx2 = (np.cos(p) * np.sin(t)) ** 2
        rest = (np.sin(p) * np.sin(t)) ** 2 + np.cos(t) ** 2
        value = 1.0 - bx2 - rest * nb2
    return float(min(1.0, max(0.0, value)))


def correlator_xx_all(g: BipartiteGraph, params: QubitParams) -> float:
    """``<prod_{all} X>``; exponent on the V side counts even-degree vertices."""
    _check(g, params)
    ps = parity_sets(g)
    return _prod([_x_base(params, u) for u in g.U]) * _prod(
        [_x_base(params, v) for v in sorted(ps.v_even)]
    )


def correlator_x_U(g: BipartiteGraph, params: QubitParams) -> float:
    """``<prod_{U} X>``; exponent on the V side counts odd-degree vertices."""
    _check(g, params)
    ps = parity_sets(g)
    return _prod([_x_base(params, u) for u in g.U]) * _prod(
        [_x_base(params, v) for v in sorted(ps.v_odd)]
    )


def correlator_zz_all(g: BipartiteGraph, params: QubitParams) -> float:
    """``<prod_{all} Z>``; exponent on the U side counts even-degree vertices."""
    _check(g, params)
    ps = parity_sets(g)
    return _prod([_z_base(params, v) for v in g.V]) * _prod(
        [_z_base(params, u) for u in sorted(ps.u_even)]
    )


def correlator_z_V(g: BipartiteGraph, params: QubitParams) -> float:
    """``<prod_{V} Z>``; exponent on the U side counts odd-degree vertices."""
    _check(g, params)
    ps = parity_sets(g)
    return _prod([_z_base(params, v) for v in g.V]) * _prod(
        [_z_base(params, u) for u in sorted(ps.u_odd)]
    )


CORRELATORS = {
    "cxx_all": correlator_xx_all,
    "cx_U": correlator_x_U,
    "czz_all": correlator_zz_all,
    "cz_V": correlator_z_V,
}


@dataclass(frozen=True)
class AnalyticReport:
    mx: np.ndarray
    my: np.ndarray
    mz: np.ndarray
    e: np.ndarray
    cxx_all: float
    cx_U: float
    czz_all: float
    cz_V: float

    def to_dict(self) -> dict:
        return {
            "mx": self.mx.tolist(),
            "my": self.my.tolist(),
            "mz": self.mz.tolist(),
            "entanglement_distance": self.e.tolist(),
            "cxx_all": self.cxx_all,
            "cx_U": self.cx_U,
            "czz_all": self.czz_all,
            "cz_V": self.cz_V,
        }


def analytic_report(g: BipartiteGraph, params: QubitParams) -> AnalyticReport:
    means = np.array([pauli_means(g, params, q) for q in range(g.n_qubits)])
    e = np.array([entanglement_distance(g, params, q) for q in range(g.n_qubits)])
    return AnalyticReport(
        mx=means[:, 0],
        my=means[:, 1],
        mz=means[:, 2],
        e=e,
        **{name: fn(g, params) for name, fn in CORRELATORS.items()},
    )

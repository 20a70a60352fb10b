"""Stochastic Pauli noise via per-shot trajectories.

Fault locations, in circuit order:

* an ``X`` fault after each single-qubit gate: the ``RY(theta)`` and
  ``PHASE(phi)`` of every qubit's preparation, then each non-trivial basis
  rotation before readout;
* a two-qubit Pauli fault after each CNOT (uniform over the 15 non-identity
  Paulis for ``depolarizing2``, ``X (x) X`` for ``bitflip_both``);
* a symmetric classical bit flip on every measured bit.

RNG contract: :func:`~bigraph_states.state_engine.rng_streams` splits the seed
into a fault stream and a measurement stream. Fault draws are arrays indexed
by shot, and shot ``i`` consumes measurement uniform ``i``. With every
probability at zero no fault draws happen and the output equals
:func:`~bigraph_states.state_engine.sample` for the same seed.

Shots that drew the same fault pattern share one statevector evaluation.
Pauli channels make this exact in distribution.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .graph_model import BipartiteGraph
from .state_engine import (
    QubitParams,
    ShotRecord,
    apply_1q_inplace,
    apply_cnot_inplace,
    apply_pauli_inplace,
    apply_rotations_inplace,
    apply_x_inplace,
    basis_rotation,
    build_graph_state,
    counts_from_indices,
    inverse_cdf,
    phase,
    prepare_initial,
    rng_streams,
    ry,
)

CHANNELS = ("depolarizing2", "bitflip_both")
_PAULI_LABELS = "IXYZ"
_XX_CODE = 1 * 4 + 1


@dataclass(frozen=True)
class NoiseModel:
    readout_flip: float = 1e-2
    single_x_error: float = 1e-4
    cnot_error: float = 1e-2
    cnot_channel: str = "depolarizing2"

    def __post_init__(self) -> None:
        for name in ("readout_flip", "single_x_error", "cnot_error"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} is not a probability")
        if self.cnot_channel not in CHANNELS:
            raise ValueError(f"cnot_channel must be one of {CHANNELS}")

    @classmethod
    def ideal(cls) -> "NoiseModel":
        return cls(0.0, 0.0, 0.0)

    @property
    def is_ideal(self) -> bool:
        return self.readout_flip == self.single_x_error == self.cnot_error == 0.0

    @classmethod
    def parse(cls, spec: str) -> "NoiseModel":
        """Parse ``ideal``, ``default`` or ``readout=..,x1=..,cnot=..,channel=..``.

        Keys left out keep their default values.
        """
        spec = spec.strip()
        if spec == "ideal":
            return cls.ideal()
        if spec == "default":
            return cls()
        keys = {"readout": "readout_flip", "x1": "single_x_error", "cnot": "cnot_error",
                "channel": "cnot_channel"}
        kwargs: dict = {}
        for item in filter(None, (s.strip() for s in spec.split(","))):
            key, sep, value = item.partition("=")
            if not sep or key.strip() not in keys:
                raise ValueError(f"bad noise item {item!r}; expected one of {sorted(keys)}")
            field = keys[key.strip()]
            kwargs[field] = value.strip() if field == "cnot_channel" else float(value)
        return cls(**kwargs)

    def to_spec(self) -> str:
        return (f"readout={self.readout_flip!r},x1={self.single_x_error!r},"
                f"cnot={self.cnot_error!r},channel={self.cnot_channel}")

    def to_dict(self) -> dict:
        return asdict(self)


def _prep_has_faults(x_row: np.ndarray, n: int) -> bool:
    return bool(x_row[: 2 * n].any())


def _run_trajectory(
    g: BipartiteGraph,
    params: QubitParams,
    rotations: Sequence[tuple[int, str]],
    x_row: np.ndarray,
    cx_row: np.ndarray,
) -> np.ndarray:
    n = g.n_qubits
    if _prep_has_faults(x_row, n):
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1.0
        for k in range(n):
            apply_1q_inplace(amps, n, k, ry(params.theta[k]))
            if x_row[2 * k]:
                apply_x_inplace(amps, n, k)
            apply_1q_inplace(amps, n, k, phase(params.phi[k]))
            if x_row[2 * k + 1]:
                apply_x_inplace(amps, n, k)
    else:
        amps = prepare_initial(params).amplitudes
    for i, (u, v) in enumerate(g.edges):
        apply_cnot_inplace(amps, n, u, v)
        code = int(cx_row[i])
        if code:
            apply_pauli_inplace(amps, n, u, _PAULI_LABELS[code // 4])
            apply_pauli_inplace(amps, n, v, _PAULI_LABELS[code % 4])
    loc = 2 * n
    for q, axis in rotations:
        if axis.upper() == "Z":
            continue
        apply_1q_inplace(amps, n, q, basis_rotation(axis))
        if x_row[loc]:
            apply_x_inplace(amps, n, q)
        loc += 1
    return amps


def noisy_sample(
    g: BipartiteGraph,
    params: QubitParams,
    pre_rotations: Sequence[tuple[int, str]],
    shots: int,
    seed: int,
    model: NoiseModel | None = None,
) -> ShotRecord:
    """Sample the graph-state circuit with trajectory Pauli noise."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    model = NoiseModel() if model is None else model
    n = g.n_qubits
    rotations = list(pre_rotations)
    n_rot = sum(axis.upper() != "Z" for _, axis in rotations)
    fault, meas = rng_streams(seed)

    n_1q = 2 * n + n_rot
    x_hits = np.zeros((shots, n_1q), dtype=np.int8)
    if model.single_x_error > 0:
        x_hits[:] = fault.random((shots, n_1q)) < model.single_x_error
    cx_codes = np.zeros((shots, len(g.edges)), dtype=np.int8)
    if model.cnot_error > 0 and g.edges:
        hit = fault.random((shots, len(g.edges))) < model.cnot_error
        if model.cnot_channel == "depolarizing2":
            which = fault.integers(1, 16, size=hit.shape)
        else:
            which = np.full(hit.shape, _XX_CODE)
        cx_codes[:] = np.where(hit, which, 0)
    flip_mask = np.zeros(shots, dtype=np.int64)
    if model.readout_flip > 0:
        flips = fault.random((shots, n)) < model.readout_flip
        flip_mask = flips.astype(np.int64) @ (np.int64(1) << np.arange(n, dtype=np.int64))

    uniforms = meas.random(shots)
    indices = np.empty(shots, dtype=np.int64)
    patterns = np.concatenate([x_hits, cx_codes], axis=1)
    if patterns.shape[1] == 0 or not patterns.any():
        groups = [np.arange(shots)]
        keys = [np.zeros(patterns.shape[1], dtype=np.int8)]
    else:
        uniq, inverse = np.unique(patterns, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        keys = list(uniq)
        groups = [np.flatnonzero(inverse == i) for i in range(len(uniq))]
    for key, members in zip(keys, groups):
        x_row, cx_row = key[:n_1q], key[n_1q:]
        if not key.any():
            amps = build_graph_state(g, params).amplitudes
            apply_rotations_inplace(amps, n, rotations)
        else:
            amps = _run_trajectory(g, params, rotations, x_row, cx_row)
        indices[members] = inverse_cdf(np.abs(amps) ** 2, uniforms[members])
    indices ^= flip_mask
    return ShotRecord(shots, seed, counts_from_indices(indices, n), n)

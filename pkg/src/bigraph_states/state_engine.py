"""Dense statevector simulation of CNOT-built bipartite graph states.

Conventions
-----------
* Qubit ``k`` is bit ``k`` of the basis index (little-endian).
* Bitstrings in :class:`ShotRecord` are written qubit-0-first, so
  ``bitstring[k]`` is the outcome of qubit ``k``.
* Global phases are dropped. The initial single-qubit state is
  ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``, prepared as ``RY(theta)``
  followed by ``PHASE(phi) = diag(1, exp(i phi))``.
* Measuring in the ``alpha`` basis applies ``G_alpha`` then reads out ``Z``,
  where ``G_alpha^dagger Z G_alpha = sigma^alpha``:
  ``G_x = RY(-pi/2)``, ``G_y = RX(pi/2)``, ``G_z = I``.
* Sampling draws one uniform per shot from a PCG64 stream seeded by
  ``SeedSequence(seed).spawn(2)[1]`` and maps it through the inverse CDF of
  the Born distribution. Shot ``i`` always uses uniform ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptySupport, NonUniformParameters, SameQubit, SizeMismatch, VertexOutOfRange
from .graph_model import BipartiteGraph

NORM_ATOL = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_MATRICES = {"I": I2, "X": X, "Y": Y, "Z": Z}


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def phase(phi: float) -> np.ndarray:
    """``RZ(phi)`` with the global phase removed."""
    return np.diag([1.0, np.exp(1j * phi)]).astype(complex)


def basis_rotation(axis: str) -> np.ndarray:
    """Unitary ``G`` with ``G^dagger Z G = sigma^axis``."""
    axis = axis.upper()
    if axis == "X":
        return ry(-np.pi / 2)
    if axis == "Y":
        return rx(np.pi / 2)
    if axis == "Z":
        return I2.copy()
    raise ValueError(f"unknown measurement axis {axis!r}")


# --------------------------------------------------------------------------
# Parameters and states


@dataclass(frozen=True)
class QubitParams:
    """Per-qubit angles of the initial product state, indexed globally.

    ``theta`` and ``phi`` hold one entry per qubit with ``U`` first. Use
    :meth:`theta_U` / :meth:`theta_V` (and the ``phi`` twins) for side-local
    indices.
    """

    theta: np.ndarray
    phi: np.ndarray
    u_count: int

    def __post_init__(self) -> None:
        theta = np.asarray(self.theta, dtype=float).reshape(-1)
        phi = np.asarray(self.phi, dtype=float).reshape(-1)
        if theta.shape != phi.shape:
            raise SizeMismatch(f"theta has {theta.size} entries, phi has {phi.size}")
        if not 0 < self.u_count < theta.size:
            raise SizeMismatch(f"u_count={self.u_count} incompatible with {theta.size} qubits")
        if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(phi))):
            raise ValueError("angles must be finite")
        theta.flags.writeable = False
        phi.flags.writeable = False
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def uniform(
        cls,
        u_count: int,
        v_count: int,
        theta_u: float = 0.0,
        phi_u: float = 0.0,
        theta_v: float = 0.0,
        phi_v: float = 0.0,
    ) -> "QubitParams":
        theta = np.r_[np.full(u_count, theta_u), np.full(v_count, theta_v)]
        phi = np.r_[np.full(u_count, phi_u), np.full(v_count, phi_v)]
        return cls(theta, phi, u_count)

    @classmethod
    def for_graph(cls, g: BipartiteGraph, **angles: float) -> "QubitParams":
        return cls.uniform(g.u_count, g.v_count, **angles)

    @property
    def n_qubits(self) -> int:
        return self.theta.size

    @property
    def v_count(self) -> int:
        return self.n_qubits - self.u_count

    def theta_U(self, k: int) -> float:
        return float(self.theta[self._u(k)])

    def phi_U(self, k: int) -> float:
        return float(self.phi[self._u(k)])

    def theta_V(self, k: int) -> float:
        return float(self.theta[self._v(k)])

    def phi_V(self, k: int) -> float:
        return float(self.phi[self._v(k)])

    def _u(self, k: int) -> int:
        if not 0 <= k < self.u_count:
            raise VertexOutOfRange(f"U-local index {k} out of range")
        return k

    def _v(self, k: int) -> int:
        if not 0 <= k < self.v_count:
            raise VertexOutOfRange(f"V-local index {k} out of range")
        return self.u_count + k

    def uniform_angles(self, atol: float = 1e-12) -> tuple[float, float, float, float]:
        """``(theta_u, phi_u, theta_v, phi_v)`` if each side is uniform."""
        for side in (slice(0, self.u_count), slice(self.u_count, None)):
            for arr in (self.theta, self.phi):
                vals = arr[side]
                if np.ptp(vals) > atol:
                    raise NonUniformParameters("per-side angles are not uniform")
        u, v = slice(0, self.u_count), slice(self.u_count, None)
        out = [self.theta[u][0], self.phi[u][0], self.theta[v][0], self.phi[v][0]]
        return tuple(float(a) for a in out)

    def with_angles(self, **changes: float) -> "QubitParams":
        """Copy with whole sides overwritten, e.g. ``with_angles(theta_v=pi/2)``."""
        theta, phi = self.theta.copy(), self.phi.copy()
        u, v = slice(0, self.u_count), slice(self.u_count, None)
        targets = {"theta_u": (theta, u), "phi_u": (phi, u), "theta_v": (theta, v), "phi_v": (phi, v)}
        for name, value in changes.items():
            arr, side = targets[name]
            arr[side] = value
        return QubitParams(theta, phi, self.u_count)


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise SizeMismatch(
                f"{self.amplitudes.size} amplitudes for {self.n_qubits} qubits"
            )

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


# --------------------------------------------------------------------------
# Kernels. They mutate ``amps`` in place.


def _check_qubit(n: int, q: int) -> None:
    if not 0 <= q < n:
        raise VertexOutOfRange(f"qubit {q} not in [0, {n})")


def apply_1q_inplace(amps: np.ndarray, n: int, q: int, mat: np.ndarray) -> None:
    view = amps.reshape(1 << (n - 1 - q), 2, 1 << q)
    a0, a1 = view[:, 0, :].copy(), view[:, 1, :].copy()
    view[:, 0, :] = mat[0, 0] * a0 + mat[0, 1] * a1
    view[:, 1, :] = mat[1, 0] * a0 + mat[1, 1] * a1


def apply_x_inplace(amps: np.ndarray, n: int, q: int) -> None:
    view = amps.reshape(1 << (n - 1 - q), 2, 1 << q)
    view[:, [0, 1], :] = view[:, [1, 0], :]


def apply_z_inplace(amps: np.ndarray, n: int, q: int) -> None:
    amps.reshape(1 << (n - 1 - q), 2, 1 << q)[:, 1, :] *= -1


def apply_pauli_inplace(amps: np.ndarray, n: int, q: int, label: str) -> None:
    if label == "X":
        apply_x_inplace(amps, n, q)
    elif label == "Z":
        apply_z_inplace(amps, n, q)
    elif label == "Y":
        # Y = i X Z
        apply_z_inplace(amps, n, q)
        apply_x_inplace(amps, n, q)
        amps *= 1j
    elif label != "I":
        raise ValueError(f"unknown Pauli {label!r}")


def apply_cnot_inplace(amps: np.ndarray, n: int, control: int, target: int) -> None:
    hi, lo = max(control, target), min(control, target)
    view = amps.reshape(1 << (n - 1 - hi), 2, 1 << (hi - lo - 1), 2, 1 << lo)
    if control == hi:
        sub = view[:, 1, :, :, :]
        sub[:, :, [0, 1], :] = sub[:, :, [1, 0], :]
    else:
        sub = view[:, :, :, 1, :]
        sub[:, [0, 1], :, :] = sub[:, [1, 0], :, :]


# --------------------------------------------------------------------------
# Public state operations


def prepare_initial(params: QubitParams) -> StateVector:
    """Product state with Bloch vectors ``(sin t cos p, sin t sin p, cos t)``."""
    n = params.n_qubits
    amps = np.ones(1, dtype=complex)
    # kron with the highest qubit leftmost keeps qubit k at bit k
    for k in range(n - 1, -1, -1):
        t, p = params.theta[k], params.phi[k]
        local = np.array([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)])
        amps = np.kron(amps, local)
    return StateVector(n, amps)


def apply_gate(state: StateVector, qubit: int, mat: np.ndarray) -> StateVector:
    _check_qubit(state.n_qubits, qubit)
    out = state.copy()
    apply_1q_inplace(out.amplitudes, out.n_qubits, qubit, np.asarray(mat, dtype=complex))
    return out


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    if control == target:
        raise SameQubit(f"CNOT control and target are both {control}")
    _check_qubit(state.n_qubits, control)
    _check_qubit(state.n_qubits, target)
    out = state.copy()
    apply_cnot_inplace(out.amplitudes, out.n_qubits, control, target)
    return out


def build_graph_state(g: BipartiteGraph, params: QubitParams) -> StateVector:
    """``prod_{(u, v) in E} CNOT_{u v}`` applied to the initial product state."""
    if params.n_qubits != g.n_qubits or params.u_count != g.u_count:
        raise SizeMismatch(
            f"params for |U|={params.u_count}, n={params.n_qubits}; "
            f"graph has |U|={g.u_count}, n={g.n_qubits}"
        )
    state = prepare_initial(params)
    for u, v in g.edges:
        apply_cnot_inplace(state.amplitudes, state.n_qubits, u, v)
    return state


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis; identity on unlisted qubits."""

    ops: Mapping[int, str]

    def __post_init__(self) -> None:
        ops = {int(q): str(p).upper() for q, p in dict(self.ops).items()}
        if not ops:
            raise ValueError("PauliString must act on at least one qubit")
        bad = {p for p in ops.values()} - {"X", "Y", "Z"}
        if bad:
            raise ValueError(f"unknown Pauli labels {sorted(bad)}")
        if min(ops) < 0:
            raise VertexOutOfRange(f"negative qubit index {min(ops)}")
        object.__setattr__(self, "ops", ops)

    @classmethod
    def uniform(cls, label: str, qubits: Iterable[int]) -> "PauliString":
        return cls({q: label for q in qubits})

    def masks(self) -> tuple[int, int, int]:
        """(x_mask, z_mask, number of Y factors)."""
        xm = zm = ny = 0
        for q, p in self.ops.items():
            if p in ("X", "Y"):
                xm |= 1 << q
            if p in ("Z", "Y"):
                zm |= 1 << q
            ny += p == "Y"
        return xm, zm, ny


def pauli_expectation(state: StateVector, p: PauliString) -> float:
    """Exact ``<psi|P|psi>`` via bit masks; raises if the result is not real."""
    for q in p.ops:
        _check_qubit(state.n_qubits, q)
    xm, zm, ny = p.masks()
    amps = state.amplitudes
    idx = np.arange(amps.size, dtype=np.int64)
    # P|i> = i^ny (-1)^{popcount(i & zm)} |i ^ xm>
    signs = 1 - 2 * (np.bitwise_count(idx & zm) & 1).astype(np.int8)
    value = (1j**ny) * np.sum(np.conj(amps[idx ^ xm]) * signs * amps)
    if abs(value.imag) > 1e-12:
        raise ArithmeticError(f"Pauli expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


# --------------------------------------------------------------------------
# Sampling


@dataclass(frozen=True)
class ShotRecord:
    shots: int
    seed: int
    counts: dict[str, int]
    n_qubits: int

    def __post_init__(self) -> None:
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to shots")


def rng_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """(fault stream, measurement stream) for one circuit run."""
    fault_seq, meas_seq = np.random.SeedSequence(int(seed) & (2**64 - 1)).spawn(2)
    return np.random.Generator(np.random.PCG64(fault_seq)), np.random.Generator(
        np.random.PCG64(meas_seq)
    )


def inverse_cdf(probs: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    return np.minimum(np.searchsorted(cdf, uniforms, side="right"), probs.size - 1)


def bitstring(index: int, n: int) -> str:
    return "".join("1" if (index >> k) & 1 else "0" for k in range(n))


def counts_from_indices(indices: np.ndarray, n: int) -> dict[str, int]:
    values, freq = np.unique(np.asarray(indices, dtype=np.int64), return_counts=True)
    return {bitstring(int(v), n): int(c) for v, c in zip(values, freq)}


def apply_rotations_inplace(amps: np.ndarray, n: int, rotations: Sequence[tuple[int, str]]) -> None:
    for q, axis in rotations:
        _check_qubit(n, q)
        if axis.upper() != "Z":
            apply_1q_inplace(amps, n, q, basis_rotation(axis))


def sample(
    state: StateVector,
    pre_rotations: Sequence[tuple[int, str]],
    shots: int,
    seed: int,
) -> ShotRecord:
    """Measure all qubits ``shots`` times after rotating the listed qubits.

    ``pre_rotations`` pairs a qubit with the axis (``"X"``, ``"Y"`` or ``"Z"``)
    it should be measured along.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    amps = state.amplitudes.copy()
    apply_rotations_inplace(amps, state.n_qubits, pre_rotations)
    _, meas = rng_streams(seed)
    indices = inverse_cdf(np.abs(amps) ** 2, meas.random(shots))
    return ShotRecord(shots, seed, counts_from_indices(indices, state.n_qubits), state.n_qubits)


def parity_estimate(record: ShotRecord, support: Iterable[int]) -> float:
    """Mean of ``(-1)^{parity of the outcome bits on support}``."""
    support = sorted(set(support))
    if not support:
        raise EmptySupport("parity support must be non-empty")
    total = 0
    for bits, count in record.counts.items():
        parity = sum(bits[k] == "1" for k in support) & 1
        total += -count if parity else count
    return total / record.shots


"""Bipartite graphs, their text format, and degree-parity bookkeeping.

Vertices carry global qubit indices: ``U`` occupies ``0 .. |U|-1`` and ``V``
occupies ``|U| .. |U|+|V|-1``. Every edge is stored as ``(u, v)`` with ``u``
in ``U`` and ``v`` in ``V``; the ``u`` endpoint is the CNOT control.

File format::

    U <n>
    V <m>
    <u> <v>
    ...

``#`` starts a comment, blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .errors import (
    DuplicateEdge,
    EdgeEndpointOutOfRange,
    EdgeNotBipartite,
    MalformedHeader,
    QubitLimitExceeded,
    VertexOutOfRange,
)

DEFAULT_QUBIT_LIMIT = 24

Edge = tuple[int, int]


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph ``G(U, V, E)`` with structural bipartiteness.

    Edge order is kept; it is the order in which CNOTs are applied.
    """

    u_count: int
    v_count: int
    edges: tuple[Edge, ...] = ()
    max_qubits: int = field(default=DEFAULT_QUBIT_LIMIT, compare=False, repr=False)

    def __post_init__(self) -> None:
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.u_count < 1 or self.v_count < 1:
            raise MalformedHeader(
                f"|U| and |V| must be positive, got U={self.u_count} V={self.v_count}"
            )
        if self.n_qubits > self.max_qubits:
            raise QubitLimitExceeded(
                f"{self.n_qubits} vertices exceed the qubit limit {self.max_qubits}"
            )
        seen: set[Edge] = set()
        for u, v in edges:
            for x in (u, v):
                if not 0 <= x < self.n_qubits:
                    raise EdgeEndpointOutOfRange(
                        f"edge ({u}, {v}): endpoint {x} not in [0, {self.n_qubits})"
                    )
            if u >= self.u_count:
                raise EdgeNotBipartite(f"edge ({u}, {v}): first endpoint {u} is not in U")
            if v < self.u_count:
                raise EdgeNotBipartite(f"edge ({u}, {v}): second endpoint {v} lies in U")
            if (u, v) in seen:
                raise DuplicateEdge(f"edge ({u}, {v}) listed more than once")
            seen.add((u, v))

    @property
    def n_qubits(self) -> int:
        return self.u_count + self.v_count

    @property
    def U(self) -> range:
        return range(self.u_count)

    @property
    def V(self) -> range:
        return range(self.u_count, self.n_qubits)

    def in_u(self, x: int) -> bool:
        self._check_vertex(x)
        return x < self.u_count

    def _check_vertex(self, x: int) -> None:
        if not 0 <= x < self.n_qubits:
            raise VertexOutOfRange(f"vertex {x} not in [0, {self.n_qubits})")

    @cached_property
    def _adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n_qubits)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def neighbors(self, x: int) -> frozenset[int]:
        self._check_vertex(x)
        return self._adjacency[x]

    def degree(self, x: int) -> int:
        return len(self.neighbors(x))


@dataclass(frozen=True)
class DegreeSummary:
    degree: dict[int, int]
    u_odd: frozenset[int]
    u_even: frozenset[int]
    v_odd: frozenset[int]
    v_even: frozenset[int]

    def cardinalities(self) -> dict[str, int]:
        return {
            "u_odd": len(self.u_odd),
            "u_even": len(self.u_even),
            "v_odd": len(self.v_odd),
            "v_even": len(self.v_even),
        }


def neighborhood(g: BipartiteGraph, x: int) -> frozenset[int]:
    """Vertices adjacent to ``x`` (always on the opposite side)."""
    return g.neighbors(x)


def parity_sets(g: BipartiteGraph) -> DegreeSummary:
    degree = {x: g.degree(x) for x in range(g.n_qubits)}

    def split(side: Iterable[int]) -> tuple[frozenset[int], frozenset[int]]:
        side = list(side)
        odd = frozenset(x for x in side if degree[x] % 2 == 1)
        return odd, frozenset(side) - odd

    u_odd, u_even = split(g.U)
    v_odd, v_even = split(g.V)
    return DegreeSummary(degree, u_odd, u_even, v_odd, v_even)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _header(line: str, key: str) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != key:
        raise MalformedHeader(f"expected '{key} <count>', got {line!r}")
    try:
        value = int(parts[1])
    except ValueError:
        raise MalformedHeader(f"non-integer count in {line!r}") from None
    if value < 1:
        raise MalformedHeader(f"{key} count must be positive, got {value}")
    return value


def parse_graph(text: str, max_qubits: int = DEFAULT_QUBIT_LIMIT) -> BipartiteGraph:
    """Parse the ``U n / V m / u v ...`` edge-list format.

    Raises
    ------
    MalformedHeader
        Missing or invalid ``U``/``V`` lines, or an unparseable edge line.
    EdgeEndpointOutOfRange, EdgeNotBipartite, DuplicateEdge
        Invalid edges.
    """
    lines = [s for s in (_strip(raw) for raw in text.splitlines()) if s]
    if len(lines) < 2:
        raise MalformedHeader("graph text needs 'U <n>' and 'V <m>' header lines")
    u_count = _header(lines[0], "U")
    v_count = _header(lines[1], "V")
    edges = []
    for line in lines[2:]:
        parts = line.split()
        if len(parts) != 2:
            raise MalformedHeader(f"edge line must hold two integers, got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise MalformedHeader(f"edge line must hold two integers, got {line!r}") from None
    return BipartiteGraph(u_count, v_count, tuple(edges), max_qubits=max_qubits)


def serialize_graph(g: BipartiteGraph) -> str:
    out = [f"U {g.u_count}", f"V {g.v_count}"]
    out += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(out) + "\n"


def load_graph(path: str | Path, max_qubits: int = DEFAULT_QUBIT_LIMIT) -> BipartiteGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"), max_qubits=max_qubits)


def star_graph(leaves: int = 3) -> BipartiteGraph:
    """Star ``K_{1,leaves}`` with the hub as qubit 0."""
    return BipartiteGraph(1, leaves, tuple((0, v) for v in range(1, leaves + 1)))

"""Finite simple connected graphs with stable vertex labels.

The vertex sequence given at construction defines a canonical total
order that is used everywhere a base vertex, representative, or
tie-break is needed, so all outputs are deterministic.  Graphs are
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    DisconnectedError,
    DuplicateEdgeError,
    DuplicateVertexError,
    LoopEdgeError,
    ParameterOutOfRangeError,
    UnknownEndpointError,
    UnknownVertexError,
)


class Graph:
    """Undirected simple connected graph over string vertex labels."""

    __slots__ = ("vertices", "edges", "_index", "_adj", "_adj_masks", "_edges_idx", "_edge_set", "_hash")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Iterable[str]]):
        verts = tuple(vertices)
        if not verts:
            raise ValueError("a graph needs at least one vertex")
        seen: set[str] = set()
        for v in verts:
            if v in seen:
                raise DuplicateVertexError(f"duplicate vertex {v!r}")
            seen.add(v)
        index = {v: i for i, v in enumerate(verts)}

        edge_idx: list[tuple[int, int]] = []
        edge_seen: set[tuple[int, int]] = set()
        for e in edges:
            pair = tuple(e)
            if len(pair) != 2:
                raise ValueError(f"edge {pair!r} must have exactly two endpoints")
            a, b = pair
            if a == b:
                raise LoopEdgeError(f"loop edge at vertex {a!r}")
            if a not in index:
                raise UnknownEndpointError(f"edge endpoint {a!r} is not a vertex")
            if b not in index:
                raise UnknownEndpointError(f"edge endpoint {b!r} is not a vertex")
            i, j = index[a], index[b]
            if i > j:
                i, j = j, i
            if (i, j) in edge_seen:
                raise DuplicateEdgeError(f"duplicate edge {{{a!r}, {b!r}}}")
            edge_seen.add((i, j))
            edge_idx.append((i, j))
        edge_idx.sort()

        adj: list[list[int]] = [[] for _ in verts]
        for i, j in edge_idx:
            adj[i].append(j)
            adj[j].append(i)

        unreachable = _unreachable_from(0, adj)
        if unreachable is not None:
            raise DisconnectedError(
                f"vertex {verts[unreachable]!r} is not reachable from {verts[0]!r}"
            )

        self.vertices = verts
        self.edges = tuple((verts[i], verts[j]) for i, j in edge_idx)
        self._index = index
        self._adj = tuple(tuple(sorted(nbrs)) for nbrs in adj)
        self._adj_masks = tuple(sum(1 << w for w in nbrs) for nbrs in self._adj)
        self._edges_idx = tuple(edge_idx)
        self._edge_set = frozenset(edge_idx)
        self._hash = hash((verts, self._edge_set))

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self._edge_set == other._edge_set

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def index_of(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {v!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self._index

    def has_edge(self, u: str, v: str) -> bool:
        i, j = self.index_of(u), self.index_of(v)
        if i > j:
            i, j = j, i
        return (i, j) in self._edge_set

    def neighbors(self, v: str) -> tuple[str, ...]:
        return tuple(self.vertices[w] for w in self._adj[self.index_of(v)])

    def degree(self, v: str) -> int:
        return len(self._adj[self.index_of(v)])

    def edges_at(self, v: str) -> tuple[tuple[str, str], ...]:
        """Edges incident to v, in the canonical edge order."""
        i = self.index_of(v)
        return tuple(
            (self.vertices[a], self.vertices[b])
            for a, b in self._edges_idx
            if a == i or b == i
        )

    def edge_key(self, u: str, v: str) -> tuple[str, str]:
        """Canonical (index-ordered) form of an existing edge."""
        i, j = self.index_of(u), self.index_of(v)
        if i > j:
            i, j = j, i
        if (i, j) not in self._edge_set:
            raise UnknownEndpointError(f"{{{u!r}, {v!r}}} is not an edge")
        return (self.vertices[i], self.vertices[j])

    def to_json(self) -> dict:
        edges = sorted(tuple(sorted(e)) for e in self.edges)
        return {"vertices": list(self.vertices), "edges": [list(e) for e in edges]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Graph":
        return cls(obj["vertices"], obj["edges"])


def _unreachable_from(start: int, adj: list[list[int]]) -> int | None:
    seen = [False] * len(adj)
    seen[start] = True
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    for v, ok in enumerate(seen):
        if not ok:
            return v
    return None


def build_graph(vertices: Iterable[str], edges: Iterable[Iterable[str]]) -> Graph:
    """Validate and build a graph; see Graph for the accepted input."""
    return Graph(vertices, edges)


def is_two_edge_connected(g: Graph) -> bool:
    """True iff g has no bridge.

    Connectivity is guaranteed by construction; a single-vertex graph is
    two-edge-connected vacuously.  Uses the usual DFS lowpoint scan, so
    the exhaustive remove-one-edge check stays available as an
    independent test oracle.
    """
    n = len(g)
    if n == 1:
        return True
    adj = g._adj
    disc = [0] * n  # 0 = unvisited
    low = [0] * n
    parent = [-1] * n
    timer = 1
    disc[0] = low[0] = timer
    stack = [(0, iter(adj[0]))]
    while stack:
        v, it = stack[-1]
        descended = False
        for w in it:
            if disc[w] == 0:
                timer += 1
                disc[w] = low[w] = timer
                parent[w] = v
                stack.append((w, iter(adj[w])))
                descended = True
                break
            if w != parent[v] and disc[w] < low[v]:
                # No parallel edges, so skipping the parent once is safe.
                low[v] = disc[w]
        if not descended:
            stack.pop()
            p = parent[v]
            if p != -1:
                if low[v] < low[p]:
                    low[p] = low[v]
                if low[v] > disc[p]:
                    return False
    return True


def genus(g: Graph) -> int:
    """Cycle rank 1 - |V| + |E| of a connected graph (always >= 0)."""
    return 1 - len(g.vertices) + len(g.edges)


_FAMILY_KINDS = ("complete", "wheel", "cycle", "house4")


@dataclass(frozen=True)
class GraphFamily:
    """A named graph family plus its size parameter (None for house4)."""

    kind: str
    n: int | None = None


def parse_family(text: str) -> GraphFamily:
    """Parse 'complete:5', 'wheel:6', 'cycle:4' or 'house4'."""
    kind, sep, param = text.partition(":")
    if kind not in _FAMILY_KINDS:
        raise ValueError(f"unknown graph family {kind!r} (expected one of {', '.join(_FAMILY_KINDS)})")
    if kind == "house4":
        if sep:
            raise ValueError("family 'house4' takes no parameter")
        return GraphFamily("house4")
    if not sep or not param:
        raise ValueError(f"family {kind!r} needs a size, e.g. {kind}:5")
    try:
        n = int(param)
    except ValueError:
        raise ValueError(f"family size {param!r} is not an integer") from None
    return GraphFamily(kind, n)


def _labels(n: int) -> list[str]:
    return [f"P{i}" for i in range(1, n + 1)]


def generate(family: GraphFamily | str) -> Graph:
    """Build a named family member.

    complete(n), n >= 3: all pairs adjacent.
    wheel(n), n >= 5: hub P1 joined to the rim cycle P2..Pn.
    cycle(n), n >= 3: the n-cycle.
    house4: four vertices, five edges (the 4-cycle plus the P1P3 chord).
    """
    if isinstance(family, str):
        family = parse_family(family)
    kind, n = family.kind, family.n
    if kind == "complete":
        if n is None or n < 3:
            raise ParameterOutOfRangeError(f"complete graph needs n >= 3, got {n}")
        labels = _labels(n)
        return Graph(labels, [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n)])
    if kind == "cycle":
        if n is None or n < 3:
            raise ParameterOutOfRangeError(f"cycle graph needs n >= 3, got {n}")
        labels = _labels(n)
        return Graph(labels, [(labels[i], labels[(i + 1) % n]) for i in range(n)])
    if kind == "wheel":
        if n is None or n < 5:
            raise ParameterOutOfRangeError(f"wheel graph needs n >= 5, got {n}")
        labels = _labels(n)
        hub = labels[0]
        rim = labels[1:]
        edges = [(hub, v) for v in rim]
        edges += [(rim[i], rim[(i + 1) % len(rim)]) for i in range(len(rim))]
        return Graph(labels, edges)
    if kind == "house4":
        return Graph(
            ["P1", "P2", "P3", "P4"],
            [("P1", "P2"), ("P2", "P3"), ("P3", "P4"), ("P4", "P1"), ("P1", "P3")],
        )
    raise ValueError(f"unknown graph family {kind!r}")

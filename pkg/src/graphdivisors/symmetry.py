"""Graph automorphisms, subgroups, quotients, and harmonic actions.

Permutations are stored as tuples of vertex indices; groups as frozen
sets of such tuples.  All search results are returned in a fixed sorted
order so repeated runs are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import Iterable, Mapping

from .divisors import Divisor
from .errors import (
    GraphMismatchError,
    InvalidMorphismError,
    SizeCapExceededError,
    UnknownEndpointError,
    UnknownVertexError,
)
from .graphs import Graph

DEFAULT_AUTOMORPHISM_VERTEX_CAP = 10
DEFAULT_HARMONIC_DEFINITION_CAP = 48


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """p after q: (p * q)(v) = p(q(v))."""
    return tuple(p[x] for x in q)


def _invert(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def _perm_order(p: tuple[int, ...]) -> int:
    seen = [False] * len(p)
    order = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        v = start
        while not seen[v]:
            seen[v] = True
            v = p[v]
            length += 1
        order = lcm(order, length)
    return order


class Automorphism:
    """Adjacency-preserving bijection on the vertices of one graph."""

    __slots__ = ("graph", "perm", "_hash")

    def __init__(self, graph: Graph, perm: tuple[int, ...], _checked: bool = False):
        if not _checked:
            n = len(graph.vertices)
            if len(perm) != n or sorted(perm) != list(range(n)):
                raise InvalidMorphismError(f"{perm!r} is not a permutation of {n} vertices")
            edge_set = graph._edge_set
            for i, j in graph._edges_idx:
                a, b = perm[i], perm[j]
                if a > b:
                    a, b = b, a
                if (a, b) not in edge_set:
                    raise InvalidMorphismError(
                        f"edge {{{graph.vertices[i]!r}, {graph.vertices[j]!r}}} maps to a non-edge"
                    )
        self.graph = graph
        self.perm = perm
        self._hash = hash((graph, perm))

    @classmethod
    def identity(cls, graph: Graph) -> "Automorphism":
        return cls(graph, tuple(range(len(graph.vertices))), _checked=True)

    @classmethod
    def from_mapping(cls, graph: Graph, mapping: Mapping[str, str]) -> "Automorphism":
        n = len(graph.vertices)
        perm = [-1] * n
        for src, dst in mapping.items():
            perm[graph.index_of(src)] = graph.index_of(dst)
        if -1 in perm:
            missing = graph.vertices[perm.index(-1)]
            raise InvalidMorphismError(f"mapping gives no image for vertex {missing!r}")
        return cls(graph, tuple(perm))

    def __call__(self, label: str) -> str:
        return self.graph.vertices[self.perm[self.graph.index_of(label)]]

    def __mul__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        if self.graph != other.graph:
            raise GraphMismatchError("automorphisms of different graphs cannot be composed")
        return Automorphism(self.graph, _compose(self.perm, other.perm), _checked=True)

    def inverse(self) -> "Automorphism":
        return Automorphism(self.graph, _invert(self.perm), _checked=True)

    @property
    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.perm))

    def order(self) -> int:
        return _perm_order(self.perm)

    def cycles(self) -> tuple[tuple[str, ...], ...]:
        """Nontrivial cycles, each starting at its smallest vertex index."""
        seen = [False] * len(self.perm)
        out = []
        for start in range(len(self.perm)):
            if seen[start] or self.perm[start] == start:
                seen[start] = True
                continue
            cyc = []
            v = start
            while not seen[v]:
                seen[v] = True
                cyc.append(self.graph.vertices[v])
                v = self.perm[v]
            out.append(tuple(cyc))
        return tuple(out)

    def cycle_notation(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "id"
        return "".join("(" + " ".join(c) + ")" for c in cycs)

    def mapping(self) -> dict[str, str]:
        return {v: self.graph.vertices[self.perm[i]] for i, v in enumerate(self.graph.vertices)}

    to_json = mapping

    @classmethod
    def from_json(cls, graph: Graph, obj: Mapping[str, str]) -> "Automorphism":
        return cls.from_mapping(graph, obj)

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.graph == other.graph and self.perm == other.perm

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Automorphism({self.cycle_notation()})"


def apply_to_divisor(sigma: Automorphism, d: Divisor) -> Divisor:
    """Transport coefficients along sigma: result(sigma(v)) = d(v)."""
    if sigma.graph != d.graph:
        raise GraphMismatchError("automorphism and divisor are bound to different graphs")
    out = [0] * len(d.coeffs)
    for i, c in enumerate(d.coeffs):
        out[sigma.perm[i]] = c
    return Divisor.from_coeffs(d.graph, out)


class Subgroup:
    """A finite set of automorphisms of one graph, closed under composition."""

    __slots__ = ("graph", "perms", "_hash")

    def __init__(self, graph: Graph, perms: frozenset[tuple[int, ...]], _checked: bool = False):
        if not _checked:
            identity = tuple(range(len(graph.vertices)))
            if identity not in perms:
                raise ValueError("a subgroup must contain the identity")
            for p in perms:
                Automorphism(graph, p)  # validates
            for p in perms:
                for q in perms:
                    if _compose(p, q) not in perms:
                        raise ValueError("element set is not closed under composition")
        self.graph = graph
        self.perms = perms
        self._hash = hash((graph, perms))

    @classmethod
    def trivial(cls, graph: Graph) -> "Subgroup":
        return cls(graph, frozenset({tuple(range(len(graph.vertices)))}), _checked=True)

    @classmethod
    def from_elements(cls, graph: Graph, elements: Iterable) -> "Subgroup":
        perms = frozenset(_as_perm(graph, e) for e in elements)
        return cls(graph, perms | {tuple(range(len(graph.vertices)))})

    @classmethod
    def from_generators(cls, graph: Graph, generators: Iterable) -> "Subgroup":
        gens = [_as_perm(graph, e) for e in generators]
        for p in gens:
            Automorphism(graph, p)  # validates
        closure = _closure(gens, len(graph.vertices))
        return cls(graph, closure, _checked=True)

    @property
    def order(self) -> int:
        return len(self.perms)

    @property
    def elements(self) -> tuple[Automorphism, ...]:
        return tuple(Automorphism(self.graph, p, _checked=True) for p in sorted(self.perms))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.perms)

    def __contains__(self, item) -> bool:
        if isinstance(item, Automorphism):
            return item.graph == self.graph and item.perm in self.perms
        if isinstance(item, tuple):
            return item in self.perms
        return False

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.graph == other.graph and self.perms == other.perms

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Subgroup(order {len(self.perms)})"

    def to_json(self) -> list[dict[str, str]]:
        return [a.mapping() for a in self.elements]

    @classmethod
    def from_json(cls, graph: Graph, obj: Iterable[Mapping[str, str]]) -> "Subgroup":
        return cls.from_elements(graph, obj)


def _as_perm(graph: Graph, e) -> tuple[int, ...]:
    if isinstance(e, Automorphism):
        if e.graph != graph:
            raise GraphMismatchError("automorphism is bound to a different graph")
        return e.perm
    if isinstance(e, tuple):
        return e
    if isinstance(e, Mapping):
        return Automorphism.from_mapping(graph, e).perm
    raise TypeError(f"cannot interpret {e!r} as an automorphism")


def _closure(gens: list[tuple[int, ...]], n: int, cap: int | None = None) -> frozenset | None:
    """Group generated by gens; None if the size passes cap."""
    identity = tuple(range(n))
    elems = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for a in frontier:
            for gpm in gens:
                b = _compose(a, gpm)
                if b not in elems:
                    if cap is not None and len(elems) >= cap:
                        return None
                    elems.add(b)
                    new.append(b)
        frontier = new
    return frozenset(elems)


@lru_cache(maxsize=4096)
def _automorphism_perms(g: Graph) -> tuple[tuple[int, ...], ...]:
    """Backtracking search over degree-respecting assignments."""
    n = len(g.vertices)
    masks = g._adj_masks
    degrees = [len(a) for a in g._adj]
    results: list[tuple[int, ...]] = []
    images = [-1] * n
    used = [False] * n

    def extend(i: int) -> None:
        if i == n:
            results.append(tuple(images))
            return
        for c in range(n):
            if used[c] or degrees[c] != degrees[i]:
                continue
            mi, mc = masks[i], masks[c]
            ok = True
            for j in range(i):
                if ((mi >> j) & 1) != ((mc >> images[j]) & 1):
                    ok = False
                    break
            if ok:
                images[i] = c
                used[c] = True
                extend(i + 1)
                used[c] = False
                images[i] = -1

    extend(0)
    return tuple(sorted(results))


def automorphism_group(g: Graph, cap: int = DEFAULT_AUTOMORPHISM_VERTEX_CAP) -> Subgroup:
    """The full automorphism group of g.

    Exhaustive by construction: a backtracking search over vertex
    assignments, pruned to same-degree images and adjacency-consistent
    partial maps (the pruning cannot drop a valid automorphism).
    """
    if len(g.vertices) > cap:
        raise SizeCapExceededError(
            f"automorphism search is capped at {cap} vertices, graph has {len(g.vertices)}"
        )
    return Subgroup(g, frozenset(_automorphism_perms(g)), _checked=True)


def orbit(h: Subgroup, v: str) -> frozenset[str]:
    i = h.graph.index_of(v)
    return frozenset(h.graph.vertices[p[i]] for p in h.perms)


def stabilizer(h: Subgroup, v: str) -> Subgroup:
    i = h.graph.index_of(v)
    return Subgroup(h.graph, frozenset(p for p in h.perms if p[i] == i), _checked=True)


def _vertex_orbit_count(h: Subgroup) -> int:
    n = len(h.graph.vertices)
    seen = [False] * n
    count = 0
    for v in range(n):
        if not seen[v]:
            count += 1
            for p in h.perms:
                seen[p[v]] = True
    return count


def _divisors_of(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _smallest_prime_factor(m: int) -> int:
    f = 2
    while f * f <= m:
        if m % f == 0:
            return f
        f += 1
    return m


@lru_cache(maxsize=4096)
def _subgroups_of_order(full: Subgroup, m: int) -> tuple[Subgroup, ...]:
    g = full.graph
    n = len(g.vertices)
    identity = tuple(range(n))
    if m == 1:
        return (Subgroup.trivial(g),)
    if len(full.perms) % m != 0:
        return ()

    found: set[frozenset] = set()
    p = _smallest_prime_factor(m)
    if m == p:
        # Prime order: all subgroups are cyclic.
        for x in full.perms:
            if _perm_order(x) == m:
                found.add(frozenset(_powers(x, identity)))
    elif m // p != p and _smallest_prime_factor(m // p) == m // p:
        # m = p*q with primes p < q: the q-part is normal, so every such
        # subgroup is generated by an order-q cycle and a normalizing
        # element of order p.
        q = m // p
        q_subs = _subgroups_of_order(full, q)
        xs = [x for x in full.perms if _perm_order(x) == p]
        for sub in q_subs:
            a = next(pp for pp in sub.perms if pp != identity)
            for x in xs:
                if _compose(_compose(x, a), _invert(x)) in sub.perms:
                    xps = _powers(x, identity)
                    elems = frozenset(_compose(b, xp) for b in sub.perms for xp in xps)
                    found.add(elems)
    else:
        # General case: grow subgroups one generator at a time.  Any
        # group of order m is the closure of a chain of subgroups whose
        # orders divide m, so a breadth-first sweep over (subgroup,
        # candidate element) pairs with closures aborted past m elements
        # is exhaustive.
        candidates = [x for x in full.perms if x != identity and m % _perm_order(x) == 0]
        seen: set[frozenset] = {frozenset({identity})}
        frontier = [frozenset({identity})]
        while frontier:
            new = []
            for k in frontier:
                base = list(k)
                for x in candidates:
                    if x in k:
                        continue
                    h = _closure(base + [x], n, cap=m)
                    if h is None or m % len(h) != 0 or h in seen:
                        continue
                    seen.add(h)
                    if len(h) < m:
                        new.append(h)
                    else:
                        found.add(h)
            frontier = new

    subs = [Subgroup(g, perms, _checked=True) for perms in found]
    subs.sort(key=lambda s: tuple(sorted(s.perms)))
    return tuple(subs)


def _powers(x: tuple[int, ...], identity: tuple[int, ...]) -> list[tuple[int, ...]]:
    out = [identity]
    cur = x
    while cur != identity:
        out.append(cur)
        cur = _compose(cur, x)
    return out


def subgroups_of_order(full: Subgroup, m: int) -> tuple[Subgroup, ...]:
    """All subgroups of `full` with exactly m elements, sorted.

    Returns () whenever m does not divide the group order.  The search
    is exhaustive for every m; see the inline notes for why each case
    cannot miss a subgroup.
    """
    if m < 1:
        raise ValueError(f"subgroup order must be positive, got {m}")
    return _subgroups_of_order(full, m)


def all_subgroups(full: Subgroup) -> tuple[Subgroup, ...]:
    """Every subgroup of `full`, ordered by size then elements."""
    out: list[Subgroup] = []
    for m in _divisors_of(len(full.perms)):
        out.extend(_subgroups_of_order(full, m))
    return tuple(out)


@dataclass(frozen=True)
class EdgeClass:
    """One edge orbit of a quotient; parallel classes are kept apart."""

    key: int
    endpoints: tuple[str, str]
    members: tuple[tuple[str, str], ...]


class QuotientGraph:
    """Quotient of a graph by a subgroup action.

    Vertices are the vertex orbits, labelled by their first-in-order
    member.  Edge orbits whose endpoints fall into one orbit are
    dropped; the remaining orbits become edge classes.  Two classes may
    join the same pair of orbit vertices, so the quotient is kept as a
    multigraph rather than coerced into a Graph.
    """

    __slots__ = ("source", "group", "vertices", "orbits", "edge_classes", "_orbit_label", "_classes_at")

    def __init__(self, source: Graph, group: Subgroup):
        if group.graph != source:
            raise GraphMismatchError("subgroup acts on a different graph")
        n = len(source.vertices)
        orbit_id = [-1] * n
        members_by_orbit: list[list[int]] = []
        for v in range(n):
            if orbit_id[v] == -1:
                members = sorted({p[v] for p in group.perms})
                for w in members:
                    orbit_id[w] = len(members_by_orbit)
                members_by_orbit.append(members)

        labels = tuple(source.vertices[members[0]] for members in members_by_orbit)
        self.source = source
        self.group = group
        self.vertices = labels
        self.orbits = {
            labels[k]: tuple(source.vertices[w] for w in members)
            for k, members in enumerate(members_by_orbit)
        }
        self._orbit_label = tuple(labels[orbit_id[v]] for v in range(n))

        seen: set[tuple[int, int]] = set()
        classes: list[EdgeClass] = []
        for a, b in source._edges_idx:
            if (a, b) in seen:
                continue
            members = sorted({(min(p[a], p[b]), max(p[a], p[b])) for p in group.perms})
            seen.update(members)
            if orbit_id[a] == orbit_id[b]:
                continue
            ka, kb = sorted((orbit_id[a], orbit_id[b]))
            classes.append(
                EdgeClass(
                    key=0,
                    endpoints=(labels[ka], labels[kb]),
                    members=tuple((source.vertices[i], source.vertices[j]) for i, j in members),
                )
            )
        classes.sort(key=lambda c: (c.endpoints, c.members))
        self.edge_classes = tuple(
            EdgeClass(key=k, endpoints=c.endpoints, members=c.members)
            for k, c in enumerate(classes)
        )
        at: dict[str, list[EdgeClass]] = {v: [] for v in labels}
        for c in self.edge_classes:
            at[c.endpoints[0]].append(c)
            at[c.endpoints[1]].append(c)
        self._classes_at = {v: tuple(cs) for v, cs in at.items()}

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def edges_at(self, label: str):
        try:
            return self._classes_at[label]
        except KeyError:
            raise UnknownVertexError(f"unknown quotient vertex {label!r}") from None

    def orbit_label(self, source_vertex: str) -> str:
        return self._orbit_label[self.source.index_of(source_vertex)]

    @property
    def projection(self) -> "GraphMorphism":
        vmap = {v: self._orbit_label[i] for i, v in enumerate(self.source.vertices)}
        by_member = {}
        for c in self.edge_classes:
            for e in c.members:
                by_member[e] = c
        emap = {}
        for e in self.source.edges:
            if e in by_member:
                emap[e] = by_member[e]
            else:
                emap[e] = vmap[e[0]]
        return GraphMorphism(self.source, self, vmap, emap)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "orbits": {v: list(members) for v, members in self.orbits.items()},
            "edge_classes": [
                {"endpoints": list(c.endpoints), "edges": [list(e) for e in c.members]}
                for c in self.edge_classes
            ],
        }

    def __repr__(self):
        return f"QuotientGraph({len(self.vertices)} vertices, {len(self.edge_classes)} edge classes)"


def quotient_graph(g: Graph, h: Subgroup) -> QuotientGraph:
    return QuotientGraph(g, h)


class GraphMorphism:
    """A map of graphs sending vertices to vertices and every edge either
    to an edge joining the endpoint images or, when both endpoints share
    an image, to that image vertex.

    The target may be a Graph or a QuotientGraph (whose edges are edge
    classes); both expose `vertices` and `edges_at`.
    """

    __slots__ = ("source", "target", "vertex_map", "edge_map")

    def __init__(self, source: Graph, target, vertex_map: Mapping[str, str], edge_map: Mapping):
        target_vertices = set(target.vertices)
        vmap = {}
        for v in source.vertices:
            if v not in vertex_map:
                raise InvalidMorphismError(f"no image for vertex {v!r}")
            img = vertex_map[v]
            if img not in target_vertices:
                raise InvalidMorphismError(f"vertex image {img!r} is not a target vertex")
            vmap[v] = img

        normalized = {}
        for key, value in edge_map.items():
            normalized[_source_edge_key(source, key)] = value
        emap = {}
        for e in source.edges:
            if e not in normalized:
                raise InvalidMorphismError(f"no image for edge {{{e[0]!r}, {e[1]!r}}}")
            img = normalized[e]
            u, v = vmap[e[0]], vmap[e[1]]
            if isinstance(img, str):
                if not (img == u == v):
                    raise InvalidMorphismError(
                        f"edge {{{e[0]!r}, {e[1]!r}}} collapses to {img!r} but its endpoints "
                        f"map to {u!r} and {v!r}"
                    )
            else:
                img = _target_edge(target, img)
                ends = set(_edge_endpoints(img))
                if ends != {u, v}:
                    raise InvalidMorphismError(
                        f"edge {{{e[0]!r}, {e[1]!r}}} maps to an edge with endpoints {sorted(ends)}, "
                        f"but its endpoints map to {u!r} and {v!r}"
                    )
            emap[e] = img
        self.source = source
        self.target = target
        self.vertex_map = vmap
        self.edge_map = emap

    @classmethod
    def identity(cls, g: Graph) -> "GraphMorphism":
        return cls(g, g, {v: v for v in g.vertices}, {e: e for e in g.edges})


def _source_edge_key(g: Graph, key) -> tuple[str, str]:
    pair = tuple(key)
    if len(pair) != 2:
        raise InvalidMorphismError(f"edge key {key!r} must have two endpoints")
    try:
        return g.edge_key(pair[0], pair[1])
    except (UnknownVertexError, UnknownEndpointError):
        raise InvalidMorphismError(f"{{{pair[0]!r}, {pair[1]!r}}} is not an edge of the graph") from None


def _target_edge(target, value):
    if isinstance(target, QuotientGraph):
        if isinstance(value, EdgeClass):
            if value in target.edge_classes:
                return value
            raise InvalidMorphismError(f"{value!r} is not an edge class of the target")
        if isinstance(value, int):
            try:
                return target.edge_classes[value]
            except IndexError:
                raise InvalidMorphismError(f"no edge class with key {value}") from None
        raise InvalidMorphismError(f"cannot interpret {value!r} as a target edge class")
    return _source_edge_key(target, value)


def _edge_endpoints(edge) -> tuple[str, str]:
    if isinstance(edge, EdgeClass):
        return edge.endpoints
    return edge


def is_harmonic_morphism(phi: GraphMorphism) -> bool:
    """True iff at every vertex the edge-preimage counts agree.

    For each source vertex v with image w, count the incident edges of v
    that map onto each target edge at w; the morphism is harmonic when,
    vertex by vertex, those counts do not depend on the chosen target
    edge.  Vertices whose image has at most one incident target edge
    impose no constraint.
    """
    for v in phi.source.vertices:
        w = phi.vertex_map[v]
        target_edges = phi.target.edges_at(w)
        if len(target_edges) < 2:
            continue
        incident = phi.source.edges_at(v)
        counts = []
        for te in target_edges:
            counts.append(sum(1 for e in incident if phi.edge_map[e] == te))
        if len(set(counts)) > 1:
            return False
    return True


def acts_harmonically(g: Graph, h: Subgroup, mode: str = "criterion",
                      cap: int = DEFAULT_HARMONIC_DEFINITION_CAP) -> bool:
    """Whether h acts harmonically on g.

    criterion mode: no non-identity element may fix both a vertex and
    one of its neighbours (i.e. vertex stabilizers act freely on the
    incident edges).  definition mode: the quotient projection of every
    subgroup of h, including h itself and the trivial one, must be a
    harmonic morphism.  The two modes agree; the acceptance suite checks
    this on every subgroup of every corpus graph.
    """
    if h.graph != g:
        raise GraphMismatchError("subgroup acts on a different graph")
    if mode == "criterion":
        identity = tuple(range(len(g.vertices)))
        adj = g._adj
        for p in h.perms:
            if p == identity:
                continue
            for v in range(len(p)):
                if p[v] == v and any(p[w] == w for w in adj[v]):
                    return False
        return True
    if mode == "definition":
        if len(h.perms) > cap:
            raise SizeCapExceededError(
                f"definition mode enumerates all subgroups; group order {len(h.perms)} "
                f"exceeds the cap {cap}"
            )
        for sub in all_subgroups(h):
            if not is_harmonic_morphism(QuotientGraph(g, sub).projection):
                return False
        return True
    raise ValueError(f"unknown mode {mode!r} (expected 'criterion' or 'definition')")

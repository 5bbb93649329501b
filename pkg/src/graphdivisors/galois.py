"""Galois-point decision procedure, certificates, and consistency checks.

A vertex p qualifies for a rank-2 divisor d when the two smoothness
conditions hold (rank drops to 1 after removing p and to 0 after
removing p and any second vertex) and some automorphism subgroup of
order deg(d) - 1 acts harmonically with a nontrivial quotient while
fixing two distinct members of the linear system of d - p.  Successful
verdicts carry the full witness; failures carry a structured reason
that reproduces in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .divisors import Divisor, canonical_divisor, linear_system, linearly_equivalent, rank
from .errors import (
    GraphMismatchError,
    NotTwoEdgeConnectedError,
    RankPreconditionError,
    UnknownVertexError,
)
from .graphs import Graph, genus, is_two_edge_connected
from .symmetry import (
    Subgroup,
    _vertex_orbit_count,
    acts_harmonically,
    apply_to_divisor,
    automorphism_group,
    subgroups_of_order,
)


@dataclass(frozen=True)
class RankNotTwo:
    rank: int

    tag = "RankNotTwo"

    def describe(self) -> str:
        return f"divisor has rank {self.rank}, not 2"


@dataclass(frozen=True)
class Cond1Fail:
    vertex: str
    rank: int

    tag = "Cond1Fail"

    def describe(self) -> str:
        return f"rank after removing {self.vertex} is {self.rank}, not 1"


@dataclass(frozen=True)
class Cond2Fail:
    vertex: str
    other: str
    rank: int

    tag = "Cond2Fail"

    def describe(self) -> str:
        return f"rank after removing {self.vertex} and {self.other} is {self.rank}, not 0"


@dataclass(frozen=True)
class NoQualifyingSubgroup:
    order: int
    subgroups_checked: int

    tag = "NoQualifyingSubgroup"

    def describe(self) -> str:
        return (
            f"none of the {self.subgroups_checked} subgroups of order {self.order} "
            "acts harmonically with a nontrivial quotient while fixing two members "
            "of the linear system"
        )


FailureReason = Union[RankNotTwo, Cond1Fail, Cond2Fail, NoQualifyingSubgroup]


def _reason_to_json(reason: FailureReason | None):
    if reason is None:
        return None
    out = {"tag": reason.tag}
    for field in reason.__dataclass_fields__:
        out[field] = getattr(reason, field)
    return out


def _reason_from_json(obj) -> FailureReason | None:
    if obj is None:
        return None
    tags = {c.tag: c for c in (RankNotTwo, Cond1Fail, Cond2Fail, NoQualifyingSubgroup)}
    cls = tags[obj["tag"]]
    kwargs = {k: v for k, v in obj.items() if k != "tag"}
    return cls(**kwargs)


@dataclass(frozen=True)
class SmoothnessCheck:
    ok: bool
    failure: Cond1Fail | Cond2Fail | None = None


@dataclass(frozen=True)
class GaloisCertificate:
    """Verdict for one vertex, with witnesses or a failure reason."""

    vertex: str
    verdict: bool
    subgroup: Subgroup | None = None
    e1: Divisor | None = None
    e2: Divisor | None = None
    quotient_vertex_count: int | None = None
    reason: FailureReason | None = None

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "verdict": self.verdict,
            "subgroup": self.subgroup.to_json() if self.subgroup is not None else None,
            "E1": self.e1.to_json() if self.e1 is not None else None,
            "E2": self.e2.to_json() if self.e2 is not None else None,
            "quotient_vertex_count": self.quotient_vertex_count,
            "reason": _reason_to_json(self.reason),
        }

    @classmethod
    def from_json(cls, graph: Graph, obj: Mapping) -> "GaloisCertificate":
        return cls(
            vertex=obj["vertex"],
            verdict=obj["verdict"],
            subgroup=Subgroup.from_json(graph, obj["subgroup"]) if obj.get("subgroup") else None,
            e1=Divisor.from_json(graph, obj["E1"]) if obj.get("E1") else None,
            e2=Divisor.from_json(graph, obj["E2"]) if obj.get("E2") else None,
            quotient_vertex_count=obj.get("quotient_vertex_count"),
            reason=_reason_from_json(obj.get("reason")),
        )


@dataclass(frozen=True)
class ClassificationReport:
    """Per-vertex certificates for one graph and divisor."""

    graph: Graph
    divisor: Divisor
    divisor_is_all_ones: bool
    rank: int
    certificates: tuple[GaloisCertificate, ...]
    galois_count: int
    corollary_consistent: bool

    @property
    def galois_vertices(self) -> tuple[str, ...]:
        return tuple(c.vertex for c in self.certificates if c.verdict)

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "divisor": self.divisor.to_json(),
            "divisor_is_all_ones": self.divisor_is_all_ones,
            "rank": self.rank,
            "galois_count": self.galois_count,
            "galois_vertices": list(self.galois_vertices),
            "corollary_consistent": self.corollary_consistent,
            "certificates": [c.to_json() for c in self.certificates],
        }


@dataclass(frozen=True)
class TheoremCheck:
    """Completeness vs. two-Galois-points equivalence for one graph."""

    is_complete: bool
    has_two_galois: bool
    equivalence_holds: bool
    all_vertices_galois: bool | None
    galois_count: int
    rank: int

    @property
    def consistent(self) -> bool:
        return self.equivalence_holds and self.all_vertices_galois is not False

    def to_json(self) -> dict:
        return {
            "is_complete": self.is_complete,
            "has_two_galois": self.has_two_galois,
            "equivalence_holds": self.equivalence_holds,
            "all_vertices_galois": self.all_vertices_galois,
            "galois_count": self.galois_count,
            "rank": self.rank,
        }


@dataclass(frozen=True)
class RiemannRochCheck:
    holds: bool
    rank: int
    canonical_rank: int
    lhs: int
    rhs: int
    degree: int
    genus: int

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "rank": self.rank,
            "canonical_rank": self.canonical_rank,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "degree": self.degree,
            "genus": self.genus,
        }


def _require_two_edge_connected(g: Graph) -> None:
    if not is_two_edge_connected(g):
        raise NotTwoEdgeConnectedError("graph has a bridge; a 2-edge-connected graph is required")


def _require_rank_two(g: Graph, d: Divisor, cap: int | None) -> None:
    r = rank(g, d, cap)
    if r != 2:
        raise RankPreconditionError(f"divisor has rank {r}, but rank 2 is required", rank=r)


def check_smoothness(g: Graph, d: Divisor, p: str, cap: int | None = None) -> SmoothnessCheck:
    """Conditions for p to behave like a smooth plane-curve point:
    rank(d - p) = 1 and rank(d - p - q) = 0 for every q, including q = p.

    Requires rank(d) = 2; returns the first violation found, scanning q
    in vertex order.
    """
    g.index_of(p)
    _require_rank_two(g, d, cap)
    return _smoothness_unchecked(g, d, p, cap)


def _smoothness_unchecked(g: Graph, d: Divisor, p: str, cap: int | None) -> SmoothnessCheck:
    dp = d - Divisor.vertex(g, p)
    r1 = rank(g, dp, cap)
    if r1 != 1:
        return SmoothnessCheck(False, Cond1Fail(p, r1))
    for q in g.vertices:
        r0 = rank(g, dp - Divisor.vertex(g, q), cap)
        if r0 != 0:
            return SmoothnessCheck(False, Cond2Fail(p, q, r0))
    return SmoothnessCheck(True)


def fixed_members(h: Subgroup, divisors: Iterable[Divisor]) -> frozenset[Divisor]:
    """The members fixed by every element of h."""
    out = []
    for d in divisors:
        if d.graph != h.graph:
            raise GraphMismatchError("divisor is bound to a different graph than the subgroup")
        if all(_transported(p, d.coeffs) == d.coeffs for p in h.perms):
            out.append(d)
    return frozenset(out)


def _transported(perm: tuple[int, ...], coeffs: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(coeffs)
    for i, c in enumerate(coeffs):
        out[perm[i]] = c
    return tuple(out)


def _vertex_orbits(h: Subgroup) -> list[list[int]]:
    n = len(h.graph.vertices)
    seen = [False] * n
    orbits = []
    for v in range(n):
        if not seen[v]:
            members = sorted({p[v] for p in h.perms})
            for w in members:
                seen[w] = True
            orbits.append(members)
    return orbits


def _invariant_effective_coeffs(orbits: list[list[int]], n: int, deg: int):
    """Effective orbit-constant coefficient tuples of the given degree."""
    sizes = [len(o) for o in orbits]

    def assign(i: int, remaining: int, acc: list[int]):
        if i == len(orbits):
            if remaining == 0:
                coeffs = [0] * n
                for orb, value in zip(orbits, acc):
                    for v in orb:
                        coeffs[v] = value
                yield tuple(coeffs)
            return
        for value in range(remaining // sizes[i], -1, -1):
            yield from assign(i + 1, remaining - value * sizes[i], acc + [value])

    yield from assign(0, deg, [])


def _find_witness(g: Graph, d: Divisor, p: str, cap: int | None):
    """Search all subgroups of order deg(d) - 1 for a qualifying witness.

    Returns (certificate-or-None, subgroups_checked).  Candidates that
    keep p fixed are tried first; the order is deterministic either way.
    Fixed members of the linear system are found by intersecting the
    orbit-constant effective divisors with the system, which agrees with
    filtering the system elementwise.
    """
    m = d.degree - 1
    full = automorphism_group(g)
    subs = subgroups_of_order(full, m)
    pi = g.index_of(p)
    ordered = sorted(subs, key=lambda h: (any(q[pi] != pi for q in h.perms), tuple(sorted(h.perms))))
    ls = linear_system(g, d - Divisor.vertex(g, p), cap)
    ls_coeffs = {e.coeffs for e in ls}
    n = len(g.vertices)
    for h in ordered:
        if _vertex_orbit_count(h) <= 1:
            continue
        if not acts_harmonically(g, h, "criterion"):
            continue
        orbits = _vertex_orbits(h)
        fixed = sorted(t for t in _invariant_effective_coeffs(orbits, n, m) if t in ls_coeffs)
        if len(fixed) >= 2:
            cert = GaloisCertificate(
                vertex=p,
                verdict=True,
                subgroup=h,
                e1=Divisor.from_coeffs(g, fixed[0]),
                e2=Divisor.from_coeffs(g, fixed[1]),
                quotient_vertex_count=_vertex_orbit_count(h),
                reason=None,
            )
            return cert, len(subs)
    return None, len(subs)


def is_galois_point(g: Graph, d: Divisor, p: str, cap: int | None = None) -> GaloisCertificate:
    """Decide whether p is a Galois point for the rank-2 divisor d.

    The subgroup search ranges over all subgroups of the full
    automorphism group of order deg(d) - 1; the first qualifying one is
    returned as the witness, and exhaustion of the list yields a
    NoQualifyingSubgroup verdict.
    """
    g.index_of(p)
    _require_two_edge_connected(g)
    _require_rank_two(g, d, cap)
    sm = _smoothness_unchecked(g, d, p, cap)
    if not sm.ok:
        return GaloisCertificate(vertex=p, verdict=False, reason=sm.failure)
    cert, checked = _find_witness(g, d, p, cap)
    if cert is None:
        return GaloisCertificate(
            vertex=p, verdict=False, reason=NoQualifyingSubgroup(d.degree - 1, checked)
        )
    return cert


@lru_cache(maxsize=512)
def classify_galois_points(g: Graph, d: Divisor, cap: int | None = None) -> ClassificationReport:
    """Run the Galois decision at every vertex.

    When rank(d) differs from 2 no vertex can qualify, so every
    certificate carries RankNotTwo instead of raising.  The count
    constraint (0, 1, or all vertices) only applies to the all-ones
    divisor at rank 2; otherwise the report is vacuously consistent.
    """
    if d.graph != g:
        raise GraphMismatchError("divisor is bound to a different graph")
    _require_two_edge_connected(g)
    all_ones = d == Divisor.all_ones(g)
    r = rank(g, d, cap)
    if r != 2:
        certs = tuple(
            GaloisCertificate(vertex=v, verdict=False, reason=RankNotTwo(r)) for v in g.vertices
        )
    else:
        certs = tuple(is_galois_point(g, d, p, cap) for p in g.vertices)
    count = sum(1 for c in certs if c.verdict)
    n = len(g.vertices)
    consistent = count in (0, 1, n) if (r == 2 and all_ones) else True
    return ClassificationReport(
        graph=g,
        divisor=d,
        divisor_is_all_ones=all_ones,
        rank=r,
        certificates=certs,
        galois_count=count,
        corollary_consistent=consistent,
    )


def verify_theorem(g: Graph, cap: int | None = None) -> TheoremCheck:
    """Check that completeness is equivalent to having two Galois points.

    Uses the all-ones divisor.  For complete graphs the stronger
    statement is also recorded: every vertex must be a Galois point.
    """
    _require_two_edge_connected(g)
    report = classify_galois_points(g, Divisor.all_ones(g), cap)
    return _theorem_from_report(g, report)


def _theorem_from_report(g: Graph, report: ClassificationReport) -> TheoremCheck:
    n = len(g.vertices)
    is_complete = len(g.edges) == n * (n - 1) // 2
    has_two = report.rank == 2 and report.galois_count >= 2
    all_galois = (report.galois_count == n) if is_complete else None
    return TheoremCheck(
        is_complete=is_complete,
        has_two_galois=has_two,
        equivalence_holds=is_complete == has_two,
        all_vertices_galois=all_galois,
        galois_count=report.galois_count,
        rank=report.rank,
    )


def riemann_roch_check(g: Graph, d: Divisor, cap: int | None = None) -> RiemannRochCheck:
    """Evaluate rank(d) - rank(K - d) against deg(d) + 1 - genus."""
    if d.graph != g:
        raise GraphMismatchError("divisor is bound to a different graph")
    k = canonical_divisor(g)
    r_d = rank(g, d, cap)
    r_kd = rank(g, k - d, cap)
    lhs = r_d - r_kd
    rhs = d.degree + 1 - genus(g)
    return RiemannRochCheck(
        holds=lhs == rhs,
        rank=r_d,
        canonical_rank=r_kd,
        lhs=lhs,
        rhs=rhs,
        degree=d.degree,
        genus=genus(g),
    )


def audit_certificate(g: Graph, d: Divisor, cert: GaloisCertificate,
                      cap: int | None = None) -> list[str]:
    """Re-verify a certificate without trusting the search that built it.

    Returns a list of problems; an empty list means the certificate is
    sound.  Positive verdicts get every witness condition rechecked
    (group axioms, order, harmonicity, quotient size, fixedness, and
    membership of both divisors in the linear system via independent
    equivalence checks).  Negative verdicts must reproduce their stated
    failure.
    """
    problems: list[str] = []
    try:
        g.index_of(cert.vertex)
    except UnknownVertexError:
        return [f"certificate names unknown vertex {cert.vertex!r}"]

    if cert.verdict:
        h = cert.subgroup
        if h is None or cert.e1 is None or cert.e2 is None or cert.quotient_vertex_count is None:
            return ["positive certificate is missing witnesses"]
        try:
            Subgroup(g, h.perms)  # revalidates automorphisms, identity, closure
        except Exception as exc:
            problems.append(f"witness subgroup is invalid: {exc}")
        if len(h.perms) != d.degree - 1:
            problems.append(f"witness subgroup has order {len(h.perms)}, expected {d.degree - 1}")
        if _vertex_orbit_count(h) != cert.quotient_vertex_count:
            problems.append("recorded quotient vertex count does not match the orbit count")
        if _vertex_orbit_count(h) <= 1:
            problems.append("quotient has a single vertex")
        if not acts_harmonically(g, h, "criterion"):
            problems.append("witness subgroup does not act harmonically")
        if cert.e1 == cert.e2:
            problems.append("fixed divisors are not distinct")
        dp = d - Divisor.vertex(g, cert.vertex)
        for name, e in (("E1", cert.e1), ("E2", cert.e2)):
            if not e.is_effective:
                problems.append(f"{name} is not effective")
            if not linearly_equivalent(g, e, dp):
                problems.append(f"{name} is not equivalent to the divisor minus the vertex")
            for a in h.elements:
                if apply_to_divisor(a, e) != e:
                    problems.append(f"{name} is moved by {a!r}")
                    break
        if d == Divisor.all_ones(g):
            # With the all-ones divisor the witness group must fix the
            # vertex and the punctured divisor elementwise.
            for a in h.elements:
                if a(cert.vertex) != cert.vertex:
                    problems.append(f"{a!r} moves the certified vertex")
                    break
            for a in h.elements:
                if apply_to_divisor(a, dp) != dp:
                    problems.append(f"{a!r} moves the punctured divisor")
                    break
        return problems

    reason = cert.reason
    if reason is None:
        return ["negative certificate carries no reason"]
    if isinstance(reason, RankNotTwo):
        r = rank(g, d, cap)
        if r == 2 or r != reason.rank:
            problems.append(f"recorded rank {reason.rank} does not reproduce (got {r})")
    elif isinstance(reason, Cond1Fail):
        r = rank(g, d - Divisor.vertex(g, reason.vertex), cap)
        if r == 1 or r != reason.rank:
            problems.append(f"recorded rank {reason.rank} does not reproduce (got {r})")
    elif isinstance(reason, Cond2Fail):
        probe = d - Divisor.vertex(g, reason.vertex) - Divisor.vertex(g, reason.other)
        r = rank(g, probe, cap)
        if r == 0 or r != reason.rank:
            problems.append(f"recorded rank {reason.rank} does not reproduce (got {r})")
    elif isinstance(reason, NoQualifyingSubgroup):
        cert2, checked = _find_witness(g, d, cert.vertex, cap)
        if cert2 is not None:
            problems.append("a qualifying subgroup exists after all")
        if checked != reason.subgroups_checked:
            problems.append(
                f"recorded {reason.subgroups_checked} candidate subgroups, search found {checked}"
            )
    return problems

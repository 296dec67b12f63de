"""Labelled graphs, orientations, edge masks and inversion plans.

Everything here is an immutable value.  A graph fixes a canonical edge
indexing (lexicographic on the sorted endpoint pair) and every bit vector
over edges -- orientations, reversal masks, disagreement sets -- is stored
as a plain Python int with bit ``i`` referring to edge ``i``.  Bit ``i`` of
an orientation is 1 when the arc runs from the smaller to the larger
endpoint label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

__all__ = [
    "LabelledGraph",
    "Orientation",
    "EdgeMask",
    "InversionPlan",
    "PlanCheck",
    "HostMismatchError",
    "build_graph",
    "inversion_mask",
    "apply_plan",
    "disagreement",
    "verify_plan",
]


class HostMismatchError(ValueError):
    """Two values that must share a host graph do not."""


@dataclass(frozen=True)
class LabelledGraph:
    """Simple graph on vertices ``0..n-1`` with canonically indexed edges.

    ``edges`` is sorted lexicographically with ``u < v`` in every pair; the
    index of an edge is its position in that tuple.  ``name`` is an optional
    family tag (e.g. set by the generators) and takes no part in equality.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    name: str = field(default="", compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def adj(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """For each vertex, the sorted tuple of ``(neighbour, edge index)``."""
        lists: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            lists[u].append((v, i))
            lists[v].append((u, i))
        return tuple(tuple(sorted(l)) for l in lists)

    @cached_property
    def nbrs(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(w for w, _ in a) for a in self.adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edge_index

    def edge_bit(self, u: int, v: int) -> int:
        """``1 << index`` of edge ``uv``, or 0 when absent."""
        if u > v:
            u, v = v, u
        i = self.edge_index.get((u, v))
        return 0 if i is None else 1 << i

    def induced_edge_bits(self, vertices: Iterable[int]) -> int:
        """Bit mask of all edges with both endpoints in ``vertices``."""
        vs = set(vertices)
        bits = 0
        for v in vs:
            for w, i in self.adj[v]:
                if w > v and w in vs:
                    bits |= 1 << i
        return bits

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def components(self) -> list[frozenset[int]]:
        """Connected components as vertex sets, sorted by smallest member."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            stack, comp = [s], {s}
            seen[s] = True
            while stack:
                v = stack.pop()
                for w, _ in self.adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        comp.add(w)
                        stack.append(w)
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def is_forest(self) -> bool:
        return self.m == self.n - len(self.components())

    def is_tree(self) -> bool:
        return self.is_connected() and self.m == self.n - 1

    def without_edges(self, edge_indices: Iterable[int]) -> "LabelledGraph":
        drop = set(edge_indices)
        kept = tuple(e for i, e in enumerate(self.edges) if i not in drop)
        return LabelledGraph(self.n, kept, name=self.name)

    def triangles(self) -> list[tuple[int, int, int]]:
        """All triangles ``(a, b, c)`` with ``a < b < c``, lexicographic."""
        out = []
        for a, b in self.edges:
            for c in sorted(self.nbrs[a] & self.nbrs[b]):
                if c > b:
                    out.append((a, b, c))
        return out

    def mask_to_string(self, bits: int) -> str:
        return "".join("1" if bits >> i & 1 else "0" for i in range(self.m))

    def __repr__(self) -> str:  # keep reprs short; edge lists can be long
        tag = f" {self.name!r}" if self.name else ""
        return f"LabelledGraph(n={self.n}, m={self.m}{tag})"


def build_graph(n: int, edge_list: Iterable[tuple[int, int]], name: str = "") -> LabelledGraph:
    """Validate an edge list and build the canonical graph.

    Rejects out-of-range labels, self-loops and duplicate edges.
    """
    if n < 0:
        raise ValueError(f"vertex count must be nonnegative, got {n}")
    norm = []
    for u, v in edge_list:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        norm.append((u, v) if u < v else (v, u))
    norm.sort()
    for a, b in zip(norm, norm[1:]):
        if a == b:
            raise ValueError(f"duplicate edge {a}")
    return LabelledGraph(n, tuple(norm), name=name)


@dataclass(frozen=True)
class EdgeMask:
    """A set of edges of a host graph, packed as a bit vector."""

    graph: LabelledGraph
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= self.graph.full_mask:
            raise ValueError("mask bits exceed host edge count")

    def popcount(self) -> int:
        return self.bits.bit_count()

    def edge_indices(self) -> list[int]:
        return [i for i in range(self.graph.m) if self.bits >> i & 1]

    def edges(self) -> list[tuple[int, int]]:
        return [self.graph.edges[i] for i in self.edge_indices()]

    def __xor__(self, other: "EdgeMask") -> "EdgeMask":
        _check_host(self.graph, other.graph)
        return EdgeMask(self.graph, self.bits ^ other.bits)

    def to01(self) -> str:
        return self.graph.mask_to_string(self.bits)


@dataclass(frozen=True)
class Orientation:
    """One labelled orientation of a host graph (bit i: arc low -> high)."""

    graph: LabelledGraph
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= self.graph.full_mask:
            raise ValueError("orientation bits exceed host edge count")

    def complement(self) -> "Orientation":
        """The converse orientation: every arc reversed."""
        return Orientation(self.graph, self.bits ^ self.graph.full_mask)

    def xor_bits(self, bits: int) -> "Orientation":
        return Orientation(self.graph, self.bits ^ bits)

    def arc(self, i: int) -> tuple[int, int]:
        u, v = self.graph.edges[i]
        return (u, v) if self.bits >> i & 1 else (v, u)

    def to01(self) -> str:
        return self.graph.mask_to_string(self.bits)


# An inversion set is just a vertex set; plans hold frozensets.
InversionSet = frozenset


@dataclass(frozen=True)
class InversionPlan:
    """An ordered sequence of vertex sets, each meant to hold at most p."""

    steps: tuple[frozenset[int], ...]
    p: int
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.steps)


def _check_host(a: LabelledGraph, b: LabelledGraph) -> None:
    if a != b:
        raise HostMismatchError("values belong to different host graphs")


def inversion_mask(g: LabelledGraph, x: Iterable[int]) -> EdgeMask:
    """Edges reversed by inverting the vertex set ``x``."""
    xs = set(x)
    for v in xs:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    return EdgeMask(g, g.induced_edge_bits(xs))


def plan_mask_bits(g: LabelledGraph, plan: InversionPlan) -> int:
    """Net reversal mask of a plan: XOR of its steps' masks."""
    bits = 0
    for x in plan.steps:
        bits ^= g.induced_edge_bits(x)
    return bits


def apply_plan(o: Orientation, plan: InversionPlan) -> Orientation:
    """Apply the steps of ``plan`` to ``o`` (net effect: XOR of step masks)."""
    for x in plan.steps:
        for v in x:
            if not 0 <= v < o.graph.n:
                raise ValueError(f"vertex {v} out of range for host graph")
    return o.xor_bits(plan_mask_bits(o.graph, plan))


def disagreement(o1: Orientation, o2: Orientation) -> EdgeMask:
    """Edges on which the two orientations differ."""
    _check_host(o1.graph, o2.graph)
    return EdgeMask(o1.graph, o1.bits ^ o2.bits)


@dataclass(frozen=True)
class PlanCheck:
    valid: bool
    length: int
    violations: tuple[str, ...]


def verify_plan(
    g: LabelledGraph,
    o1: Orientation,
    o2: Orientation,
    plan: InversionPlan,
    p: int | None = None,
) -> PlanCheck:
    """Diagnostic check: every step within the size cap, net effect o1 -> o2.

    Never raises on a bad plan; problems come back in ``violations``.
    """
    cap = plan.p if p is None else p
    violations: list[str] = []
    if o1.graph != g or o2.graph != g:
        violations.append("orientations do not belong to the given graph")
        return PlanCheck(False, len(plan.steps), tuple(violations))
    bits = 0
    for k, x in enumerate(plan.steps):
        if len(x) > cap:
            violations.append(f"step {k} has size {len(x)} > p={cap}")
        bad = [v for v in x if not 0 <= v < g.n]
        if bad:
            violations.append(f"step {k} contains out-of-range vertices {sorted(bad)}")
            continue
        bits ^= g.induced_edge_bits(x)
    if o1.bits ^ bits != o2.bits:
        residue = g.mask_to_string(o1.bits ^ bits ^ o2.bits)
        violations.append(f"net effect misses target; residual disagreement {residue}")
    return PlanCheck(not violations, len(plan.steps), tuple(violations))

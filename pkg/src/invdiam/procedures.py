"""Constructive planners: every guaranteed upper bound as a plan emitter.

Every planner returns a PlannerReport whose plan is validated before return
and whose length never exceeds the reported guarantee.  Steps are generated
against the *current* orientation, applied, and only then is the remainder
re-planned; the subgraph/induced-subgraph compositions need exactly that
order to be sound.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .core import (
    InversionPlan,
    LabelledGraph,
    Orientation,
    verify_plan,
)
from .decompositions import (
    _adj_sets,
    _bfs,
    _extract,
    _find_good5,
    _tree4_parts,
    find_induced_matching,
    kotzig_p3,
    min_triangle_transversal,
    strong_edge_colouring,
)
from . import oracle as _oracle

__all__ = [
    "PlannerReport",
    "PlanningError",
    "compose_subgraph_then_induced",
    "plan_uppergen",
    "plan_connected3",
    "plan_degenerate",
    "plan_procedure1",
    "conv_plan_tree",
    "lift_conv_to_id",
    "plan_planar_small",
    "plan_planar_general",
    "best_plan",
    "conv_tree_bound",
    "is_planar",
]


class PlanningError(RuntimeError):
    """A planner produced an inconsistent plan; indicates a bug, not bad input."""


@dataclass(frozen=True)
class PlannerReport:
    plan: InversionPlan
    bound: int | Fraction
    route: str
    candidates: dict[str, int] | None = None

    def __len__(self) -> int:
        return len(self.plan.steps)


class _PlanBuilder:
    def __init__(self, g: LabelledGraph, o1: Orientation, o2: Orientation, p: int):
        if o1.graph != g or o2.graph != g:
            raise ValueError("orientations do not belong to the given graph")
        self.g = g
        self.p = p
        self.cur = o1.bits
        self.target = o2.bits
        self.o1 = o1
        self.o2 = o2
        self.steps: list[frozenset[int]] = []

    def diff(self) -> int:
        return self.cur ^ self.target

    def disagrees(self, u: int, v: int) -> bool:
        return bool(self.diff() & self.g.edge_bit(u, v))

    def disagrees_idx(self, i: int) -> bool:
        return bool(self.diff() >> i & 1)

    def emit(self, vertices: Iterable[int]) -> bool:
        x = frozenset(vertices)
        if len(x) < 2:
            return False
        if len(x) > self.p:
            raise PlanningError(f"step of size {len(x)} exceeds p={self.p}")
        mask = self.g.induced_edge_bits(x)
        if mask == 0:
            return False
        self.steps.append(x)
        self.cur ^= mask
        return True

    def finish(self, bound: int | Fraction, route: str, provenance: str) -> PlannerReport:
        if self.cur != self.target:
            raise PlanningError(f"{provenance}: plan leaves residual disagreement")
        plan = InversionPlan(tuple(self.steps), self.p, provenance)
        chk = verify_plan(self.g, self.o1, self.o2, plan)
        if not chk.valid:
            raise PlanningError(f"{provenance}: {chk.violations}")
        if len(plan.steps) > bound:
            raise PlanningError(
                f"{provenance}: length {len(plan.steps)} exceeds bound {bound}"
            )
        return PlannerReport(plan, bound, route)


class _Residual:
    """Live view of the host graph as planners delete vertices and edges."""

    def __init__(self, g: LabelledGraph):
        self.g = g
        self.alive = g.full_mask
        self.dead_vertices: set[int] = set()

    def degree(self, v: int) -> int:
        return sum(1 for _, i in self.g.adj[v] if self.alive >> i & 1)

    def nbrs(self, v: int) -> list[int]:
        return sorted(w for w, i in self.g.adj[v] if self.alive >> i & 1)

    def max_degree_vertex(self, at_least: int) -> int | None:
        best, best_d = None, at_least - 1
        for v in range(self.g.n):
            if v in self.dead_vertices:
                continue
            d = self.degree(v)
            if d > best_d:
                best, best_d = v, d
        return best

    def remove_vertex(self, v: int) -> None:
        for _, i in self.g.adj[v]:
            self.alive &= ~(1 << i)
        self.dead_vertices.add(v)

    def remove_edge_pairs(self, pairs: Iterable[tuple[int, int]]) -> None:
        for u, v in pairs:
            self.alive &= ~self.g.edge_bit(u, v)

    def subgraph(self) -> LabelledGraph:
        kept = tuple(e for i, e in enumerate(self.g.edges) if self.alive >> i & 1)
        return LabelledGraph(self.g.n, kept)

    @property
    def m(self) -> int:
        return self.alive.bit_count()


def _ceil_frac(num: int, den: int) -> int:
    return -(-num // den)


def conv_tree_bound(n: int, p: int) -> int:
    """ceil((n-1) / (p - c*sqrt(p))) with c = sqrt(2 + sqrt(2)), exactly.

    The ratio is irrational for n >= 2, so 50 digits of headroom decide the
    ceiling safely.
    """
    if n <= 1:
        return 0
    with localcontext() as ctx:
        ctx.prec = 50
        c2 = Decimal(2) + Decimal(2).sqrt()
        denom = Decimal(p) - (c2 * Decimal(p)).sqrt()
        val = Decimal(n - 1) / denom
        floor = int(val)
        return floor if Decimal(floor) == val else floor + 1


def is_planar(g: LabelledGraph) -> bool:
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    ok, _ = nx.check_planarity(G)
    return ok


# ---------------------------------------------------------------------------
# composition of a subgraph plan with an induced-remainder planner


def compose_subgraph_then_induced(
    g: LabelledGraph,
    o1: Orientation,
    o2: Orientation,
    plan_h: InversionPlan,
    i_vertices: frozenset[int] | set[int],
    planner_i: Callable[[LabelledGraph, Orientation, Orientation], InversionPlan],
) -> InversionPlan:
    """Apply the subgraph plan first, then plan the induced remainder on the
    intermediate orientation.  The remainder plan must stay inside
    ``i_vertices``; the concatenation is checked to reach ``o2``."""
    mid = o1
    for x in plan_h.steps:
        mid = mid.xor_bits(g.induced_edge_bits(x))
    plan_i = planner_i(g, mid, o2)
    for k, x in enumerate(plan_i.steps):
        if not x <= set(i_vertices):
            raise PlanningError(
                f"remainder step {k} leaves the induced vertex set: {sorted(x)}"
            )
    steps = plan_h.steps + plan_i.steps
    combined = InversionPlan(steps, max(plan_h.p, plan_i.p), "subgraph-then-induced")
    chk = verify_plan(g, o1, o2, combined)
    if not chk.valid:
        raise PlanningError(f"composition invalid: {chk.violations}")
    return combined


# ---------------------------------------------------------------------------
# the general reduction loop (stars, then induced matchings)


def _reduction_phases(b: _PlanBuilder, res: _Residual, q: int):
    """Shared loop: vertices of degree >= q are fixed by grouped star
    inversions and deleted; then induced matchings of size q are peeled,
    their one-step fixes deferred (they run after everything else, in
    reverse peel order).  Returns the deferred matchings."""
    deferred: list[list[tuple[int, int]]] = []
    stars = 0
    while True:
        v = res.max_degree_vertex(q)
        if v is not None:
            nbrs = res.nbrs(v)
            t = len(nbrs) // q
            groups = [nbrs[i * q : (i + 1) * q] for i in range(t - 1)]
            groups.append(nbrs[(t - 1) * q :])
            for grp in groups:
                b.emit([v] + [w for w in grp if b.disagrees(v, w)])
            res.remove_vertex(v)
            stars += 1
            continue
        if q >= 2:
            sub = res.subgraph()
            matching = find_induced_matching(sub, q)
            if matching is not None:
                pairs = [sub.edges[i] for i in sorted(matching)]
                deferred.append(pairs)
                res.remove_edge_pairs(pairs)
                continue
        return deferred, stars


def _flush_deferred(b: _PlanBuilder, deferred) -> None:
    for pairs in reversed(deferred):
        step: set[int] = set()
        for u, v in pairs:
            if b.disagrees(u, v):
                step.update((u, v))
        b.emit(step)


def plan_uppergen(
    g: LabelledGraph,
    p: int,
    o1: Orientation,
    o2: Orientation,
    stall: str = "strong-colouring",
    oracle_max_edges: int = _oracle.DEFAULT_MAX_EDGES,
) -> PlannerReport:
    """Reduction loop realizing the ceil(m/floor(p/2)) + p^2/2 guarantee.

    ``stall="oracle"`` replaces the final strong-colouring stage by an exact
    plan for the small stalled residue (used by the psi-constant harness);
    it falls back to strong colouring when the residue is out of budget.
    """
    if p < 2:
        raise ValueError(f"p must be at least 2, got {p}")
    q = p // 2
    b = _PlanBuilder(g, o1, o2, p)
    res = _Residual(g)
    deferred, stars = _reduction_phases(b, res, q)
    sub = res.subgraph()
    stall_route = "empty"
    if sub.m:
        stall_route = "strong-colouring"
        if stall == "oracle":
            done = _stall_oracle(b, sub, p, oracle_max_edges)
            if done:
                stall_route = "oracle"
        if stall_route == "strong-colouring":
            for cls in strong_edge_colouring(sub).classes:
                step: set[int] = set()
                for e in sorted(cls):
                    u, v = sub.edges[e]
                    if b.disagrees(u, v):
                        step.update((u, v))
                b.emit(step)
    _flush_deferred(b, deferred)
    bound = _ceil_frac(g.m, q) + Fraction(p * p, 2)
    route = f"stars={stars},matchings={len(deferred)},stall={stall_route}"
    return b.finish(bound, route, "uppergen")


def _stall_oracle(b: _PlanBuilder, sub: LabelledGraph, p: int, max_edges: int) -> bool:
    if sub.m > _oracle.MITM_MAX_EDGES:
        return False
    diff_sub = 0
    for k, (u, v) in enumerate(sub.edges):
        if b.disagrees(u, v):
            diff_sub |= 1 << k
    try:
        got = _oracle.distance(
            sub, p, Orientation(sub, 0), Orientation(sub, diff_sub),
            max_edges=min(max_edges, _oracle.DEFAULT_MAX_EDGES),
        )
    except _oracle.BudgetExceeded:
        return False
    if got.witness_plan is None:
        return False
    for x in got.witness_plan.steps:
        b.emit(x)
    return True


# ---------------------------------------------------------------------------
# connected graphs at p = 3: transversal route and path/packing route


def plan_connected3(
    g: LabelledGraph,
    o1: Orientation,
    o2: Orientation,
    exact_transversal: bool = False,
) -> PlannerReport:
    """Two routes, shorter one returned.  Route A: fix a Kotzig decomposition
    of the triangle-free part, then the transversal edges one by one (those
    may churn in between, which the bound tolerates).  Route B: Kotzig on the
    whole graph with the delete-and-defer induction, triangles costing at
    most two steps."""
    if not g.is_connected():
        raise ValueError("plan_connected3 requires a connected graph")
    if g.m == 0:
        return _PlanBuilder(g, o1, o2, 3).finish(0, "edgeless", "connected3")
    f_set = min_triangle_transversal(g, exact=exact_transversal)
    bound = _ceil_frac(g.m + len(f_set), 2)

    # route A
    ba = _PlanBuilder(g, o1, o2, 3)
    h = g.without_edges(f_set)
    if h.m:
        for part in kotzig_p3(h).parts:
            _fix_path_part(ba, part)
    for f in sorted(f_set):
        u, v = g.edges[f]
        if ba.disagrees(u, v):
            ba.emit((u, v))

    # route B
    bb = _PlanBuilder(g, o1, o2, 3)
    levels = []
    alive = g.full_mask
    triangles = 0
    for part in kotzig_p3(g).parts:
        bits = g.induced_edge_bits(part) & alive
        if bits.bit_count() == 3:
            triangles += 1  # encountered triangle levels, at most nu_3
        levels.append((tuple(sorted(set(part))), bits))
        alive &= ~bits
    for vp, bits in reversed(levels):
        dis = bb.diff() & bits
        if not dis:
            continue
        hit = _subset_fixing(g, vp, bits, dis)
        if hit is not None:
            bb.emit(hit)
        else:
            for i in range(g.m):
                if dis >> i & 1:
                    bb.emit(g.edges[i])

    if len(bb.steps) < len(ba.steps):
        return bb.finish(bound, f"path-packing(triangles={triangles})", "connected3")
    return ba.finish(bound, f"transversal-kotzig(|F|={len(f_set)})", "connected3")


def _fix_path_part(b: _PlanBuilder, part: tuple[int, ...]) -> None:
    if len(part) == 2:
        u, v = part
        if b.disagrees(u, v):
            b.emit((u, v))
        return
    a, v, c = part
    d1, d2 = b.disagrees(a, v), b.disagrees(v, c)
    if d1 and d2:
        b.emit((a, v, c))
    elif d1:
        b.emit((a, v))
    elif d2:
        b.emit((v, c))


def _subset_fixing(g: LabelledGraph, vp, level_bits: int, dis: int):
    """Smallest subset of the level's vertices whose inversion flips exactly
    the disagreeing level edges (flips outside the level are deferred)."""
    from itertools import combinations

    for size in range(2, len(vp) + 1):
        for x in combinations(vp, size):
            if g.induced_edge_bits(x) & level_bits == dis:
                return x
    return None


# ---------------------------------------------------------------------------
# degenerate graphs


def plan_degenerate(
    g: LabelledGraph, p: int, o1: Orientation, o2: Orientation
) -> PlannerReport:
    """One inversion per vertex of a degeneracy ordering (vertex plus its
    disagreeing forward neighbours); needs p >= degeneracy + 1."""
    from .decompositions import degeneracy_ordering

    order, k = degeneracy_ordering(g)
    if p < k + 1:
        raise ValueError(f"p={p} too small for degeneracy {k}")
    return _plan_by_ordering(g, p, o1, o2, order, "degenerate")


def _plan_by_ordering(g, p, o1, o2, order, provenance, bound=None, route="") -> PlannerReport:
    pos = {v: i for i, v in enumerate(order)}
    b = _PlanBuilder(g, o1, o2, p)
    for v in order:
        fwd = [w for w in g.nbrs[v] if pos[w] > pos[v]]
        step = [v] + [w for w in fwd if b.disagrees(v, w)]
        b.emit(step)
    if bound is None:
        cover_prefix = 0
        for u, v in g.edges:
            cover_prefix = max(cover_prefix, min(pos[u], pos[v]) + 1)
        bound = min(max(g.n - 1, 0), cover_prefix) if g.m else 0
        route = route or f"vertex-cover-prefix={cover_prefix}"
    return b.finish(bound, route, provenance)


# ---------------------------------------------------------------------------
# vertex-elimination planner valid for every p >= 3


def plan_procedure1(
    g: LabelledGraph, p: int, o1: Orientation, o2: Orientation
) -> PlannerReport:
    """Remove vertices in descending-degree order; each costs at most
    ceil(d/(p-1)) star inversions.  Guarantee m/(p-1) + (n-1)(p-2)/(p-1)."""
    if p < 3:
        raise ValueError(f"plan_procedure1 requires p >= 3, got {p}")
    b = _PlanBuilder(g, o1, o2, p)
    res = _Residual(g)
    while res.m:
        v = res.max_degree_vertex(1)
        nbrs = res.nbrs(v)
        for i in range(0, len(nbrs), p - 1):
            grp = nbrs[i : i + p - 1]
            b.emit([v] + [w for w in grp if b.disagrees(v, w)])
        res.remove_vertex(v)
    bound = Fraction(g.m, p - 1) + Fraction(p - 2, p - 1) * max(g.n - 1, 0)
    return b.finish(bound, "descending-degree", "procedure1")


# ---------------------------------------------------------------------------
# trees and forests: full-reversal planners per p, lifted to any pair


def _virtual_forest_adj(g: LabelledGraph, subset: set[int]) -> list[set[int]]:
    """Adjacency of the real edges inside ``subset`` plus a chain of virtual
    edges linking its components into one tree.  A plan reversing every edge
    of the virtual tree reverses exactly the real edges inside ``subset``."""
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for v in subset:
        for w in g.nbrs[v]:
            if w in subset:
                adj[v].add(w)
    reps = []
    seen: set[int] = set()
    for v in sorted(subset):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        reps.append(v)
    for a, bb in zip(reps, reps[1:]):
        adj[a].add(bb)
        adj[bb].add(a)
    return adj


def _kotzig_tree(adj: Sequence[set[int]], active: set[int]) -> list[tuple[int, ...]]:
    """Kotzig pairing specialised to trees: ceil(|active|-1 / 2) short paths."""
    root = min(active)
    _, parent, order = _bfs(adj, active, root)
    pending: dict[int, list[int]] = {v: [] for v in active}
    parts: list[tuple[int, ...]] = []
    for v in reversed(order):
        pool = sorted(pending[v])
        while len(pool) >= 2:
            a, c = pool.pop(0), pool.pop(0)
            parts.append((a, v, c))
        if parent[v] is None:
            if pool:
                parts.append((v, pool.pop()))
        elif pool:
            parts.append((pool.pop(), v, parent[v]))
        else:
            pending[parent[v]].append(v)
    return parts


def _conv_emit_tree(
    b: _PlanBuilder, adj: Sequence[set[int]], active: set[int], p: int
) -> tuple[int, str]:
    """Emit steps reversing every (real) edge inside the active virtual tree;
    returns (bound, route) for the dispatched strategy."""
    n = len(active)
    if n <= 1:
        return 0, "trivial"
    if p == 3:
        for part in _kotzig_tree(adj, active):
            b.emit(part)
        return _ceil_frac(n - 1, 2), "kotzig-pairs"
    if p == 4:
        for s in _tree4_parts(adj, set(active)):
            b.emit(s)
        return _ceil_frac(3 * (n - 1), 8), "tree4-decomposition"
    if p == 5:
        _conv5(b, adj, set(active))
        return _ceil_frac(2 * n - 2, 7), "good5-recursion"
    options = [
        (conv_tree_bound(n, p), 0, "extract"),
        (_ceil_frac(2 * n - 2, 7), 1, "good5"),
        (_ceil_frac(3 * (n - 1), 8), 2, "tree4"),
    ]
    bound, _, strategy = min(options)
    if strategy == "tree4":
        for s in _tree4_parts(adj, set(active)):
            b.emit(s)
    elif strategy == "good5":
        _conv5(b, adj, set(active))
    else:
        _conv_extract(b, adj, set(active), p)
    return bound, f"dispatch-{strategy}"


def _conv5(b: _PlanBuilder, adj, active: set[int]) -> None:
    pending: list[frozenset[int]] = []
    while len(active) > 5:
        # strict witnesses: the two sets' edges and the remainder's edges
        # partition the tree, which the reversal recursion relies on
        w = _find_good5(adj, active, strict=True)
        if w.kind == "set":
            pending.append(w.X)
            active -= w.X - {w.t}
        else:
            pending.append(w.X1)
            pending.append(w.X2)
            active -= (w.X1 | w.X2) - {w.t1, w.t2}
    if len(active) >= 2:
        b.emit(active)
    for x in reversed(pending):
        b.emit(x)


def _conv_extract(b: _PlanBuilder, adj, active: set[int], p: int) -> None:
    r = min(active)
    while len(active) >= 2:
        if len(active) <= p:
            b.emit(active)
            return
        X = _extract(adj, set(active), r, p)
        b.emit(X)
        # keep only the component of r once the induced edges are deleted;
        # all other components are trivial
        comp = {r}
        stack = [r]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in active and w not in comp and not (u in X and w in X):
                    comp.add(w)
                    stack.append(w)
        active = comp


def conv_plan_tree(t: LabelledGraph, p: int) -> PlannerReport:
    """A plan reversing every edge of the tree, meeting the per-p bound
    (p=3: ceil((n-1)/2), p=4: ceil(3(n-1)/8), p=5: ceil((2n-2)/7), p>=6 the
    best of the sqrt-extraction bound and the smaller-p bounds)."""
    if not t.is_tree():
        raise ValueError("conv_plan_tree requires a tree")
    if p < 3:
        raise ValueError(f"conv_plan_tree requires p >= 3, got {p}")
    o1 = Orientation(t, 0)
    b = _PlanBuilder(t, o1, o1.complement(), p)
    adj = _adj_sets(t)
    bound, route = _conv_emit_tree(b, adj, set(range(t.n)), p)
    return b.finish(bound, route, "conv-tree")


def lift_conv_to_id(
    f: LabelledGraph, p: int, o1: Orientation, o2: Orientation
) -> PlannerReport:
    """Forest distance planner: the components of the disagreement graph are
    2-coloured (their contact graph is again a forest) and each side's
    disagreeing sub-forest is fully reversed by the conv planner, steps of
    one side never touching the other."""
    if not f.is_forest():
        raise ValueError("lift_conv_to_id requires a forest")
    b = _PlanBuilder(f, o1, o2, p)
    if p == 2:
        for i in range(f.m):
            if b.disagrees_idx(i):
                b.emit(f.edges[i])
        return b.finish(f.m, "singles", "forest-lift")
    diff = o1.bits ^ o2.bits
    comp = list(range(f.n))

    def find(x: int) -> int:
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for i, (u, v) in enumerate(f.edges):
        if diff >> i & 1:
            comp[find(u)] = find(v)
    roots = sorted({find(v) for v in range(f.n)})
    # contact graph on disagreement components, a forest, hence 2-colourable
    cadj: dict[int, set[int]] = {r: set() for r in roots}
    for i, (u, v) in enumerate(f.edges):
        if not diff >> i & 1:
            ru, rv = find(u), find(v)
            if ru != rv:
                cadj[ru].add(rv)
                cadj[rv].add(ru)
    colour: dict[int, int] = {}
    for r in roots:
        if r in colour:
            continue
        colour[r] = 0
        queue = [r]
        while queue:
            x = queue.pop(0)
            for y in sorted(cadj[x]):
                if y not in colour:
                    colour[y] = colour[x] ^ 1
                    queue.append(y)
    bound: int | Fraction = 0
    routes = []
    for side in (0, 1):
        subset = {
            v
            for i, (u, w) in enumerate(f.edges)
            if diff >> i & 1 and colour[find(u)] == side
            for v in (u, w)
        }
        if not subset:
            continue
        vadj = _virtual_forest_adj(f, subset)
        sb, sr = _conv_emit_tree(b, vadj, subset, p)
        bound += sb
        routes.append(f"side{side}:{sr}(n={len(subset)})")
    return b.finish(bound, ";".join(routes) or "no-disagreement", "forest-lift")


# ---------------------------------------------------------------------------
# planar planners


def plan_planar_small(
    g: LabelledGraph,
    p: int,
    o1: Orientation,
    o2: Orientation,
    planar: bool | None = None,
) -> PlannerReport:
    """The staged procedure behind the 11n/6 - 8/3 (p=3) and 4n/3 + 10/3
    (p in {4,5}) planar bounds: exhaust fully-disagreeing triangles, then
    4-cycles, then open cherries, then (p>=4) independent edge pairs, then
    singles.  Valid on any graph; the bound applies to planar inputs."""
    if p not in (3, 4, 5):
        raise ValueError(f"plan_planar_small requires p in 3..5, got {p}")
    flag = is_planar(g) if planar is None else planar
    b = _PlanBuilder(g, o1, o2, p)
    for x, y, z in g.triangles():
        if b.disagrees(x, y) and b.disagrees(y, z) and b.disagrees(x, z):
            b.emit((x, y, z))
    for x in range(g.n):
        for z in range(x + 1, g.n):
            common = sorted(g.nbrs[x] & g.nbrs[z])
            for yi in range(len(common)):
                for wi in range(yi + 1, len(common)):
                    y, w = common[yi], common[wi]
                    if (
                        b.disagrees(x, y) and b.disagrees(y, z)
                        and b.disagrees(z, w) and b.disagrees(w, x)
                    ):
                        b.emit((x, y, z))
                        b.emit((z, w, x))
    for y in range(g.n):
        ns = sorted(g.nbrs[y])
        for xi in range(len(ns)):
            for zi in range(xi + 1, len(ns)):
                x, z = ns[xi], ns[zi]
                if not g.has_edge(x, z) and b.disagrees(x, y) and b.disagrees(y, z):
                    b.emit((x, y, z))
    if p >= 4:
        for e in range(g.m):
            for fidx in range(e + 1, g.m):
                w, x = g.edges[e]
                y, z = g.edges[fidx]
                if {w, x} & {y, z}:
                    continue
                if (
                    g.has_edge(w, y) or g.has_edge(w, z)
                    or g.has_edge(x, y) or g.has_edge(x, z)
                ):
                    continue
                if b.disagrees(w, x) and b.disagrees(y, z):
                    b.emit((w, x, y, z))
    for i in range(g.m):
        if b.disagrees_idx(i):
            b.emit(g.edges[i])
    length = len(b.steps)
    if flag:
        n = g.n
        bound = (
            Fraction(11 * n, 6) - Fraction(8, 3)
            if p == 3
            else Fraction(4 * n, 3) + Fraction(10, 3)
        )
        bound = max(bound, Fraction(0))  # the p=3 formula dips below 0 at n=1
    else:
        bound = length
    return b.finish(bound, "staged" + ("" if flag else ",non-planar"),
                    "planar-small")


def plan_planar_general(
    g: LabelledGraph,
    p: int,
    o1: Orientation,
    o2: Orientation,
    planar: bool | None = None,
) -> PlannerReport:
    """The general reduction loop with a planar stall handler: when neither a
    high-degree vertex nor a size-q induced matching remains, the endpoints
    of a maximum matching form a small vertex cover (at most 8(q-1) on planar
    inputs) and one inversion per cover vertex finishes."""
    if p < 2:
        raise ValueError(f"p must be at least 2, got {p}")
    flag = is_planar(g) if planar is None else planar
    q = p // 2
    b = _PlanBuilder(g, o1, o2, p)
    res = _Residual(g)
    deferred, stars = _reduction_phases(b, res, q)
    sub = res.subgraph()
    cover = 0
    if sub.m:
        import networkx as nx

        G = nx.Graph()
        G.add_edges_from(sub.edges)
        matching = nx.max_weight_matching(G, maxcardinality=True)
        a_set = sorted({v for e in matching for v in e})
        cover = len(a_set)
        rest = sorted(set(range(g.n)) - set(a_set))
        pos = {v: i for i, v in enumerate(a_set + rest)}
        for v in a_set:
            step = [v] + [
                w for w, i in sub.adj[v] if pos[w] > pos[v] and b.disagrees(v, w)
            ]
            b.emit(step)
    _flush_deferred(b, deferred)
    if flag:
        bound = _ceil_frac(g.m, q) + max(8 * q - 8, 0)
    else:
        bound = len(b.steps)
    route = f"stars={stars},matchings={len(deferred)},cover={cover}" + (
        "" if flag else ",non-planar"
    )
    return b.finish(bound, route, "planar-general")


# ---------------------------------------------------------------------------
# portfolio


def planner_reports(
    g: LabelledGraph,
    p: int,
    o1: Orientation,
    o2: Orientation,
    planar: bool | None = None,
) -> dict[str, PlannerReport]:
    """All applicable planners, keyed by name."""
    from .decompositions import degeneracy_ordering

    flag = is_planar(g) if planar is None else planar
    reports: dict[str, PlannerReport] = {}
    reports["uppergen"] = plan_uppergen(g, p, o1, o2)
    if p >= 3:
        reports["procedure1"] = plan_procedure1(g, p, o1, o2)
    _, k = degeneracy_ordering(g)
    if p >= k + 1:
        reports["degenerate"] = plan_degenerate(g, p, o1, o2)
    if p >= 3 and g.is_connected():
        reports["connected3"] = plan_connected3(g, o1, o2)
    if g.is_forest():
        reports["forest-lift"] = lift_conv_to_id(g, p, o1, o2)
    if p in (3, 4, 5):
        reports["planar-small"] = plan_planar_small(g, p, o1, o2, planar=flag)
    if flag:
        reports["planar-general"] = plan_planar_general(g, p, o1, o2, planar=True)
    return reports


def best_plan(
    g: LabelledGraph,
    p: int,
    o1: Orientation,
    o2: Orientation,
    planar: bool | None = None,
) -> PlannerReport:
    """Run every applicable planner and return the shortest valid plan,
    with all candidates' lengths in the report."""
    reports = planner_reports(g, p, o1, o2, planar=planar)
    name, rep = min(reports.items(), key=lambda kv: (len(kv[1].plan.steps), kv[0]))
    lengths = {k2: len(v.plan.steps) for k2, v in reports.items()}
    return PlannerReport(
        InversionPlan(rep.plan.steps, p, f"best:{name}"),
        rep.bound,
        f"{name}({rep.route})",
        candidates=lengths,
    )

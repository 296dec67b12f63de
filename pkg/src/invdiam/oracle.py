"""Exact (<=p)-inversion distances, diameters and converse numbers.

The inversion graph of a host graph G is the Cayley graph of (Z/2)^m
generated by the reversal masks of all vertex sets of size at most p, so a
single BFS from the all-zero state yields every distance: the distance
between two orientations depends only on their disagreement mask, the
diameter is the eccentricity of any one state, and the converse number is
the depth of the all-ones mask.

Two frontier-expansion engines are provided.  When the generator set is
small each layer is expanded by XORing the frontier with every generator.
When it is large, layers are grown by exact integer XOR-convolution
(Walsh-Hadamard transform), whose cost per layer is O(m 2^m) independent
of the generator count.  Distances on hosts too big for a full 2^m table
fall back to bidirectional meet-in-the-middle search.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import InversionPlan, LabelledGraph, Orientation

__all__ = [
    "BudgetExceeded",
    "GeneratorSet",
    "OracleResult",
    "generator_masks",
    "oracle_profile",
    "distance",
    "diameter",
    "converse_number",
    "DEFAULT_MAX_EDGES",
    "MITM_MAX_EDGES",
]

DEFAULT_MAX_EDGES = 22
MITM_MAX_EDGES = 30
DEFAULT_SUBSET_BUDGET = 5_000_000
# element operations per BFS before switching from per-generator expansion
FRONTIER_WORK_BUDGET = 250_000_000
MITM_STATE_BUDGET = 4_000_000
_UNSEEN = 255


class BudgetExceeded(RuntimeError):
    """The request exceeds the configured search budget; never silent."""


@dataclass(frozen=True)
class GeneratorSet:
    """Distinct nonzero reversal masks of all (<=p)-sets, with witnesses.

    ``witnesses[mask]`` is the smallest inverting set producing ``mask``
    (smallest cardinality, then lexicographic), as a sorted tuple.
    """

    graph: LabelledGraph
    p: int
    masks: tuple[int, ...]
    witnesses: dict[int, tuple[int, ...]]

    @cached_property
    def as_array(self) -> np.ndarray:
        return np.array(self.masks, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.masks)


def generator_masks(
    g: LabelledGraph, p: int, max_subsets: int = DEFAULT_SUBSET_BUDGET
) -> GeneratorSet:
    """Enumerate every distinct nonzero inversion mask over (<=p)-sets.

    Isolated vertices never change a mask, so the enumeration runs over
    vertices of positive degree only; witnesses are minimal regardless.
    """
    if p < 2:
        raise ValueError(f"p must be at least 2, got {p}")
    verts = [v for v in range(g.n) if g.degree(v) > 0]
    edge_bits = {v: {w: 1 << i for w, i in g.adj[v]} for v in verts}
    best: dict[int, tuple[int, ...]] = {}
    count = 0

    def extend(cur: list[int], mask: int, start: int) -> None:
        nonlocal count
        for idx in range(start, len(verts)):
            v = verts[idx]
            count += 1
            if count > max_subsets:
                raise BudgetExceeded(
                    f"generator enumeration exceeds {max_subsets} subsets "
                    f"(n_eff={len(verts)}, p={p})"
                )
            row = edge_bits[v]
            delta = 0
            for u in cur:
                delta |= row.get(u, 0)
            nm = mask | delta
            cur.append(v)
            if nm and len(cur) >= 2:
                wit = tuple(cur)
                old = best.get(nm)
                if old is None or (len(wit), wit) < (len(old), old):
                    best[nm] = wit
            if len(cur) < p:
                extend(cur, nm, idx + 1)
            cur.pop()

    extend([], 0, 0)
    masks = tuple(sorted(best))
    return GeneratorSet(g, p, masks, best)


@dataclass
class OracleResult:
    """Outcome of an exact computation; when finite, the witness plan is
    a valid plan of exactly that length."""

    value: int | str
    witness_plan: InversionPlan | None
    stats: dict
    source: Orientation | None = None
    target: Orientation | None = None


def _wht_inplace(a: np.ndarray) -> None:
    # iterative radix-2 butterflies; exact on int64
    n = a.shape[0]
    h = 1
    while h < n:
        blocks = a.reshape(n // (2 * h), 2, h)
        x = blocks[:, 0, :].copy()
        y = blocks[:, 1, :]
        blocks[:, 0, :] = x + y
        blocks[:, 1, :] = x - y
        h *= 2


class _DepthTable:
    """Full BFS depth table over the 2^m orientation-disagreement states."""

    def __init__(self, g: LabelledGraph, gens: GeneratorSet):
        self.graph = g
        self.gens = gens
        self.depth = np.full(1 << g.m, _UNSEEN, dtype=np.uint8)
        self.depth[0] = 0
        self._complete_to = 0  # BFS has assigned every depth <= this
        self._exhausted = not gens.masks
        self._frontier = np.zeros(1, dtype=np.int64)
        self._states_visited = 1
        m = g.m
        arr = gens.as_array
        frontier_work = len(arr) * (1 << m)
        self._mode = "frontier" if frontier_work <= FRONTIER_WORK_BUDGET else "wht"
        if self._mode == "wht":
            if (1 << (2 * m)) * max(len(arr), 1) >= 1 << 62:
                raise BudgetExceeded(
                    f"BFS infeasible: m={m} with {len(arr)} generators exceeds "
                    "both the frontier work budget and the exact-transform range"
                )
            ind = np.zeros(1 << m, dtype=np.int64)
            ind[arr] = 1
            _wht_inplace(ind)
            self._wht_gens = ind

    def _expand_once(self) -> None:
        if self._exhausted:
            return
        d = self._complete_to + 1
        if d >= _UNSEEN:
            raise BudgetExceeded("BFS depth exceeds the uint8 layer range")
        if self._mode == "frontier":
            new = self._expand_frontier(d)
        else:
            new = self._expand_wht(d)
        if new.size == 0:
            self._exhausted = True
        else:
            self._states_visited += int(new.size)
            self._frontier = new
        self._complete_to = d

    def _expand_frontier(self, d: int) -> np.ndarray:
        # depth entries are assigned chunk by chunk so later chunks dedupe
        gens = self.gens.as_array
        chunk = max(1, (1 << 24) // max(len(gens), 1))
        fresh: list[np.ndarray] = []
        frontier = self._frontier
        for lo in range(0, frontier.size, chunk):
            cand = (frontier[lo : lo + chunk, None] ^ gens[None, :]).ravel()
            cand = np.unique(cand)
            new = cand[self.depth[cand] == _UNSEEN]
            self.depth[new] = d
            fresh.append(new)
        if not fresh:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(fresh)

    def _expand_wht(self, d: int) -> np.ndarray:
        ind = np.zeros(self.depth.shape[0], dtype=np.int64)
        ind[self._frontier] = 1
        _wht_inplace(ind)
        ind *= self._wht_gens
        _wht_inplace(ind)
        # unnormalized inverse transform: positive exactly on reachable states
        reachable = ind > 0
        reachable &= self.depth == _UNSEEN
        new = np.nonzero(reachable)[0].astype(np.int64)
        self.depth[new] = d
        return new

    def depth_of(self, state: int) -> int | None:
        """BFS depth of ``state``; None when unreachable."""
        while self.depth[state] == _UNSEEN and not self._exhausted:
            self._expand_once()
        d = int(self.depth[state])
        return None if d == _UNSEEN else d

    def run_to_exhaustion(self) -> None:
        while not self._exhausted:
            self._expand_once()

    def eccentricity(self) -> tuple[int, int]:
        """(max depth, smallest state attaining it) over reachable states."""
        self.run_to_exhaustion()
        reach = self.depth != _UNSEEN
        dmax = int(self.depth[reach].max())
        state = int(np.nonzero(reach & (self.depth == dmax))[0][0])
        return dmax, state

    def all_reached(self) -> bool:
        self.run_to_exhaustion()
        return bool((self.depth != _UNSEEN).all())

    def walk_masks(self, state: int) -> list[int]:
        """Greedy lexicographic walk from ``state`` down to zero.

        At each step the smallest generator mask that decreases the depth is
        taken, which makes witness plans reproducible.
        """
        d = self.depth_of(state)
        if d is None:
            raise ValueError("state unreachable")
        gens = self.gens.as_array  # ascending mask order
        masks = []
        cur = state
        for step_depth in range(d, 0, -1):
            cand = cur ^ gens
            hits = np.nonzero(self.depth[cand] == step_depth - 1)[0]
            gmask = int(gens[hits[0]])
            masks.append(gmask)
            cur ^= gmask
        return masks

    @property
    def states_visited(self) -> int:
        return self._states_visited

    @property
    def mode(self) -> str:
        return self._mode


class OracleProfile:
    """Shared BFS state for answering several queries on one (g, p) pair."""

    def __init__(
        self,
        g: LabelledGraph,
        p: int,
        max_edges: int = DEFAULT_MAX_EDGES,
        max_subsets: int = DEFAULT_SUBSET_BUDGET,
    ):
        if g.m > max_edges:
            raise BudgetExceeded(
                f"graph has {g.m} edges, above the exhaustive cap {max_edges}; "
                "raise --max-edges explicitly to proceed"
            )
        self.graph = g
        self.p = p
        self.gens = generator_masks(g, p, max_subsets=max_subsets)
        self.table = _DepthTable(g, self.gens)

    def _plan_for(self, diff_bits: int) -> InversionPlan:
        steps = tuple(
            frozenset(self.gens.witnesses[m]) for m in self.table.walk_masks(diff_bits)
        )
        return InversionPlan(steps, self.p, provenance="oracle-bfs")

    def _result(self, diff_bits: int, t0: float, source, target) -> OracleResult:
        d = self.table.depth_of(diff_bits)
        stats = {
            "states_visited": self.table.states_visited,
            "wall_time": time.perf_counter() - t0,
            "mode": self.table.mode,
            "generators": len(self.gens),
        }
        if d is None:
            return OracleResult("unreachable", None, stats, source, target)
        plan = self._plan_for(diff_bits)
        return OracleResult(d, plan, stats, source, target)

    def distance(self, o1: Orientation, o2: Orientation) -> OracleResult:
        t0 = time.perf_counter()
        return self._result(o1.bits ^ o2.bits, t0, o1, o2)

    def converse_number(self) -> OracleResult:
        t0 = time.perf_counter()
        o0 = Orientation(self.graph, 0)
        return self._result(self.graph.full_mask, t0, o0, o0.complement())

    def diameter(self) -> OracleResult:
        t0 = time.perf_counter()
        if self.graph.m == 0:
            o0 = Orientation(self.graph, 0)
            return OracleResult(
                0, InversionPlan((), self.p, "oracle-bfs"),
                {"states_visited": 1, "wall_time": 0.0, "mode": "trivial",
                 "generators": 0},
                o0, o0,
            )
        if not self.table.all_reached():
            # cannot happen for p >= 2 (single-edge reversals generate), but
            # the Cayley graph of a deficient generator set is disconnected
            return OracleResult(
                "unreachable", None,
                {"states_visited": self.table.states_visited,
                 "wall_time": time.perf_counter() - t0,
                 "mode": self.table.mode, "generators": len(self.gens)},
                Orientation(self.graph, 0), None,
            )
        dmax, state = self.table.eccentricity()
        res = self._result(state, t0, Orientation(self.graph, 0),
                           Orientation(self.graph, state))
        assert res.value == dmax
        return res


def oracle_profile(g: LabelledGraph, p: int, **kw) -> OracleProfile:
    return OracleProfile(g, p, **kw)


def _check_pair(o1: Orientation, o2: Orientation, g: LabelledGraph) -> None:
    if o1.graph != g or o2.graph != g:
        raise ValueError("orientations do not belong to the given graph")


def distance(
    g: LabelledGraph,
    p: int,
    o1: Orientation,
    o2: Orientation,
    max_edges: int = DEFAULT_MAX_EDGES,
    mitm_max_edges: int = MITM_MAX_EDGES,
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
) -> OracleResult:
    """Exact distance in the (<=p)-inversion graph between two orientations.

    Hosts with more than ``max_edges`` edges are handled, up to
    ``mitm_max_edges``, by bidirectional meet-in-the-middle search.
    """
    _check_pair(o1, o2, g)
    if g.m <= max_edges:
        return oracle_profile(g, p, max_edges=max_edges, max_subsets=max_subsets).distance(o1, o2)
    if g.m <= mitm_max_edges:
        return _mitm_distance(g, p, o1, o2, max_subsets=max_subsets)
    raise BudgetExceeded(
        f"graph has {g.m} edges, above both the table cap {max_edges} and the "
        f"meet-in-the-middle cap {mitm_max_edges}"
    )


def diameter(
    g: LabelledGraph,
    p: int,
    max_edges: int = DEFAULT_MAX_EDGES,
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
) -> OracleResult:
    """id^{<=p}: the eccentricity of the all-zero orientation, exhaustively."""
    return oracle_profile(g, p, max_edges=max_edges, max_subsets=max_subsets).diameter()


def converse_number(
    g: LabelledGraph,
    p: int,
    max_edges: int = DEFAULT_MAX_EDGES,
    mitm_max_edges: int = MITM_MAX_EDGES,
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
) -> OracleResult:
    """conv^{<=p}: distance from any orientation to its converse."""
    if g.m <= max_edges:
        return oracle_profile(g, p, max_edges=max_edges, max_subsets=max_subsets).converse_number()
    o0 = Orientation(g, 0)
    if g.m <= mitm_max_edges:
        return _mitm_distance(g, p, o0, o0.complement(), max_subsets=max_subsets)
    raise BudgetExceeded(
        f"graph has {g.m} edges, above both the table cap {max_edges} and the "
        f"meet-in-the-middle cap {mitm_max_edges}"
    )


def _layer_expand(
    frontier: np.ndarray, gens: np.ndarray, visited_sorted: np.ndarray
) -> np.ndarray:
    chunk = max(1, (1 << 23) // max(len(gens), 1))
    parts = []
    for lo in range(0, frontier.size, chunk):
        cand = (frontier[lo : lo + chunk, None] ^ gens[None, :]).ravel()
        parts.append(np.unique(cand))
    if not parts:
        return np.zeros(0, dtype=np.int64)
    cand = np.unique(np.concatenate(parts))
    keep = ~np.isin(cand, visited_sorted, assume_unique=True)
    return cand[keep]


def _mitm_distance(
    g: LabelledGraph,
    p: int,
    o1: Orientation,
    o2: Orientation,
    max_subsets: int = DEFAULT_SUBSET_BUDGET,
    state_budget: int = MITM_STATE_BUDGET,
) -> OracleResult:
    """Bidirectional BFS meeting on hashed half-depth state sets."""
    t0 = time.perf_counter()
    gens_set = generator_masks(g, p, max_subsets=max_subsets)
    gens = gens_set.as_array
    target = o1.bits ^ o2.bits
    if target == 0:
        return OracleResult(0, InversionPlan((), p, "oracle-mitm"),
                            {"states_visited": 1,
                             "wall_time": time.perf_counter() - t0,
                             "mode": "mitm", "generators": len(gens_set)},
                            o1, o2)
    sides = [
        {"layers": [np.array([0], dtype=np.int64)],
         "visited": np.array([0], dtype=np.int64)},
        {"layers": [np.array([target], dtype=np.int64)],
         "visited": np.array([target], dtype=np.int64)},
    ]
    best: int | None = None
    meet: tuple[int, int, int] | None = None  # (state, depth_s, depth_t)
    total = 2
    while True:
        ds, dt = len(sides[0]["layers"]) - 1, len(sides[1]["layers"]) - 1
        if best is not None and ds + dt >= best:
            break
        i = 0 if sides[0]["layers"][-1].size <= sides[1]["layers"][-1].size else 1
        side, other = sides[i], sides[1 - i]
        new = _layer_expand(side["layers"][-1], gens, side["visited"])
        if new.size == 0:
            break
        total += int(new.size)
        if total > state_budget:
            raise BudgetExceeded(
                f"meet-in-the-middle stores more than {state_budget} states"
            )
        side["layers"].append(new)
        side["visited"] = np.union1d(side["visited"], new)
        for ob, layer in enumerate(other["layers"]):
            common = np.intersect1d(new, layer, assume_unique=True)
            if common.size:
                da = len(side["layers"]) - 1
                cand = da + ob
                if best is None or cand < best:
                    best = cand
                    state = int(common.min())
                    meet = (state, da, ob) if i == 0 else (state, ob, da)
                break  # smallest ob gives the best total for this layer
    stats = {"states_visited": total, "wall_time": time.perf_counter() - t0,
             "mode": "mitm", "generators": len(gens_set)}
    if meet is None:
        return OracleResult("unreachable", None, stats, o1, o2)
    state, ds, dt = meet
    # S-side masks XOR to state, T-side masks XOR to state ^ target
    masks = _walk_layers(state, ds, sides[0]["layers"], gens)
    masks += _walk_layers(state, dt, sides[1]["layers"], gens)
    steps = tuple(frozenset(gens_set.witnesses[m]) for m in masks)
    plan = InversionPlan(steps, p, provenance="oracle-mitm")
    return OracleResult(best, plan, stats, o1, o2)


def _walk_layers(
    state: int, depth: int, layers: list[np.ndarray], gens: np.ndarray
) -> list[int]:
    """Greedy walk from ``state`` through stored BFS layers to layer 0."""
    masks = []
    cur = state
    for d in range(depth, 0, -1):
        cand = cur ^ gens
        hits = np.nonzero(np.isin(cand, layers[d - 1]))[0]
        gmask = int(gens[hits[0]])
        masks.append(gmask)
        cur ^= gmask
    return masks

"""Generators for the extremal families and for seeded random instances.

Every generator tags the graph's ``name`` with the family and parameters,
which the lower-bound registry uses to attach family certificates.
"""

from __future__ import annotations

import random

from .core import LabelledGraph, build_graph

__all__ = [
    "generate",
    "matching",
    "complete",
    "path",
    "cycle",
    "star",
    "spider4",
    "spider5",
    "odd_triangulation",
    "g2n",
    "double_wheel",
    "random_tree",
    "random_connected",
    "random_planar_triangulation",
    "family_of",
]


def family_of(g: LabelledGraph) -> str:
    return g.name.split("(", 1)[0] if g.name else ""


def detect_family(g: LabelledGraph) -> tuple[str, dict]:
    """Recognize certificate-bearing families by structure, so that graphs
    loaded from plain edge-list files still get their family bounds."""
    if g.m == 0:
        return "", {}
    if g.max_degree <= 1:
        return "matching", {}
    hubs = _double_wheel_hubs(g)
    if hubs is not None:
        return "double_wheel", {"hubs": hubs}
    centre = _spider4_centre(g)
    if centre is not None:
        return "spider4", {"centre": centre}
    if _is_spider5(g):
        return "spider5", {}
    return "", {}


def _connected_on(g: LabelledGraph, vertices: set[int]) -> bool:
    if not vertices:
        return False
    start = min(vertices)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in g.nbrs[v]:
            if w in vertices and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vertices


def _double_wheel_hubs(g: LabelledGraph) -> tuple[int, int] | None:
    n = g.n
    if n < 5 or g.m != 3 * (n - 2):
        return None
    for a in range(n):
        if g.degree(a) != n - 2:
            continue
        for b in range(a + 1, n):
            if g.degree(b) != n - 2 or g.has_edge(a, b):
                continue
            rest = {v for v in range(n) if v not in (a, b)}
            if any(not (g.has_edge(a, v) and g.has_edge(b, v)) for v in rest):
                continue
            if all(
                sum(1 for w in g.nbrs[v] if w in rest) == 2 for v in rest
            ) and _connected_on(g, rest):
                return (a, b)
    return None


def _spider4_centre(g: LabelledGraph) -> int | None:
    if not g.is_tree() or g.n < 3:
        return None
    for x in range(g.n):
        pendant = 0
        for y in g.nbrs[x]:
            dy = g.degree(y)
            if dy > 2:
                break
            if dy == 2:
                z = next(w for w in g.nbrs[y] if w != x)
                if g.degree(z) != 1:
                    break
                pendant += 1
        else:
            middles = len(g.nbrs[x])
            if 1 + middles + pendant == g.n and middles - pendant in (0, 1):
                return x
    return None


def _is_spider5(g: LabelledGraph) -> bool:
    if not g.is_tree() or g.n < 8 or (g.n - 1) % 7:
        return False
    q = (g.n - 1) // 7
    for r in range(g.n):
        if g.degree(r) != q:
            continue
        ok = True
        for x in g.nbrs[r]:
            ys = [y for y in g.nbrs[x] if y != r]
            if g.degree(x) != 3 or len(ys) != 2:
                ok = False
                break
            for y in ys:
                zs = [z for z in g.nbrs[y] if z != x]
                if g.degree(y) != 3 or any(g.degree(z) != 1 for z in zs):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def matching(k: int) -> LabelledGraph:
    if k < 0:
        raise ValueError("matching needs k >= 0")
    return build_graph(2 * k, [(2 * i, 2 * i + 1) for i in range(k)],
                       name=f"matching(k={k})")


def complete(n: int) -> LabelledGraph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return build_graph(n, edges, name=f"complete(n={n})")


def path(n: int) -> LabelledGraph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)], name=f"path(n={n})")


def cycle(n: int) -> LabelledGraph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return build_graph(n, edges, name=f"cycle(n={n})")


def star(n: int) -> LabelledGraph:
    if n < 1:
        raise ValueError("star needs n >= 1")
    return build_graph(n, [(0, i) for i in range(1, n)], name=f"star(n={n})")


def spider4(n: int) -> LabelledGraph:
    """Centre x joined to s+eps middle vertices, s of which carry a pendant
    leaf; s = floor((n-1)/2).  The tight family for trees at p = 4."""
    if n < 1:
        raise ValueError("spider4 needs n >= 1")
    s = (n - 1) // 2
    eps = n - 1 - 2 * s
    edges = [(0, i) for i in range(1, s + eps + 1)]
    edges += [(i, s + eps + i) for i in range(1, s + 1)]
    return build_graph(n, edges, name=f"spider4(n={n})")


def spider5(q: int) -> LabelledGraph:
    """q branches of 7 vertices below a shared root; the tight family for
    trees at p = 5 (n = 7q + 1)."""
    if q < 1:
        raise ValueError("spider5 needs q >= 1")
    edges = []
    for j in range(q):
        x = 1 + 7 * j
        y1, y2 = x + 1, x + 2
        z = [x + 3, x + 4, x + 5, x + 6]
        edges += [(0, x), (x, y1), (x, y2),
                  (y1, z[0]), (y1, z[1]), (y2, z[2]), (y2, z[3])]
    return build_graph(1 + 7 * q, edges, name=f"spider5(q={q})")


def spider5_branch_edges(q: int) -> list[list[tuple[int, int]]]:
    """Edge lists of the q branches of spider5(q), root edge first."""
    out = []
    for j in range(q):
        x = 1 + 7 * j
        y1, y2 = x + 1, x + 2
        z = [x + 3, x + 4, x + 5, x + 6]
        out.append([(0, x), (x, y1), (x, y2),
                    (y1, z[0]), (y1, z[1]), (y2, z[2]), (y2, z[3])])
    return out


def odd_triangulation(q: int) -> LabelledGraph:
    """Plane triangulation on 4q vertices with every degree odd: K4, then
    repeatedly a disjoint K4 planted inside a face, joined by the six
    cross edges."""
    if q < 1:
        raise ValueError("odd_triangulation needs q >= 1")
    edges = {(u, v) for u in range(4) for v in range(u + 1, 4)}
    faces = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    n = 4
    for _ in range(q - 1):
        faces.sort()
        u1, u2, u3 = faces.pop(0)
        a, b, c, d = n, n + 1, n + 2, n + 3
        n += 4
        for x in (a, b, c, d):
            for y in (a, b, c, d):
                if x < y:
                    edges.add((x, y))
        edges |= {(u1, b), (u1, c), (u2, a), (u2, c), (u3, a), (u3, b)}
        edges = {(min(x, y), max(x, y)) for x, y in edges}
        faces += [
            (a, b, d), (a, c, d), (b, c, d),
            (u1, u2, c), (u2, u3, a), (u1, u3, b),
            (a, b, u3), (b, c, u1), (a, c, u2),
        ]
    return build_graph(n, edges, name=f"odd_triangulation(q={q})")


def g2n(n: int) -> LabelledGraph:
    """K2 on {0,1} plus n-2 vertices joined to both ends; 2-degenerate and
    extremal for p = 3."""
    if n < 2:
        raise ValueError("g2n needs n >= 2")
    edges = [(0, 1)]
    for x in range(2, n):
        edges += [(0, x), (1, x)]
    return build_graph(n, edges, name=f"g2n(n={n})")


def double_wheel(n: int) -> LabelledGraph:
    """Cycle on n-2 vertices plus two hubs (labels n-2 and n-1) adjacent to
    every cycle vertex."""
    if n < 5:
        raise ValueError("double_wheel needs n >= 5")
    k = n - 2
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges = [(min(u, v), max(u, v)) for u, v in edges]
    for hub in (n - 2, n - 1):
        edges += [(i, hub) for i in range(k)]
    return build_graph(n, edges, name=f"double_wheel(n={n})")


def random_tree(n: int, seed: int) -> LabelledGraph:
    """Uniform random labelled tree via a seeded Pruefer sequence."""
    name = f"random_tree(n={n},seed={seed})"
    if n <= 1:
        return build_graph(max(n, 0), [], name=name)
    if n == 2:
        return build_graph(2, [(0, 1)], name=name)
    rng = random.Random(seed)
    prufer = [rng.randrange(n) for _ in range(n - 2)]
    deg = [1] * n
    for v in prufer:
        deg[v] += 1
    import heapq

    leaves = [v for v in range(n) if deg[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in prufer:
        u = heapq.heappop(leaves)
        edges.append((min(u, v), max(u, v)))
        deg[v] -= 1
        if deg[v] == 1:
            heapq.heappush(leaves, v)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((min(u, v), max(u, v)))
    return build_graph(n, edges, name=name)


def random_connected(n: int, m: int, seed: int) -> LabelledGraph:
    """Connected graph: a random spanning tree plus random extra edges up to
    m total (silently capped at the complete graph)."""
    if n < 1:
        raise ValueError("random_connected needs n >= 1")
    m = min(m, n * (n - 1) // 2)
    if m < n - 1:
        raise ValueError(f"need m >= n-1 for connectivity, got m={m}, n={n}")
    rng = random.Random(seed)
    t = random_tree(n, rng.randrange(1 << 30))
    edges = set(t.edges)
    while len(edges) < m:
        u, v = rng.sample(range(n), 2)
        edges.add((min(u, v), max(u, v)))
    return build_graph(n, edges, name=f"random_connected(n={n},m={m},seed={seed})")


def random_planar_triangulation(n: int, seed: int) -> LabelledGraph:
    """K4 grown by repeatedly splitting a random face with a new degree-3
    vertex; always a plane triangulation on n >= 4 vertices."""
    if n < 4:
        raise ValueError("random_planar_triangulation needs n >= 4")
    rng = random.Random(seed)
    edges = {(u, v) for u in range(4) for v in range(u + 1, 4)}
    faces = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    for w in range(4, n):
        i = rng.randrange(len(faces))
        a, b, c = faces.pop(i)
        edges |= {(a, w), (b, w), (c, w)}
        faces += [(a, b, w), (a, c, w), (b, c, w)]
    return build_graph(
        n, edges, name=f"random_planar_triangulation(n={n},seed={seed})"
    )


_FAMILIES = {
    "matching": (matching, ("k",)),
    "complete": (complete, ("n",)),
    "path": (path, ("n",)),
    "cycle": (cycle, ("n",)),
    "star": (star, ("n",)),
    "spider4": (spider4, ("n",)),
    "spider5": (spider5, ("q",)),
    "odd_triangulation": (odd_triangulation, ("q",)),
    "g2n": (g2n, ("n",)),
    "double_wheel": (double_wheel, ("n",)),
    "random_tree": (random_tree, ("n", "seed")),
    "random_connected": (random_connected, ("n", "m", "seed")),
    "random_planar_triangulation": (random_planar_triangulation, ("n", "seed")),
}


def generate(family: str, **params) -> LabelledGraph:
    """Build a named family member; see _FAMILIES for the accepted sizes."""
    if family not in _FAMILIES:
        raise ValueError(
            f"unknown family {family!r}; choose from {sorted(_FAMILIES)}"
        )
    fn, wanted = _FAMILIES[family]
    missing = [w for w in wanted if params.get(w) is None]
    if missing:
        raise ValueError(f"family {family!r} needs parameters {missing}")
    extra = [k for k, v in params.items() if k not in wanted and v is not None]
    if extra:
        raise ValueError(f"family {family!r} does not take {extra}")
    return fn(**{w: params[w] for w in wanted})

"""Theory-level identities validated end-to-end by the exact oracle.

These pin the global relationships the planners and bounds rely on:
the additive constants over all small hosts, the transversal/packing
refinements at p=3, the chain m/C(p,2) <= conv <= id <= m, and the
exact p=2 degeneration.
"""

import math
import random

from invdiam import families, oracle
from invdiam.core import Orientation, build_graph
from invdiam.decompositions import (
    greedy_triangle_packing,
    min_triangle_transversal,
)
from conftest import rconn, rorient, rtree


def small_hosts(seed, count, n_max=7, m_max=12):
    rng = random.Random(seed)
    for _ in range(count):
        yield rconn(rng.randint(2, n_max), rng.randint(1, m_max), rng.randrange(1 << 30))


def test_additive_constant_zero_up_to_p5():
    # id <= ceil(m / floor(p/2)) for every graph when p <= 5
    for g in small_hosts(101, 40):
        for p in (2, 3, 4, 5):
            assert oracle.diameter(g, p).value <= math.ceil(g.m / (p // 2)), (g.edges, p)


def test_additive_constant_one_up_to_p9():
    for g in small_hosts(103, 25):
        for p in (6, 7, 8, 9):
            assert oracle.diameter(g, p).value <= math.ceil(g.m / (p // 2)) + 1, (g.edges, p)


def test_unbounded_inversion_values_for_small_hosts():
    # once p >= n the cap is inert: K4 needs 3, K_{2,3} needs 2
    k4 = families.complete(4)
    for p in (4, 6, 8):
        assert oracle.diameter(k4, p).value == 3
    k23 = build_graph(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
    assert oracle.diameter(k23, 8).value == 2


def test_complete_graph_diameter_at_most_n_minus_1():
    for n in (2, 3, 4, 5):
        g = families.complete(n)
        for p in (n, n + 2):
            assert oracle.diameter(g, p).value <= n - 1


def test_transversal_refinement_at_p3():
    # id^{<=3} <= ceil((m + tau_3)/2) with the exact transversal
    for g in small_hosts(107, 25, n_max=6, m_max=11):
        tau = len(min_triangle_transversal(g, exact=True))
        assert oracle.diameter(g, 3).value <= math.ceil((g.m + tau) / 2), g.edges


def test_packing_refinement_at_p3():
    # id^{<=3} <= ceil(m/2) + nu_3 with the exact packing
    for g in small_hosts(109, 25, n_max=6, m_max=11):
        nu = len(greedy_triangle_packing(g, exact=True))
        assert oracle.diameter(g, 3).value <= math.ceil(g.m / 2) + nu, g.edges


def test_easy_chain_and_p2_equalities():
    # m/C(p,2) <= conv <= id <= m always; at p=2 everything collapses to m
    for g in small_hosts(113, 25):
        for p in (2, 3, 4):
            prof = oracle.oracle_profile(g, p)
            conv = prof.converse_number().value
            diam = prof.diameter().value
            assert math.ceil(g.m / (p * (p - 1) // 2)) <= conv <= diam <= g.m
            if p == 2:
                assert conv == diam == g.m


def test_disjoint_cliques_attain_the_pair_bound():
    # k disjoint copies of K_p reverse in exactly m / C(p,2) = k steps
    for k, p in ((2, 3), (3, 3), (2, 4)):
        edges = []
        for i in range(k):
            base = i * p
            edges += [(base + a, base + b) for a in range(p) for b in range(a + 1, p)]
        g = build_graph(k * p, edges)
        assert oracle.converse_number(g, p).value == k


def test_forest_diameter_never_exceeds_the_tree_value():
    rng = random.Random(127)
    for _ in range(20):
        t1 = rtree(rng.randint(1, 6), rng.randrange(1 << 30))
        t2 = rtree(rng.randint(1, 6), rng.randrange(1 << 30))
        edges = list(t1.edges) + [(u + t1.n, v + t1.n) for u, v in t2.edges]
        f = build_graph(t1.n + t2.n, edges)
        assert oracle.diameter(f, 3).value <= math.ceil((f.n - 1) / 2)


def test_witness_plans_are_reproducible_across_modes(monkeypatch):
    g = rconn(6, 9, 55)
    rng = random.Random(2)
    o1, o2 = rorient(g, rng), rorient(g, rng)
    first = oracle.distance(g, 4, o1, o2)
    monkeypatch.setattr(oracle, "FRONTIER_WORK_BUDGET", 0)  # force WHT layers
    second = oracle.distance(g, 4, o1, o2)
    assert first.value == second.value
    assert first.witness_plan.steps == second.witness_plan.steps
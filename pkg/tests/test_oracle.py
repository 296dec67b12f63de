import random

import pytest

from invdiam import families, oracle
from invdiam.core import Orientation, build_graph, verify_plan
from conftest import rconn, rorient, rtree


def test_generator_masks_k2():
    g = build_graph(2, [(0, 1)])
    gs = oracle.generator_masks(g, 2)
    assert gs.masks == (1,)
    assert gs.witnesses[1] == (0, 1)


def test_generator_masks_k3(k3):
    gs = oracle.generator_masks(k3, 3)
    assert sorted(k3.mask_to_string(m) for m in gs.masks) == [
        "001", "010", "100", "111",
    ]
    assert gs.witnesses[0b111] == (0, 1, 2)


def test_generator_masks_path():
    g = build_graph(3, [(0, 1), (1, 2)])
    gs = oracle.generator_masks(g, 3)
    assert sorted(g.mask_to_string(m) for m in gs.masks) == ["01", "10", "11"]


def test_generator_masks_requires_p2(k3):
    with pytest.raises(ValueError):
        oracle.generator_masks(k3, 1)


def test_generator_witnesses_are_minimal(k4):
    # K4 at p=4: six single edges, four triangles, one all-six mask
    gs = oracle.generator_masks(k4, 4)
    assert len(gs.masks) == 11
    assert gs.witnesses[k4.full_mask] == (0, 1, 2, 3)
    p4 = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    gp = oracle.generator_masks(p4, 4)
    # {0,1,3} spans the same single edge as {0,1}; the pair must win
    assert gp.witnesses[p4.edge_bit(0, 1)] == (0, 1)
    assert gp.witnesses[p4.full_mask] == (0, 1, 2, 3)


def test_distance_zero(k3):
    o = Orientation(k3, 0b101)
    assert oracle.distance(k3, 3, o, o).value == 0


def test_two_edge_reversal_on_k3_needs_two_inversions(k3):
    # reversing exactly two triangle edges takes two steps whatever p is
    o1 = Orientation(k3, 0)
    o2 = Orientation(k3, 0b011)
    for p in (6, 7, 8, 9):
        assert oracle.distance(k3, p, o1, o2).value == 2


def test_matching_converse_equals_ceiling():
    m3 = families.matching(3)
    assert oracle.converse_number(m3, 4).value == 2  # ceil(3/2)
    assert oracle.converse_number(m3, 3).value == 3  # floor(3/2)=1 per step


def test_diameter_k3(k3):
    assert oracle.diameter(k3, 3).value == 2


def test_diameter_k2():
    g = build_graph(2, [(0, 1)])
    for p in (2, 3, 5):
        assert oracle.diameter(g, p).value == 1


def test_tree_diameter_p3():
    for n in (2, 4, 5, 7, 9):
        t = rtree(n, seed=n * 17)
        assert oracle.diameter(t, 3).value == (n - 1 + 1) // 2


def test_converse_examples():
    assert oracle.converse_number(families.path(5), 3).value == 2
    assert oracle.converse_number(families.g2n(4), 3).value == 3


def test_witness_plans_are_valid():
    rng = random.Random(5)
    for _ in range(25):
        g = rconn(rng.randint(2, 8), rng.randint(1, 12), rng.randrange(999))
        p = rng.randint(2, 6)
        o1, o2 = rorient(g, rng), rorient(g, rng)
        res = oracle.distance(g, p, o1, o2)
        chk = verify_plan(g, o1, o2, res.witness_plan, p=p)
        assert chk.valid and chk.length == res.value


def test_distance_symmetry_and_translation():
    rng = random.Random(11)
    for _ in range(15):
        g = rconn(rng.randint(2, 7), rng.randint(1, 10), rng.randrange(999))
        p = rng.randint(2, 5)
        prof = oracle.oracle_profile(g, p)
        o1, o2 = rorient(g, rng), rorient(g, rng)
        z = rng.getrandbits(g.m) if g.m else 0
        d = prof.distance(o1, o2).value
        assert d == prof.distance(o2, o1).value
        assert d == prof.distance(o1.xor_bits(z), o2.xor_bits(z)).value


def test_triangle_inequality():
    rng = random.Random(13)
    g = rconn(6, 9, 42)
    prof = oracle.oracle_profile(g, 3)
    for _ in range(50):
        a, b, c = (rorient(g, rng) for _ in range(3))
        assert (
            prof.distance(a, c).value
            <= prof.distance(a, b).value + prof.distance(b, c).value
        )


def _naive_all_pairs_diameter(g, p):
    """Independent check: explicit BFS from every orientation, no Cayley
    shortcut."""
    gens = oracle.generator_masks(g, p)
    states = range(1 << g.m)
    best = 0
    for s in states:
        dist = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                for gm in gens.masks:
                    y = x ^ gm
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        assert len(dist) == 1 << g.m
        best = max(best, max(dist.values()))
    return best


def test_single_source_bfs_matches_all_pairs_on_tiny_graphs():
    rng = random.Random(3)
    for _ in range(8):
        g = rconn(rng.randint(2, 5), rng.randint(1, 6), rng.randrange(99))
        p = rng.randint(2, 4)
        assert oracle.diameter(g, p).value == _naive_all_pairs_diameter(g, p)


def test_diameter_is_max_over_random_pairs():
    # with 2^7 states, 1000 seeded pairs exhaust every disagreement mask
    rng = random.Random(7)
    g = rtree(8, 21)
    p = 3
    prof = oracle.oracle_profile(g, p)
    diam = prof.diameter().value
    seen = max(
        prof.distance(rorient(g, rng), rorient(g, rng)).value for _ in range(1000)
    )
    assert seen == diam
    assert prof.converse_number().value <= diam


def test_diameter_monotone_in_p():
    rng = random.Random(23)
    for _ in range(10):
        g = rconn(rng.randint(2, 7), rng.randint(1, 10), rng.randrange(999))
        vals = [oracle.diameter(g, p).value for p in range(2, 8)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_budget_refusal_is_explicit():
    g = families.random_tree(30, 1)  # 29 edges > default table cap
    with pytest.raises(oracle.BudgetExceeded):
        oracle.diameter(g, 3)
    with pytest.raises(oracle.BudgetExceeded):
        oracle.distance(g, 3, Orientation(g, 0), Orientation(g, 1), mitm_max_edges=20)


def test_subset_budget_refusal():
    g = families.complete(12)
    with pytest.raises(oracle.BudgetExceeded):
        oracle.generator_masks(g, 10, max_subsets=100)


def test_mitm_matches_full_bfs():
    rng = random.Random(31)
    for _ in range(10):
        g = rconn(rng.randint(3, 7), rng.randint(2, 10), rng.randrange(999))
        p = rng.randint(2, 5)
        o1, o2 = rorient(g, rng), rorient(g, rng)
        full = oracle.distance(g, p, o1, o2)
        mitm = oracle._mitm_distance(g, p, o1, o2)
        assert full.value == mitm.value
        chk = verify_plan(g, o1, o2, mitm.witness_plan, p=p)
        assert chk.valid and chk.length == mitm.value


def test_mitm_handles_beyond_table_cap():
    # 23 edges: above the 22-edge table cap, so the bidirectional mode runs;
    # meet-in-the-middle is for short distances, so disagree on two edges
    t = families.random_tree(24, 9)
    o1 = Orientation(t, 0)
    o2 = Orientation(t, (1 << 0) | (1 << 20))
    res = oracle.distance(t, 4, o1, o2, max_edges=22)
    assert res.stats["mode"] == "mitm"
    chk = verify_plan(t, o1, o2, res.witness_plan, p=4)
    assert chk.valid and chk.length == res.value
    assert res.value in (1, 2)


def test_mitm_budget_refusal_on_long_distances():
    # a full reversal of a 23-edge tree needs ~12 steps; the half-depth
    # spheres blow the state budget and the oracle must refuse loudly
    t = families.random_tree(24, 9)
    o1 = Orientation(t, 0)
    with pytest.raises(oracle.BudgetExceeded):
        oracle.distance(t, 4, o1, o1.complement(), max_edges=22)


def test_wht_mode_agrees_with_frontier_mode(monkeypatch, k3):
    rng = random.Random(37)
    g = rconn(6, 10, 77)
    gens = oracle.generator_masks(g, 4)
    t_frontier = oracle._DepthTable(g, gens)
    t_frontier.run_to_exhaustion()
    monkeypatch.setattr(oracle, "FRONTIER_WORK_BUDGET", 0)
    t_wht = oracle._DepthTable(g, gens)
    assert t_wht.mode == "wht"
    t_wht.run_to_exhaustion()
    assert (t_frontier.depth == t_wht.depth).all()

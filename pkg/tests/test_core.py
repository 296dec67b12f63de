import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invdiam.core import (
    HostMismatchError,
    InversionPlan,
    Orientation,
    apply_plan,
    build_graph,
    disagreement,
    inversion_mask,
    plan_mask_bits,
    verify_plan,
)


def test_build_graph_canonical_indexing(k3):
    assert k3.edges == ((0, 1), (0, 2), (1, 2))
    assert k3.edge_index[(0, 1)] == 0
    assert k3.edge_index[(0, 2)] == 1
    assert k3.edge_index[(1, 2)] == 2


def test_build_graph_single_edge():
    g = build_graph(2, [(0, 1)])
    assert g.m == 1 and g.n == 2


def test_build_graph_unsorted_input_normalized():
    g = build_graph(3, [(2, 1), (1, 0)])
    assert g.edges == ((0, 1), (1, 2))


def test_build_graph_rejects_self_loop():
    with pytest.raises(ValueError, match="self-loop"):
        build_graph(3, [(0, 0)])


def test_build_graph_rejects_duplicates():
    with pytest.raises(ValueError, match="duplicate"):
        build_graph(3, [(0, 1), (1, 0)])


def test_build_graph_rejects_out_of_range():
    with pytest.raises(ValueError, match="out of range"):
        build_graph(2, [(0, 2)])


def test_inversion_mask_whole_triangle(k3):
    assert inversion_mask(k3, {0, 1, 2}).to01() == "111"


def test_inversion_mask_single_arc(k3):
    # reversing one arc is the inversion of its endpoint pair
    assert inversion_mask(k3, {0, 1}).to01() == "100"


def test_inversion_mask_no_spanned_edge():
    path = build_graph(3, [(0, 1), (1, 2)])
    assert inversion_mask(path, {0, 2}).bits == 0


def test_inversion_mask_rejects_bad_vertex(k3):
    with pytest.raises(ValueError):
        inversion_mask(k3, {0, 7})


def test_apply_plan_identity(k3):
    o = Orientation(k3, 0b101)
    assert apply_plan(o, InversionPlan((), 3)) == o


def test_apply_plan_involution(k3):
    o = Orientation(k3, 0)
    plan = InversionPlan((frozenset({0, 1, 2}), frozenset({0, 1, 2})), 3)
    assert apply_plan(o, plan) == o


def test_apply_plan_xor_of_masks(k3):
    o = Orientation(k3, 0)
    plan = InversionPlan((frozenset({0, 1, 2}), frozenset({0, 1})), 3)
    # edge (0,1) reversed twice, the other two once
    assert apply_plan(o, plan).to01() == "011"


def test_disagreement(k3):
    o = Orientation(k3, 0b000)
    assert disagreement(o, o).bits == 0
    assert disagreement(o, o.complement()).to01() == "111"
    assert disagreement(o, Orientation(k3, 0b110)).to01() == "011"


def test_disagreement_host_mismatch(k3, p5):
    with pytest.raises(HostMismatchError):
        disagreement(Orientation(k3, 0), Orientation(p5, 0))


def test_verify_plan_single_edge():
    g = build_graph(2, [(0, 1)])
    o1 = Orientation(g, 0)
    chk = verify_plan(g, o1, o1.complement(), InversionPlan((frozenset({0, 1}),), 2))
    assert chk.valid and chk.length == 1


def test_verify_plan_flags_oversized_step(k3):
    o1 = Orientation(k3, 0)
    plan = InversionPlan((frozenset({0, 1, 2}),), 2)
    chk = verify_plan(k3, o1, o1.complement(), plan, p=2)
    assert not chk.valid
    assert any("size 3" in v for v in chk.violations)


def test_verify_plan_two_steps(k3):
    o1 = Orientation(k3, 0)
    o2 = Orientation(k3, 0b110)  # string "011"
    plan = InversionPlan((frozenset({0, 1, 2}), frozenset({0, 1})), 3)
    chk = verify_plan(k3, o1, o2, plan)
    assert chk.valid and chk.length == 2


def test_verify_plan_reports_residue(k3):
    o1 = Orientation(k3, 0)
    plan = InversionPlan((frozenset({0, 1}),), 3)
    chk = verify_plan(k3, o1, o1.complement(), plan)
    assert not chk.valid
    assert any("residual" in v for v in chk.violations)


# -- property tests ----------------------------------------------------------


@st.composite
def graph_and_plans(draw):
    n = draw(st.integers(min_value=1, max_value=7))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = [e for e in pairs if draw(st.booleans())]
    g = build_graph(n, edges)
    p = draw(st.integers(min_value=2, max_value=n)) if n >= 2 else 2
    subsets = st.frozensets(st.integers(min_value=0, max_value=n - 1), max_size=p)
    a = InversionPlan(tuple(draw(st.lists(subsets, max_size=4))), p)
    b = InversionPlan(tuple(draw(st.lists(subsets, max_size=4))), p)
    bits = draw(st.integers(min_value=0, max_value=g.full_mask))
    return g, Orientation(g, bits), a, b


@given(graph_and_plans())
@settings(max_examples=120, deadline=None)
def test_plan_concatenation(data):
    g, o, a, b = data
    ab = InversionPlan(a.steps + b.steps, max(a.p, b.p))
    assert apply_plan(o, ab) == apply_plan(apply_plan(o, a), b)


@given(graph_and_plans())
@settings(max_examples=120, deadline=None)
def test_net_effect_is_order_independent(data):
    g, o, a, _ = data
    rev = InversionPlan(tuple(reversed(a.steps)), a.p)
    assert disagreement(o, apply_plan(o, a)).bits == plan_mask_bits(g, a)
    assert apply_plan(o, a) == apply_plan(o, rev)


@given(graph_and_plans())
@settings(max_examples=120, deadline=None)
def test_single_step_involution(data):
    g, o, a, _ = data
    for x in a.steps:
        twice = InversionPlan((x, x), a.p)
        assert apply_plan(o, twice) == o


@given(graph_and_plans())
@settings(max_examples=120, deadline=None)
def test_mask_popcount_matches_induced_edges(data):
    g, _, a, _ = data
    for x in a.steps:
        induced = sum(1 for u, v in g.edges if u in x and v in x)
        assert inversion_mask(g, x).popcount() == induced

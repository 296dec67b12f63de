import pytest

from invdiam import families
from invdiam.procedures import is_planar


def test_matching_shape():
    g = families.matching(4)
    assert g.n == 8 and g.m == 4
    assert all(g.degree(v) == 1 for v in range(8))


def test_spider4_shape():
    g = families.spider4(10)  # s=4, eps=1
    assert g.degree(0) == 5
    assert g.m == 9
    pendant = [v for v in range(g.n) if g.degree(v) == 1 and 0 not in g.nbrs[v]]
    assert len(pendant) == 4


def test_spider5_shape():
    g = families.spider5(2)
    assert g.n == 15 and g.m == 14
    assert g.degree(0) == 2
    branches = families.spider5_branch_edges(2)
    assert len(branches) == 2 and all(len(b) == 7 for b in branches)
    assert all(g.has_edge(u, v) for b in branches for u, v in b)


def test_odd_triangulation_family():
    for q in range(1, 7):
        g = families.odd_triangulation(q)
        assert g.n == 4 * q
        assert g.m == 3 * g.n - 6
        assert all(g.degree(v) % 2 == 1 for v in range(g.n))
    assert families.odd_triangulation(1).m == 6  # K4


def test_g2n_shape():
    g = families.g2n(6)
    assert g.m == 1 + 2 * 4
    assert g.degree(0) == g.degree(1) == 5


def test_double_wheel_shape():
    g = families.double_wheel(7)
    assert g.n == 7 and g.m == 15  # 3(n-2)
    assert g.degree(5) == g.degree(6) == 5


def test_double_wheel_minimum_size():
    with pytest.raises(ValueError):
        families.double_wheel(4)


def test_random_tree_is_uniform_tree():
    for seed in range(5):
        t = families.random_tree(20, seed)
        assert t.is_tree()
    assert families.random_tree(20, 3) == families.random_tree(20, 3)
    assert families.random_tree(20, 3) != families.random_tree(20, 4)


def test_random_connected():
    g = families.random_connected(10, 20, 7)
    assert g.is_connected() and g.m == 20
    with pytest.raises(ValueError):
        families.random_connected(5, 2, 0)


def test_random_planar_triangulation():
    for seed in (0, 5):
        g = families.random_planar_triangulation(12, seed)
        assert g.m == 3 * g.n - 6
        assert is_planar(g)
    assert families.random_planar_triangulation(9, 1) == families.random_planar_triangulation(9, 1)


def test_generate_dispatch():
    g = families.generate("double_wheel", n=8)
    assert g.name == "double_wheel(n=8)"
    with pytest.raises(ValueError, match="unknown family"):
        families.generate("petersen")
    with pytest.raises(ValueError, match="needs parameters"):
        families.generate("spider5")
    with pytest.raises(ValueError, match="does not take"):
        families.generate("complete", n=4, q=2)

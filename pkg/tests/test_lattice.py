import pytest
from hypothesis import given, strategies as st

from hubbard_vha.lattice import Direction, LatticeSpec, Spin, enumerate_edges, site_index, term_groups

sizes = st.tuples(st.integers(1, 5), st.integers(1, 5))


def test_row_major_numbering():
    lat = LatticeSpec(3, 2)
    assert site_index(lat, 1, 1) == 1
    assert site_index(lat, 3, 1) == 3
    assert site_index(lat, 1, 2) == 4
    assert site_index(lat, 3, 2, Spin.DOWN) == 12
    assert site_index(lat, 2, 1, "down") == 8


@pytest.mark.parametrize("col,row", [(0, 1), (4, 1), (1, 3), (1, 0)])
def test_site_index_out_of_range(col, row):
    with pytest.raises(ValueError):
        site_index(LatticeSpec(3, 2), col, row)


@pytest.mark.parametrize("bad", [(0, 2), (2, -1)])
def test_rejects_empty_lattice(bad):
    with pytest.raises(ValueError):
        LatticeSpec(*bad)


def test_parse():
    assert LatticeSpec.parse("3x2") == LatticeSpec(3, 2)
    assert LatticeSpec.parse("3X3", U=4.0).U == 4.0
    with pytest.raises(ValueError):
        LatticeSpec.parse("3-3")


def test_2x2_groups():
    groups = term_groups(LatticeSpec(2, 2))
    assert [g.label for g in groups] == ["horizontal-odd", "horizontal-even", "vertical-odd",
                                         "vertical-even", "onsite"]
    assert [(e.j, e.jprime) for e in groups[0].edges] == [(1, 2), (3, 4)]
    assert groups[1].edges == ()
    assert [(e.j, e.jprime) for e in groups[2].edges] == [(1, 3), (2, 4)]
    assert groups[3].edges == ()
    assert groups[4].sites == (1, 2, 3, 4)


@given(sizes)
def test_edges_cover_bonds_once(size):
    lat = LatticeSpec(*size)
    edges = enumerate_edges(lat)
    c, r = size
    assert len(edges) == (c - 1) * r + c * (r - 1)
    assert len({(e.j, e.jprime) for e in edges}) == len(edges)
    for e in edges:
        assert e.j < e.jprime
        step = 1 if e.direction is Direction.HORIZONTAL else c
        assert e.jprime - e.j == step


@given(sizes)
def test_groups_partition_edges_into_matchings(size):
    lat = LatticeSpec(*size)
    groups = term_groups(lat)
    assert len(groups) == 5
    grouped = [e for g in groups[:4] for e in g.edges]
    assert sorted(grouped, key=lambda e: (e.j, e.jprime)) == sorted(enumerate_edges(lat), key=lambda e: (e.j, e.jprime))
    for g in groups[:4]:
        # disjoint bonds, so the hopping terms inside a group commute
        sites = [s for e in g.edges for s in (e.j, e.jprime)]
        assert len(sites) == len(set(sites))

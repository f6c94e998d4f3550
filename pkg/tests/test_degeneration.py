import shutil

import pytest

from braidforge.degeneration import (
    DATA_ENV,
    Dataset,
    IncidenceError,
    check_d_table,
    check_numeration,
    classify_vertices,
    data_dir,
    disjoint_sets,
    grouping_by_smaller_endpoint,
    load_dataset,
    order_lines,
    parasitic_factors,
    parasitic_pair_count,
    parse_inc,
    tetrahedron,
)


def test_numeration_rule_orders_by_larger_endpoint():
    lines = order_lines([(1, 3), (2, 3), (1, 2), (3, 4)])
    assert lines == {1: (1, 2), 2: (1, 3), 3: (2, 3), 4: (3, 4)}
    with pytest.raises(IncidenceError):
        order_lines([(1, 2), (2, 1)])


def test_magician_shape(magician):
    m = magician.model
    check_numeration(m)
    assert len(m.lines) == 24 and len(m.planes) == 16
    ks = {c.vertex: c.k for c in classify_vertices(m)}
    assert sorted(v for v, k in ks.items() if k == 4) == [5, 6]
    assert all(k == 5 for v, k in ks.items() if v not in (5, 6))


def test_every_line_bounds_two_planes(magician, pillow):
    for ds in (magician, pillow):
        assert all(len(p) == 2 for p in ds.model.adjacency.values())


def test_parasitic_pair_counts(magician, pillow):
    assert parasitic_pair_count(magician.model) == 184
    assert parasitic_pair_count(pillow.model) == 174


def test_disjoint_sets_follow_the_incidence_data(magician):
    dis = disjoint_sets(magician.model)
    assert dis[13] == [1, 3, 5, 6, 7, 8, 9, 10]
    assert dis[20][0] == 1
    assert 17 not in dis[22] and 14 in dis[22]


def test_d_table_discrepancies_are_the_known_detours(magician):
    found = {(d.t, d.p) for d in check_d_table(magician.model)}
    assert found == {(4, 1), (6, 1), (6, 3), (6, 4), (9, 4), (9, 5), (9, 6)}
    assert all(d.kind == "detour" for d in check_d_table(magician.model))


def test_pillow_d_table_is_generated(pillow):
    assert check_d_table(pillow.model) == []


def test_parasitic_blocks_regenerate_to_four_nodes_per_pair(magician):
    m = magician.model
    total = 0
    for j in m.groups:
        base = parasitic_factors(m, j, regenerate=False)
        regen = parasitic_factors(m, j)
        assert len(regen) == 4 * len(base)
        assert regen.degree == 8 * len(base)
        total += regen.degree
    assert total == 1472


def test_groups_cover_every_line_once(magician):
    lines = sorted(l for ls in magician.model.groups.values() for l in ls)
    assert lines == list(range(1, 25))


def test_grouping_by_smaller_endpoint(pillow):
    g = grouping_by_smaller_endpoint(pillow.model)
    assert {k: v for k, v in g.items() if v} == {k: v for k, v in pillow.model.groups.items() if v}


def test_block_degrees(magician):
    for j in magician.block_indices:
        assert magician.phi(j).degree == (48 if j in (5, 6) else 83)


def test_resolver(magician):
    assert magician.resolve("phi", 5) == magician.phi(5).factors
    assert len(magician.resolve("b", 1)) == 2
    with pytest.raises(KeyError):
        magician.resolve("b", 17)
    with pytest.raises(IncidenceError):
        magician.resolve("x", 1)


def test_tetrahedron_toy():
    t = tetrahedron()
    assert len(t.lines) == 6 and len(t.planes) == 4
    assert parasitic_pair_count(t) == 3
    assert all(c.k == 3 for c in classify_vertices(t))


def test_unknown_dataset():
    with pytest.raises(IncidenceError):
        load_dataset("nosuch")


def test_bad_incidence_files():
    with pytest.raises(IncidenceError):
        parse_inc("[meta]\nname = x\n")
    bad_order = "[meta]\nname=x\n[vertices]\nlist = 1 2 3\n[lines]\n1 = 1 3\n2 = 1 2\n3 = 2 3\n[planes]\nP = 1 2 3\n"
    with pytest.raises(IncidenceError):
        parse_inc(bad_order)


def test_data_directory_override(tmp_path, monkeypatch):
    for f in data_dir().iterdir():
        shutil.copy(f, tmp_path / f.name)
    monkeypatch.setenv(DATA_ENV, str(tmp_path))
    assert data_dir() == tmp_path
    assert load_dataset("magician").name == "magician"
    (tmp_path / "pillow.inc").unlink()
    with pytest.raises(IncidenceError):
        load_dataset("pillow")

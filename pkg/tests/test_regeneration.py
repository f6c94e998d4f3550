import pytest

from braidforge import regeneration as regen
from braidforge.braid import equal, permutation_of, product
from braidforge.disk import PunctureSet, path
from braidforge.factorization import Factor, Factorization, verify_bmf
from braidforge.vankampen import geometric_monodromy

K3 = PunctureSet.base(3)


def ends(fs):
    return [(f.path.start, f.path.end, f.exponent) for f in fs]


def test_branch_rule():
    fs = regen.regenerate_branch(Factor.make(path(1, 3), 1, K3))
    assert ends(fs) == [("1'", "3", 1), ("1", "3'", 1)]
    assert fs[0].ambient == PunctureSet.doubled_range(3)


def test_node_rule_modes():
    f = Factor.make(path(1, 3), 2, K3)
    assert sum(x.degree for x in regen.regenerate_node(f)) == 8
    assert ends(regen.regenerate_node(f, "i-side")) == [("1'", "3", 2), ("1", "3", 2)]
    assert ends(regen.regenerate_node(f, "j-side")) == [("1", "3'", 2), ("1", "3", 2)]
    with pytest.raises(regen.RegenerationError):
        regen.regenerate_node(f, "middle")


def test_tangent_rule_gives_three_cusps():
    fs = regen.regenerate_tangent(Factor.make(path(1, 3), 4, K3))
    assert [x.exponent for x in fs] == [3, 3, 3]
    perms = {tuple(permutation_of(x.word).cycles()) for x in fs}
    assert perms == {((1, 5),), ((1, 6),)}


def test_rules_check_their_input():
    with pytest.raises(regen.RegenerationError):
        regen.regenerate_branch(Factor.make(path(1, 2), 2, K3))
    K2 = PunctureSet.doubled_range(2)
    with pytest.raises(regen.RegenerationError):
        regen.regenerate_node(Factor.make(path(1, 2), 2, K2))


def test_written_motion_is_reversed_word():
    a, b = regen.twist(1, 2, 1, K3) + regen.twist(2, 3, 1, K3)
    assert equal(regen.W([a, b], K3), b.word * a.word)


@pytest.mark.parametrize("kind,args", [("u", (18, 4, 3, 23)), ("l", (4, 18, 23, 3)), ("m", (3, 4, 18, 23))])
def test_F_blocks_have_degree_48(kind, args):
    F = regen.build_F(kind, *args)
    assert F.degree == 48
    assert permutation_of(product(F.words(), F.n)).is_identity()


@pytest.mark.parametrize("kind,args", [("u", (18, 4, 3, 23)), ("l", (4, 18, 23, 3))])
def test_F_blocks_are_invisible_to_forgetting(kind, args):
    F = regen.build_F(kind, *args)
    assert set(regen.forgetting_degrees(F, list(args)).values()) == {0}


def test_F_ordering_preconditions():
    with pytest.raises(regen.RegenerationError):
        regen.build_F("u", 3, 4, 18, 23)
    with pytest.raises(regen.RegenerationError):
        regen.build_F("m", 18, 4, 3, 23)
    with pytest.raises(regen.RegenerationError):
        regen.build_F("l", 3, 4, 18, 23)


def test_local_bmf_from_table():
    f = regen.local_bmf(regen.prop_table())
    assert [x.degree for x in f.factors] == [2, 2, 4, 4, 2, 2, 1, 12]
    assert f.ambient.labels == ("1", "2", "3", "3'", "4", "5")


def test_extra_branch_factors():
    K = PunctureSet.doubled_range(3)
    fs = regen.extra_branch_factors({1: 2, 2: 1, 3: 0}, K)
    assert [(f.group, f.path.start, f.path.end) for f in fs] == [("b1", "2", "2'"), ("b2", "3", "3'"), ("b2", "3", "3'")]
    with pytest.raises(regen.RegenerationError):
        regen.extra_branch_factors({1: 3}, K)


def test_forgetting_split_on_pre_branch(magician):
    pre = regen.pre_branch(magician)
    audit = regen.forgetting_degrees(pre, magician.model.line_labels)
    assert sorted(i for i, d in audit.items() if d == 0) == [3, 4, 5, 6, 10, 14, 18, 23]
    assert sorted(i for i, d in audit.items() if d == 1) == [7, 8, 11, 12, 16, 17, 21, 22]
    assert all(d == 2 for i, d in audit.items() if i not in (3, 4, 5, 6, 10, 14, 18, 23, 7, 8, 11, 12, 16, 17, 21, 22))


def test_assembled_phi2(phi2):
    assert phi2.degree == 2256 == 48 * 47
    assert sum(f.degree for f in phi2.factors if f.group.startswith("b")) == 24
    r = verify_bmf(phi2)
    assert r.degree_ok and r.permutation_ok


def test_each_block_is_theta_clean(magician):
    for j in magician.block_indices:
        rep = geometric_monodromy(magician.phi(j), magician.model)
        assert rep.failures == [], j


def test_parasitic_blocks_are_theta_clean(magician):
    for j in magician.model.groups:
        if magician.model.groups[j]:
            assert geometric_monodromy(magician.C(j), magician.model).failures == []

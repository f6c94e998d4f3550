import random

import pytest

from braidforge import regeneration as regen
from braidforge.braid import BraidWord, equal
from braidforge.disk import ABOVE, BELOW, Detour, PunctureSet, path
from braidforge.dsl import DSLError, parse_dsl, print_factorization
from braidforge.factorization import Factor, Factorization


def test_single_twist_with_detour():
    f = parse_dsl("@ambient base 5\nZ2[1,4] det(2-2,above)\n")
    (x,) = f.factors
    assert x.exponent == 2 and x.path.side == BELOW
    assert x.path.detours == (Detour("2", "2", ABOVE),)


def test_bar_means_above():
    f = parse_dsl("@ambient base 3\nZbar[1,3]")
    assert f.factors[0].path.side == ABOVE


def test_pair_endpoints_expand():
    f = parse_dsl("@ambient doubled 3\nZ2[1 1',3 3'] Z[2,2']")
    assert len(f) == 5 and f.degree == 9


def test_cusp_with_pair_gives_triple():
    f = parse_dsl("@ambient doubled 3\nZ3[1,3 3']")
    assert [x.exponent for x in f.factors] == [3, 3, 3]


def test_superscript_and_subscript_conjugation():
    K = PunctureSet.base(3)
    up = parse_dsl("@ambient base 3\nZ[1,2] ^{Z[2,3]}").factors[0]
    down = parse_dsl("@ambient base 3\nZ[1,2] _{Z[2,3]}").factors[0]
    assert equal(up.word, BraidWord(3, (-2, 1, 2)))
    assert equal(down.word, BraidWord(3, (2, 1, -2)))


def test_written_motion_product_is_reversed():
    K = PunctureSet.base(4)
    fs = regen.twist(1, 2, 1, K) + regen.twist(2, 3, 1, K)
    assert equal(regen.W(fs, K), BraidWord(4, (2, 1)))
    a = parse_dsl("@ambient base 4\nZ[3,4] ^{Z[1,2] Z[2,3]}").factors[0]
    assert equal(a.word, BraidWord(4, (-1, -2, 3, 2, 1)))


def test_macro_and_group():
    f = parse_dsl("@ambient doubled 24\n@group phi5\nFu(18,4,3,23)")
    assert f.degree == 48 and {x.group for x in f.factors} == {"phi5"}


def test_references_need_a_resolver():
    with pytest.raises(DSLError):
        parse_dsl("@ambient doubled 24\nphi[5]")


def test_references_resolve(magician):
    f = parse_dsl("@ambient doubled 24\nphi[5] b[1]", magician.resolve)
    assert f.degree == 48 + 2


def test_error_positions():
    with pytest.raises(DSLError, match="line 2, column"):
        parse_dsl("@ambient base 3\nZ[1,2] Q[1,2]")
    with pytest.raises(DSLError, match="unknown directive"):
        parse_dsl("@colour red\n")
    with pytest.raises(DSLError, match="no @ambient"):
        parse_dsl("Z[1,2]")


def test_bad_labels():
    with pytest.raises(DSLError):
        parse_dsl("@ambient base 3\nZ[1,7]")


def test_comments_and_blank_lines():
    f = parse_dsl("# header\n@ambient base 3\n\nZ[1,2]  # trailing\n")
    assert len(f) == 1


def test_round_trip_on_random_factorizations():
    rng = random.Random(9)
    for _ in range(50):
        n = rng.randint(3, 7)
        K = PunctureSet.base(n)
        fs = []
        for _ in range(rng.randint(1, 6)):
            a, b = sorted(rng.sample(range(1, n + 1), 2))
            dets = [(a + 1, a + 1, ABOVE)] if b - a > 1 and rng.random() < 0.5 else []
            c = BraidWord(n, tuple(rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(rng.randint(0, 4))))
            fs.append(Factor(path(a, b, rng.choice((BELOW, ABOVE)), dets), rng.randint(1, 4), c, K, rng.choice(("", "g"))))
        f = Factorization(K, tuple(fs))
        text = print_factorization(f)
        g = parse_dsl(text)
        assert g.factors == f.factors
        assert print_factorization(g) == text


def test_round_trip_on_assembled_data(phi2):
    text = print_factorization(phi2)
    assert parse_dsl(text).factors == phi2.factors

import random

import pytest

from braidforge.braid import (
    BraidError,
    BraidWord,
    NormalFormBudgetExceeded,
    conjugate,
    degree,
    dynnikov_action,
    dynnikov_key,
    equal,
    equal_fast,
    full_twist,
    half_twist_delta,
    is_left_weighted,
    is_trivial,
    normal_form,
    permutation_of,
    product,
)


def B(n, *letters):
    return BraidWord(n, letters)


def random_word(rng, n, length):
    return BraidWord(n, tuple(rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)))


def test_letters_are_freely_reduced():
    assert B(3, 1, 2, -2, -1).letters == ()
    assert product([B(3, 1, 2), B(3, -2, 1)]).letters == (1, 1)


def test_out_of_range_generator():
    with pytest.raises(BraidError):
        B(3, 3)
    with pytest.raises(BraidError):
        B(3, 0)


def test_mixed_strand_counts_rejected():
    with pytest.raises(BraidError):
        B(3, 1) * B(4, 1)


def test_conjugate_is_w_inverse_x_w():
    assert conjugate(B(3, 1), B(3, 2)).letters == (-2, 1, 2)


def test_degree_and_full_twist():
    for n in range(2, 7):
        assert degree(full_twist(n)) == n * (n - 1)
        assert permutation_of(full_twist(n)).is_identity()


def test_permutation_of_positive_word():
    p = permutation_of(B(4, 1, 2))
    assert [p(i) for i in range(1, 5)] == [3, 1, 2, 4]


def test_braid_relations_in_normal_form():
    assert equal(B(3, 1, 2, 1), B(3, 2, 1, 2))
    assert equal(B(4, 1, 3), B(4, 3, 1))
    assert not equal(B(3, 1, 2), B(3, 2, 1))


def test_delta_squared_is_central():
    D = full_twist(4)
    for i in (1, 2, 3):
        assert equal(D * B(4, i), B(4, i) * D)


def test_delta_squared_is_square_of_garside_element():
    for n in (3, 4, 5):
        d = half_twist_delta(n)
        assert equal(d * d, full_twist(n))


def test_normal_form_is_left_weighted_and_canonical():
    rng = random.Random(7)
    for _ in range(50):
        w = random_word(rng, 5, 20)
        nf = normal_form(w)
        assert is_left_weighted(nf)
        assert normal_form(nf.to_word()) == nf


def test_normal_form_budget():
    w = full_twist(12) ** 40
    with pytest.raises(NormalFormBudgetExceeded):
        normal_form(w, budget_seconds=1e-4)


def test_dynnikov_respects_braid_relations():
    rng = random.Random(3)
    for _ in range(200):
        a = [rng.randint(-9, 9) for _ in range(5)]
        b = [rng.randint(-9, 9) for _ in range(5)]
        lhs = dynnikov_action(B(5, 2, 3, 2), a, b)
        rhs = dynnikov_action(B(5, 3, 2, 3), a, b)
        assert lhs == rhs
        assert dynnikov_action(B(5, 1, 3), a, b) == dynnikov_action(B(5, 3, 1), a, b)
        assert dynnikov_action(B(5, 2, -2), a, b) == (a, b)


def test_dynnikov_word_problem_agrees_with_normal_form():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(2, 6)
        w = random_word(rng, n, rng.randint(0, 16))
        # half of the samples are forced trivial
        if rng.random() < 0.5:
            v = random_word(rng, n, 8)
            w = v * w * w.inverse() * v.inverse()
        assert is_trivial(w) == (normal_form(w) == normal_form(BraidWord.identity(n)))


def test_dynnikov_key_separates_braids():
    assert dynnikov_key(B(3, 1, 2, 1)) == dynnikov_key(B(3, 2, 1, 2))
    assert dynnikov_key(B(3, 1)) != dynnikov_key(B(3, 2))
    assert equal_fast(B(4, 1, 3), B(4, 3, 1))

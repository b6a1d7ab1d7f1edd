import random

from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import bell_brute, orbit_classes_brute, random_desc, random_value
from singleuse.atoms import FinPermutation, identity, swap
from singleuse.pofset import (ATOMS, UNIT, AtomV, InL, InR, Pair, Prod, Sum, U, act, canon, check, count_supported,
                              decode, dim, encode, enumerate_orbit_reps, enumerate_values, normal_form, power, support)

import pytest

A = ATOMS


def pr(a, b):
    return Pair(AtomV(a), AtomV(b))


def test_check_examples():
    assert check(Prod(A, A), pr(1, 2))
    assert check(Sum(UNIT, A), InR(AtomV(5)))
    assert not check(A, U)


def test_normal_form_examples():
    assert normal_form(Prod(A, A)).arities == (2,)
    assert encode(Prod(A, A), pr(1, 2)) == (0, (1, 2))
    assert normal_form(Sum(A, Prod(A, A))).arities == (1, 2)
    d = Prod(Sum(UNIT, A), A)
    assert normal_form(d).arities == (1, 2)
    assert encode(d, Pair(InL(U), AtomV(3))) == (0, (3,))


def test_arities_match_brute_shapes():
    """Branch arities agree with the atom counts of values over a one-atom pool, grouped by shape."""
    rng = random.Random(3)
    for _ in range(40):
        d = random_desc(rng)
        shapes = sorted(len([a for a in encode(d, v)[1]]) for v in enumerate_values(d, [0]))
        assert shapes == sorted(d.arities)


def test_decode_errors():
    with pytest.raises(ValueError):
        decode(Prod(A, A), 1, (1, 2))
    with pytest.raises(ValueError):
        decode(Prod(A, A), 0, (1,))


def test_support_examples():
    assert support(pr(3, 3)) == {3}
    assert support(InL(U)) == frozenset()
    assert support(Pair(AtomV(1), pr(4, 1))) == {1, 4}


def test_dim_examples():
    assert dim(A) == 1
    assert dim(Prod(A, Sum(UNIT, A))) == 2
    assert dim(UNIT) == 0


def test_count_supported_examples():
    assert count_supported(A, {0, 1, 2}) == 3
    assert count_supported(Prod(A, Sum(UNIT, A)), {1, 2}) == 6
    assert count_supported(UNIT, set()) == 1


def test_count_supported_brute():
    rng = random.Random(5)
    for _ in range(40):
        d = random_desc(rng)
        for n in range(4):
            assert count_supported(d, range(n)) == len(list(enumerate_values(d, range(n))))


def test_orbit_reps_examples():
    assert enumerate_orbit_reps(Prod(A, A)) == [pr(0, 0), pr(0, 1)]
    assert len(enumerate_orbit_reps(Prod(A, Prod(A, A)))) == 5
    assert enumerate_orbit_reps(A, {5}) == [AtomV(5), AtomV(0)]


def test_bell_numbers():
    for k, bell in zip(range(1, 5), (1, 2, 5, 15)):
        assert len(enumerate_orbit_reps(power(A, k))) == bell == bell_brute(k)


def test_orbit_reps_match_brute_classes():
    for d, frozen in ((Prod(A, Sum(UNIT, A)), {1}), (Sum(Prod(A, A), A), set()), (power(A, 3), {0})):
        pool = sorted(set(range(d.arities and max(d.arities) + 1)) | frozen)
        classes = orbit_classes_brute(list(enumerate_values(d, pool)), frozen, pool)
        reps = enumerate_orbit_reps(d, frozen)
        assert len(reps) == len(classes)
        assert all(canon(d, r, frozen) == r for r in reps)


def test_canon_examples():
    assert canon(Prod(A, A), pr(7, 7)) == pr(0, 0)
    assert canon(Prod(A, A), pr(5, 9), {5}) == pr(5, 0)
    assert canon(Sum(UNIT, Prod(A, A)), InR(pr(4, 2))) == InR(pr(0, 1))
    with pytest.raises(TypeError):
        canon(A, U)


def test_act_examples():
    assert act(swap(1, 2), pr(1, 3)) == pr(2, 3)
    v = InR(pr(4, 4))
    assert act(identity(), v) == v
    assert act(swap(1, 2), InL(U)) == InL(U)


def test_encode_decode_round_trip():
    rng = random.Random(11)
    for _ in range(12):
        d = random_desc(rng)
        for _ in range(500):
            v = random_value(rng, d)
            assert check(d, v)
            assert decode(d, *encode(d, v)) == v


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_support_equivariant(rng):
    d = random_desc(rng)
    v = random_value(rng, d)
    xs = list(range(7))
    ys = xs[:]
    rng.shuffle(ys)
    p = FinPermutation(dict(zip(xs, ys)))
    assert support(act(p, v)) == {p(a) for a in support(v)}


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_canon_idempotent_and_orbit_constant(rng):
    d = random_desc(rng)
    v = random_value(rng, d)
    frozen = set(rng.sample(range(6), rng.randrange(3)))
    c = canon(d, v, frozen)
    assert canon(d, c, frozen) == c
    for _ in range(20):
        free = [a for a in range(10) if a not in frozen]
        img = free[:]
        rng.shuffle(img)
        p = FinPermutation(dict(zip(free, img)))
        assert canon(d, act(p, v), frozen) == c

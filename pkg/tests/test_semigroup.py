import random
from itertools import product

import pytest

from singleuse import zoo
from singleuse.pofset import ATOMS, AtomV, Pair, Prod, canon, enumerate_values
from singleuse.semigroup import (ONE, FactLeaf, FactSmooth, element_key, full, generate, h_equivalent,
                                 idempotent_power, is_idempotent, is_infix, is_prefix, is_smooth, is_suffix,
                                 j_classes, j_equivalent, j_height, j_structure, presentation, smooth_tree,
                                 validate_fact_tree, validate_presentation)

TC = zoo.three_class()
P, BOT, ID = zoo.tc_pair, zoo.TC_BOT, zoo.TC_ONE


def pattern(x):
    """Equality type of a three-class element, i.e. its orbit."""
    if x in (BOT, ID):
        return x
    return "diag" if x.v.l == x.v.r else "pair"


def test_products():
    assert TC.mul(P(1, 2), P(3, 7)) == P(1, 7)
    assert TC.mul(P(1, 2), P(2, 5)) == BOT
    for x in (P(1, 2), BOT, ID):
        assert TC.mul(ID, x) == x == TC.mul(x, ID)


def test_presentations_validate():
    for S in (TC, zoo.f_cmp_semigroup(), zoo.su_prop_semigroup(), zoo.t2_min(), unordered_pairs()):
        assert validate_presentation(S) == [], S.name
    broken = presentation(Prod(ATOMS, ATOMS), lambda cs, t: Pair(cs[0].l.r, cs[0].r.l))
    assert validate_presentation(broken)


def unordered_pairs():
    def eq_fn(cs, t):
        x, y = cs[0], cs[1]
        a, b, c, d = x.l.l, x.l.r, y.r.l, y.r.r
        e, f, g, h = cs[2].l.l, cs[2].l.r, cs[3].r.l, cs[3].r.r
        return zoo.boolv((t.eq(a, c) and t.eq(b, d)) or (t.eq(e, h) and t.eq(f, g)))

    return presentation(Prod(ATOMS, ATOMS), lambda cs, t: cs[0].l, eq_fn, eq_k=4, name="unordered")


def test_element_key():
    x = P(3, 9)
    assert element_key(TC, x) == canon(None, x)
    U2 = unordered_pairs()
    k = element_key(U2, Pair(AtomV(9), AtomV(4)))
    assert k == element_key(U2, Pair(AtomV(4), AtomV(9))) == Pair(AtomV(0), AtomV(1))
    for x in enumerate_values(U2.carrier, range(3)):
        assert element_key(U2, element_key(U2, x)) == element_key(U2, x)
        assert U2.eq(x, Pair(x.r, x.l))


def brute_closure(gens):
    elems = set(gens)
    while True:
        new = {TC.mul(x, y) for x in elems for y in elems} - elems
        if not new:
            return elems
        elems |= new


def test_generate_matches_brute_force():
    pool = range(5)
    # every pair of distinct atoms, i.e. the whole orbit of (0,1)
    oracle = {pattern(x) for x in brute_closure({P(a, b) for a in pool for b in pool if a != b})}
    got = generate(TC, [P(0, 1)])
    assert {pattern(x) for x in got.reps} == oracle == {"pair", "diag", BOT}
    assert len(got) == 3
    assert [pattern(x) for x in generate(TC, [ID]).reps] == [ID]
    diag = {pattern(x) for x in brute_closure({P(a, a) for a in pool})}
    # (a,a)(b,b) = (a,b) for a != b, so off-diagonal pairs appear too
    assert {pattern(x) for x in generate(TC, [P(4, 4)]).reps} == diag == {"pair", "diag", BOT}


def test_generate_deterministic():
    assert generate(TC, [P(0, 1)]).keys == generate(TC, [P(0, 1)]).keys


def test_idempotents():
    assert is_idempotent(TC, P(1, 2))
    assert idempotent_power(TC, P(1, 2)) == P(1, 2)
    assert not is_idempotent(TC, P(3, 3))
    assert idempotent_power(TC, P(3, 3)) == BOT
    assert idempotent_power(TC, ONE) is ONE
    assert idempotent_power(TC, ID) == ID
    t2 = zoo.t2_min()
    for x in t2.elements():
        e = idempotent_power(t2, x)
        assert is_idempotent(t2, e)


def test_infix_examples():
    assert is_infix(TC, ID, P(0, 1))
    assert TC.mul(TC.mul(P(0, 2), ID), P(3, 1)) == P(0, 1)
    assert is_infix(TC, P(0, 1), BOT)
    assert not is_infix(TC, BOT, P(0, 1))
    assert is_prefix(TC, P(0, 1), P(0, 5)) and not is_prefix(TC, P(0, 1), P(5, 1))
    assert is_suffix(TC, P(0, 1), P(5, 1)) and not is_suffix(TC, P(0, 1), P(0, 5))
    assert h_equivalent(TC, P(0, 1), P(0, 1))
    assert j_equivalent(TC, P(0, 1), P(2, 2))


def test_three_class_j_structure():
    S = full(TC)
    classes = j_classes(S)
    assert len(classes) == 3
    assert sorted(sorted(map(str, (pattern(x) for x in c))) for c in classes) == sorted(
        [[str(ID)], ["diag", "pair"], [str(BOT)]])
    assert j_height(S) == 3
    st = j_structure(S)
    assert st.height_of(ID) == 3 and st.height_of(P(5, 6)) == 2 and st.height_of(BOT) == 1


def brute_infix(S, elems, x, y):
    ones = [ONE] + elems
    return any(S.eq1(S.mul1(S.mul1(a, x), b), y) for a in ones for b in ones)


def test_atomless_green_relations_match_brute_force():
    S = zoo.t2_min()
    elems = list(S.elements())
    assert len(elems) == 8
    for x, y in product(elems, repeat=2):
        assert is_infix(S, x, y) == brute_infix(S, elems, x, y)
        assert is_prefix(S, x, y) == any(S.eq1(S.mul1(x, b), y) for b in [ONE] + elems)
        assert is_suffix(S, x, y) == any(S.eq1(S.mul1(a, x), y) for a in [ONE] + elems)


def test_infix_preorder_and_green_lemmas():
    for S in (TC, zoo.su_prop_semigroup(), zoo.f_cmp_semigroup()):
        reps = list(S.elements())
        for x in reps:
            assert is_infix(S, x, x)
            for y in S.elements(S.atoms(x)):
                if is_infix(S, S.mul(x, y), x):
                    assert is_prefix(S, S.mul(x, y), x)
                for z in S.elements(S.atoms(x) | S.atoms(y))[:20]:
                    if is_infix(S, x, y) and is_infix(S, y, z):
                        assert is_infix(S, x, z)
        # same orbit: J-equivalent or incomparable
        for x in reps:
            for y in S.elements(S.atoms(x)):
                if S.key(x, ()) == S.key(y, ()):
                    assert j_equivalent(S, x, y) or not (is_infix(S, x, y) or is_infix(S, y, x))


def test_height_one_elements_are_j_equivalent():
    for S0 in (TC, zoo.su_prop_semigroup(), zoo.t2_min()):
        S = full(S0)
        st = j_structure(S)
        low = [x for x in S.elements() if st.height_of(x) == 1]
        for x in low:
            for y in low:
                assert j_equivalent(S0, x, y)


def test_smoothness_examples():
    assert is_smooth(TC, [P(1, 2), P(3, 7), P(4, 9), P(7, 19)])
    assert not is_smooth(TC, [P(1, 3), BOT, P(2, 9), P(7, 3)])
    assert not is_smooth(TC, [P(7, 3), ID, P(4, 8)])


def test_smooth_tree_examples():
    seq = [P(1, 2), P(3, 7), P(4, 9), P(7, 19)]
    t = smooth_tree(TC, seq)
    assert isinstance(t, FactSmooth) and len(t.kids) == 4 and t.value == P(1, 19)
    assert smooth_tree(TC, [P(1, 2)]) == FactLeaf(P(1, 2))
    with pytest.raises(ValueError):
        smooth_tree(TC, [])


def test_smooth_trees_random():
    rng = random.Random(11)
    bound = 3 * j_height(full(TC)) + 2
    pool = [ID, BOT] + [P(a, b) for a in range(4) for b in range(4)]
    for _ in range(60):
        seq = [rng.choice(pool) for _ in range(rng.randint(1, 40))]
        t = smooth_tree(TC, seq)
        assert validate_fact_tree(TC, t, seq, bound) == []
        assert t.value == TC.fold(seq)


def test_validator_catches_bad_trees():
    seq = [P(1, 3), BOT]
    bad = FactSmooth((FactLeaf(P(1, 3)), FactLeaf(BOT)), BOT)
    assert validate_fact_tree(TC, bad, seq)
    wrong_value = FactSmooth((FactLeaf(P(1, 2)), FactLeaf(P(3, 4))), P(1, 2))
    assert validate_fact_tree(TC, wrong_value, [P(1, 2), P(3, 4)])

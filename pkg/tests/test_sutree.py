import random

import pytest

from helpers import multiplicities, random_desc, random_tree, random_value
from singleuse.pofset import (ATOMS, BOOL, NO, UNIT, YES, AtomV, InL, InR, Pair, Prod, Sum, U, boolv, canon,
                              enumerate_orbit_reps)
from singleuse.sutree import (BASIC_NAMES, INVERSES, Const, Leaf, MultiTree, Query, SUTree, TreeError, Var, basic,
                              compile_multi, compile_tree, compose, equivalent, fingerprint, lift_multi, product,
                              single, single_use_violations, sum_, tree_consts, validate_single_use, _walk)

A = ATOMS
A2 = Prod(A, A)


def pr(a, b):
    return Pair(AtomV(a), AtomV(b))


def eq_tree():
    return SUTree(A2, BOOL, (Query(0, Var(1), Leaf(0), Leaf(1)),))


def test_validate_examples():
    assert validate_single_use(SUTree(A2, A2, (Leaf(0, (Var(0), Var(1))),)))
    bad = SUTree(A2, A, (Query(0, Var(1), Leaf(0, (Var(0),)), Leaf(0, (Var(1),))),))
    assert not validate_single_use(bad)
    assert any("x0" in p for p in single_use_violations(bad))


def test_validate_illustrative_tree():
    # A^2 -o A + A^2: if x1 = 3 output inr(x0, 3), else inl(5) or inl(4) depending on x0 = 5
    t = SUTree(A2, Sum(A, A2), (Query(1, Const(3), Leaf(1, (Var(0), Const(3))),
                                      Query(0, Const(5), Leaf(0, (Const(5),)), Leaf(0, (Const(4),)))),))
    assert validate_single_use(t)
    assert t(pr(8, 3)) == InR(pr(8, 3))
    assert t(pr(5, 9)) == InL(AtomV(5))
    assert t(pr(4, 9)) == InL(AtomV(4))
    assert tree_consts(t) == {3, 4, 5}
    reuse = SUTree(A2, Sum(A, A2), (Query(0, Const(5), Leaf(0, (Var(1),)), Leaf(1, (Var(0), Var(1)))),))
    assert not validate_single_use(reuse)


def test_validate_leaf_typing():
    assert not validate_single_use(SUTree(A2, A, (Leaf(0, (Var(0), Var(1))),)))
    assert not validate_single_use(SUTree(A2, A, (Leaf(1, (Var(0),)),)))
    assert not validate_single_use(SUTree(A2, A, (Leaf(0, (Var(4),)),)))
    with pytest.raises(TreeError):
        SUTree(Sum(A, A), A, (Leaf(0, (Var(0),)),))


def test_eval_examples():
    assert eq_tree()(pr(4, 4)) == InL(U)
    assert eq_tree()(pr(4, 7)) == InR(U)
    assert basic("sym", A, A)(pr(1, 2)) == pr(2, 1)


def test_basic_examples():
    assert basic("const", 5)(U) == AtomV(5)
    assert basic("distr", A, A, A)(Pair(AtomV(1), InL(AtomV(2)))) == InL(pr(1, 2))
    assert basic("merge", A)(InR(AtomV(3))) == AtomV(3)
    assert basic("eq")(pr(2, 2)) == YES


def test_basic_errors():
    with pytest.raises(TreeError):
        basic("nope")
    with pytest.raises(TreeError):
        basic("const", -1)
    with pytest.raises(TreeError):
        basic("shuffle", (0, 0), A, A)


def test_every_basic_is_single_use():
    for name in BASIC_NAMES:
        if name == "const":
            t = basic(name, 2)
        elif name == "shuffle":
            t = basic(name, (2, 0, 1), A, UNIT, A2)
        elif name in ("assoc*", "coassoc*", "distr*"):
            t = basic(name, (A, UNIT), (A2, A))
        else:
            t = basic(name)
        assert validate_single_use(t), name


def test_derived_basics():
    sh = basic("shuffle", (2, 0, 1), A, A, A)
    assert sh(Pair(AtomV(1), pr(2, 3))) == Pair(AtomV(3), pr(1, 2))
    ast = basic("assoc*", (A, A), (A,))
    assert ast(Pair(pr(1, 2), AtomV(3))) == Pair(AtomV(1), pr(2, 3))
    d = basic("distr*", (A, UNIT), (UNIT, A))
    # (x0 + x1) x (y0 + y1) -> x0y0 + x0y1 + x1y0 + x1y1
    assert d(Pair(InR(U), InR(AtomV(4)))) == InR(InR(InR(Pair(U, AtomV(4)))))
    assert basic("rightDistr", A, A, UNIT)(Pair(InR(AtomV(1)), U)) == InR(Pair(AtomV(1), U))


def test_inverses_compose_to_identity():
    for f, g in INVERSES.items():
        t = basic(f)
        inv = basic(g)
        assert equivalent(compose(inv, t), basic("id", t.dom)), f
        assert equivalent(compose(t, inv), basic("id", t.cod)), f


def test_compose_examples():
    rng = random.Random(1)
    t = random_tree(rng, A2, Sum(A, UNIT))
    assert equivalent(compose(basic("id", Sum(A, UNIT)), t), t)
    assert compose(basic("proj1", A, A), basic("sym", A, A))(pr(1, 2)) == AtomV(2)
    # this g reads x0 twice, so it is compiled without the single-use check
    g = compile_tree(A2, A, lambda v, tr: v.r if tr.eq(v.l, 3) else v.l, check_single_use=False)
    assert not validate_single_use(g)
    gf = compose(g, basic("sym", A, A))
    assert gf(pr(7, 3)) == AtomV(7)
    for r in enumerate_orbit_reps(A2, {3}):
        assert gf(r) == g(basic("sym", A, A)(r))


def test_compose_type_mismatch():
    with pytest.raises(TreeError):
        compose(basic("id", A), eq_tree())


def test_product_sum_examples():
    assert product(basic("id"), basic("id"))(pr(1, 2)) == pr(1, 2)
    s = sum_(basic("const", 3), basic("id"))
    assert s(InL(U)) == InL(AtomV(3))
    assert s(InR(AtomV(8))) == InR(AtomV(8))
    pe = product(basic("eq"), basic("sym", A, A))
    assert pe(Pair(pr(4, 4), pr(1, 2))) == Pair(InL(U), pr(2, 1))


def test_lift_multi_examples():
    m = MultiTree(2, A, basic("eq"))
    assert lift_multi(m, AtomV(7)) == InL(U)
    assert lift_multi(single(basic("id")), AtomV(3)) == AtomV(3)
    two = compile_multi(A, Prod(BOOL, BOOL), 2,
                        lambda cs, t: Pair(boolv(t.eq(cs[0], 4)), boolv(t.eq(cs[1], 7))))
    assert lift_multi(two, AtomV(4)) == Pair(YES, NO)
    with pytest.raises(TreeError):
        MultiTree(2, A, basic("id"))


def test_fingerprint_examples():
    fp = fingerprint(MultiTree(1, A2, basic("eq")))
    assert fp.table == ((pr(0, 0), YES), (pr(0, 1), NO))
    flipped = SUTree(A2, BOOL, (Query(1, Var(0), Leaf(0), Leaf(1)),))
    assert fingerprint(flipped) == fingerprint(eq_tree())
    c3, c4 = basic("const", 3), basic("const", 4)
    assert fingerprint(c3, {3, 4}) != fingerprint(c4, {3, 4})
    with pytest.raises(TreeError):
        fingerprint(c3, set())


def test_equivalent_examples():
    t = eq_tree()
    assert equivalent(t, t)
    sym = basic("sym", A, A)
    assert equivalent(compose(sym, sym), basic("id", A2))
    assert not equivalent(basic("proj1", A, A), basic("proj2", A, A))


def _random_triple(rng):
    ds = [random_desc(rng, max_dim=3) for _ in range(4)]
    return [random_tree(rng, ds[i], ds[i + 1], consts=rng.choice([(0,), (0, 1)])) for i in range(3)]


def test_compose_associative():
    rng = random.Random(7)
    for _ in range(100):
        f, g, h = _random_triple(rng)
        left, right = compose(compose(h, g), f), compose(h, compose(g, f))
        frozen = f.consts | g.consts | h.consts
        assert fingerprint(left, frozen) == fingerprint(right, frozen)
        assert validate_single_use(left) and validate_single_use(right)


def test_multiplicity_bound():
    rng = random.Random(9)
    for _ in range(100):
        d, c = random_desc(rng), random_desc(rng)
        t = random_tree(rng, d, c, consts=(0, 1))
        # a constant reaches the output only through the constant slots of the chosen leaf
        slots = max((sum(isinstance(o, Const) for o in n.out) for b in t.branches for n in _walk(b)
                     if isinstance(n, Leaf)), default=0)
        for _ in range(10):
            v = random_value(rng, d)
            out, inp = multiplicities([t(v)]), multiplicities([v])
            for a, k in out.items():
                assert k <= inp.get(a, 0) + (slots if a in t.consts else 0)


def test_fingerprint_determines_function():
    rng = random.Random(13)
    for _ in range(40):
        d, c = random_desc(rng), random_desc(rng)
        t = random_tree(rng, d, c, consts=(1,))
        fp = fingerprint(t, {1})
        for _ in range(5):
            v = random_value(rng, d, atoms=range(8))
            assert fp.lookup(v) == t(v)
            assert canon(None, fp.lookup(v), {1}) == canon(None, t(v), {1})

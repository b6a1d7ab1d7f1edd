import random

import pytest

from helpers import atom_word, sep_word, words
from singleuse import zoo
from singleuse.atoms import inverse, swap
from singleuse.automata import run
from singleuse.pofset import ATOMS, NO, UNIT, AtomV, InL, InR, Sum, U, act
from singleuse.twoway import (ENTER_LEFT, EXIT_LEFT, EXIT_RIGHT, LEFT_END, LOOP, RIGHT, RIGHT_END, MalformedShape,
                              NotNormalized, RunShape, behaviour2, behaviour2_tape, compose_behaviours,
                              framed_accept, identity_table, run_acceptor, run_shape, run_transducer, step_cap,
                              untangle)

ACCEPTORS = [zoo.no_twice_two_way(), zoo.first_equals_last(), zoo.reject_all_two_way()]
LETTERS = atom_word(0, 1, 2)
SEP_LETTERS = [InL(AtomV(0)), InL(AtomV(1)), zoo.SEP]


def test_step_cap_examples():
    q = Sum(ATOMS, Sum(UNIT, UNIT))
    m = zoo._two_way("acceptor", ATOMS, q, InR(InL(U)), 1, lambda cs, s, t: InR(NO))
    assert step_cap(m, atom_word(1, 2)) == 16
    unit = zoo.reject_all_two_way()
    for n in range(5):
        assert step_cap(unit, atom_word(*range(n))) == n + 2
    assert step_cap(m, atom_word(1, 2, 3)) > step_cap(m, atom_word(1, 1, 1))


def test_reverse_and_map_dup():
    assert run_transducer(zoo.reverse_transducer(), atom_word(1, 2, 3)) == atom_word(3, 2, 1)
    md = zoo.map_dup_transducer()
    out = run_transducer(md, sep_word([1, 2, 3, "#", 5, 7, "#", 1, 2]))
    assert out == sep_word([1, 2, 3, 1, 2, 3, "#", 5, 7, 5, 7, "#", 1, 2, 1, 2])
    for w in words(LETTERS, 3):
        assert run_transducer(zoo.silent_transducer(), w) == []


def test_run_acceptor_examples():
    nt = zoo.no_twice_two_way()
    assert run_acceptor(nt, atom_word(1, 2, 1))
    assert not run_acceptor(zoo.reject_all_two_way(), atom_word(1))
    assert not run_acceptor(zoo.looping_two_way(), atom_word(1, 2))
    fel = zoo.first_equals_last()
    assert run_acceptor(fel, atom_word(4, 2, 4)) and not run_acceptor(fel, atom_word(4, 2))
    assert not run_acceptor(fel, [])


def test_two_way_no_twice_agrees_with_one_way():
    nt1, nt2 = zoo.no_twice(), zoo.no_twice_two_way()
    for w in words(LETTERS, 4):
        assert run_acceptor(nt2, w) == run(nt1, w)


def test_behaviour2_empty_word_passes_through():
    for m in ACCEPTORS:
        b = behaviour2(m, [])
        for (side, q), res in b.table:
            assert res == ((EXIT_RIGHT, q) if side == ENTER_LEFT else (EXIT_LEFT, q))


def test_framed_acceptance_matches_run():
    for m in ACCEPTORS + [zoo.looping_two_way()]:
        for w in words(LETTERS, 3):
            assert framed_accept(m, w) == run_acceptor(m, w), (m.name, w)


def test_behaviour2_equivariant():
    rng = random.Random(5)
    for m in ACCEPTORS:
        for w in words(LETTERS, 2):
            pi = swap(rng.choice([0, 1, 2]), rng.choice([7, 8]))
            b, bp = behaviour2(m, w), behaviour2(m, [act(pi, x) for x in w])
            for (side, q), res in bp.table:
                orig = b.lookup(side, act(inverse(pi), q))
                expect = orig if isinstance(orig, bool) else (orig[0], act(pi, orig[1]))
                assert expect == res


def test_compose_identity_and_homomorphism():
    for m in ACCEPTORS:
        for u in words(LETTERS, 2):
            bu = behaviour2(m, u)
            ident = identity_table(m.q, bu.frozen)
            assert compose_behaviours(ident, bu).as_dict() == bu.as_dict()
            assert compose_behaviours(bu, ident).as_dict() == bu.as_dict()
            for v in words(LETTERS, 2):
                got = compose_behaviours(bu, behaviour2(m, v))
                assert got.as_dict() == behaviour2(m, u + v).as_dict(), (m.name, u, v)


def test_compose_associative():
    m = zoo.first_equals_last()
    ws = list(words(LETTERS[:2], 2))
    for u in ws:
        for v in ws[::2]:
            for w in ws[::3]:
                bu, bv, bw = behaviour2(m, u), behaviour2(m, v), behaviour2(m, w)
                left = compose_behaviours(compose_behaviours(bu, bv), bw)
                right = compose_behaviours(bu, compose_behaviours(bv, bw))
                assert left.as_dict() == right.as_dict()


def test_one_directional_machine_crosses_once():
    m = zoo.no_twice_two_way()
    b = compose_behaviours(behaviour2(m, atom_word(1)), behaviour2(m, atom_word(2)))
    assert b.crossings == 1


def test_compose_descriptor_mismatch():
    with pytest.raises(TypeError):
        compose_behaviours(behaviour2(zoo.no_twice_two_way(), []), behaviour2(zoo.first_equals_last(), []))


def test_behaviour_needs_acceptor():
    with pytest.raises(TypeError):
        behaviour2_tape(zoo.reverse_transducer(), [])


def copy_sweep():
    def delta(cs, q, t):
        x = cs[0]
        if x == RIGHT_END:
            return zoo.FINISH
        return zoo._move(U, RIGHT, None if x == LEFT_END else x.v)

    return zoo._two_way("transducer", ATOMS, UNIT, U, 1, delta, ATOMS)


def test_run_shape_examples():
    s = run_shape(zoo.reverse_transducer(), atom_word(1, 2))
    assert s.visits == (((">", ">", None), ("<", "<", AtomV(1))), ((">", ">", None), ("<", "<", AtomV(2))))
    md = zoo.map_dup_transducer()
    s = run_shape(md, sep_word([1, "#"]))
    assert all(c <= s.bound for c in s.counts())
    s = run_shape(copy_sweep(), atom_word(4, 5, 6))
    assert s.visits == tuple(((">", ">", AtomV(a)),) for a in (4, 5, 6))


def test_run_shape_rejects_unnormalized():
    finish_anywhere = zoo.silent_transducer()
    with pytest.raises(NotNormalized):
        run_shape(finish_anywhere, atom_word(1))


def test_untangle_examples():
    a, b = AtomV(1), AtomV(2)
    assert untangle(RunShape((((">", ">", a),), ((">", ">", b),)), 1)) == [a, b]
    assert untangle(run_shape(zoo.reverse_transducer(), atom_word(1, 2))) == [b, a]
    with pytest.raises(MalformedShape):
        untangle(RunShape(((("<", "<", a),),), 1))


def test_untangle_inverts_run_shape():
    rev, md = zoo.reverse_transducer(), zoo.map_dup_transducer()
    for w in words(LETTERS, 4):
        assert untangle(run_shape(rev, w)) == run_transducer(rev, w)
    for w in words(SEP_LETTERS, 4):
        s = run_shape(md, w)
        assert all(c <= s.bound for c in s.counts())
        assert untangle(s) == run_transducer(md, w) != LOOP

import random

import pytest

from helpers import atom_word, words
from singleuse import corpus, zoo
from singleuse.atoms import swap
from singleuse.automata import (SUAutomaton, accepts_state, behaviour, behaviour_monoid, compose_behaviours,
                                equivalent, find_word, is_empty, reachable, run, step, xor_product)
from singleuse.pofset import ATOMS, BOOL, UNIT, YES, AtomV, Prod, U, act, enumerate_values
from singleuse.sutree import TreeError, compile_tree, fingerprint, equivalent as tree_equivalent, basic

NT = zoo.no_twice()


def no_twice_oracle(w):
    return all(a != b for a, b in zip(w, w[1:]))


def bundled_automata():
    return {n: corpus.bundled(n) for n in corpus.names() if isinstance(corpus.bundled(n), SUAutomaton)}


def test_run_examples():
    assert run(NT, atom_word(1, 2, 1))
    assert not run(NT, atom_word(1, 1, 2))
    for a in bundled_automata().values():
        assert run(a, []) == accepts_state(a, a.q0)


def test_run_rejects_ill_typed():
    with pytest.raises(TypeError):
        run(NT, [U])


def test_step_examples():
    assert step(NT, zoo.nt_prev(1), AtomV(1)) == zoo.NT_FAIL
    assert step(NT, zoo.NT_START, AtomV(7)) == zoo.nt_prev(7)
    assert step(NT, zoo.NT_FAIL, AtomV(3)) == zoo.NT_FAIL


def test_reachable_examples():
    assert set(reachable(NT)) == {zoo.NT_START, zoo.nt_prev(0), zoo.NT_FAIL}
    frozen_state = SUAutomaton(ATOMS, UNIT, U, 1, compile_tree(Prod(ATOMS, UNIT), UNIT, lambda v, t: v.r),
                               compile_tree(UNIT, BOOL, lambda q, t: YES))
    assert reachable(frozen_state) == [U]
    assert reachable(zoo.reject_all()) == [U]


def test_reachable_invariant_under_renaming_constants():
    a5, a7 = zoo.starts_with(5), zoo.starts_with(7)
    assert reachable(a7) == [act(swap(5, 7), s) for s in reachable(a5)]
    assert run(a7, atom_word(7, 1)) and not run(a7, atom_word(5, 1))


def test_is_empty_examples():
    assert not is_empty(NT)
    assert find_word(NT) == []
    assert is_empty(zoo.reject_all())
    sw = zoo.starts_with(5)
    assert not is_empty(sw)
    assert find_word(sw) == atom_word(5)


def test_equivalent_examples():
    assert equivalent(NT, NT)
    assert not equivalent(NT, zoo.reject_all())
    assert equivalent(NT, zoo.no_twice_permuted())
    assert not equivalent(NT, zoo.even_length())


def test_xor_product_k_and_alphabet():
    x = xor_product(NT, zoo.starts_with())
    assert x.k == NT.k + zoo.starts_with().k
    with pytest.raises((TypeError, ValueError)):
        xor_product(NT, SUAutomaton(UNIT, UNIT, U, 1, compile_tree(Prod(UNIT, UNIT), UNIT, lambda v, t: U),
                                    compile_tree(UNIT, BOOL, lambda q, t: YES)))


def test_equivalence_matches_brute_force():
    autos = list(bundled_automata().values())
    for a in autos:
        for b in autos:
            atoms = sorted({0, 1, 2, 3} | a.consts | b.consts)
            letters = list(enumerate_values(ATOMS, atoms))
            same = all(run(a, w) == run(b, w) for w in words(letters, 3))
            assert equivalent(a, b) == same, (a.name, b.name)
            x = xor_product(a, b)
            for w in words(letters[:3], 2):
                assert run(x, w) == (run(a, w) != run(b, w))


def test_run_agrees_with_behaviour():
    rng = random.Random(2)
    letters = atom_word(0, 1, 2)
    suite = list(words(letters, 4)) + [atom_word(*[rng.randrange(5) for _ in range(rng.randrange(5, 12))])
                                      for _ in range(200)]
    for w in suite:
        b = behaviour(NT, w)
        assert accepts_state(NT, b(NT.q0)) == run(NT, w) == no_twice_oracle([x.a for x in w])


def test_behaviour_examples():
    assert tree_equivalent(behaviour(NT, []).rep, basic("id", NT.q))
    b12 = behaviour(NT, atom_word(1, 2))
    composed = compose_behaviours(behaviour(NT, atom_word(2)), behaviour(NT, atom_word(1)))
    assert b12.key == fingerprint(composed.rep, composed.key.frozen)


def test_behaviour_monoid_examples():
    ev = behaviour_monoid(zoo.even_length())
    assert len(ev) == 2
    bm = behaviour_monoid(NT)
    ident = behaviour(NT, [])
    assert any(e.key == ident.key for e in bm.elements)
    for e, acc in zip(bm.elements, bm.accepting):
        assert run(NT, list(e.word)) == acc
    for e in bm.elements:
        both = compose_behaviours(e, ident)
        assert fingerprint(both.rep, e.key.frozen) == e.key


def test_automaton_validation():
    with pytest.raises(TreeError):
        SUAutomaton(ATOMS, UNIT, U, 2, NT.delta, NT.accept)
    with pytest.raises(TypeError):
        SUAutomaton(NT.sigma, NT.q, AtomV(1), NT.k, NT.delta, NT.accept)

import random

import pytest

from helpers import sep_word, words
from singleuse.pofset import ATOMS, AtomV, InL, InR, Pair, U, atoms_of
from singleuse.serialize import SchemaError, node_from_json
from singleuse.sst import (REG, Lit, RegLeaf, RegTree, RegV, RVar, SSTransducer, cat, copyless_violations,
                           equivalent_bounded, growth_bound, map_dup_sst, multiplicity_ok, reg_arities, sst, sst_run,
                           validate_sst)
from singleuse.sutree import Query, Var

MD = map_dup_sst()
LETTERS = [InL(AtomV(0)), InL(AtomV(1)), InR(U)]


def copy_sst():
    return sst(MD.sigma, MD.sigma, REG, RegV(), 1, lambda cs, q, t: cat(q, cs[0]), lambda q, t: cat(q), "copy")


def test_map_dup_runs():
    assert validate_sst(MD) == []
    assert sst_run(MD, sep_word([1, 2, 3, "#", 5, 7, "#", 1, 2])) == \
        sep_word([1, 2, 3, 1, 2, 3, "#", 5, 7, 5, 7, "#", 1, 2, 1, 2])
    assert sst_run(MD, []) == []
    assert sst_run(MD, sep_word([1, "#"])) == sep_word([1, 1, "#"])


def test_register_reuse_is_flagged():
    twice = RegTree(REG, REG, ATOMS, (RegLeaf(0, (), ((RVar(0), RVar(0)),)),))
    assert any("r0 used twice" in p for p in copyless_violations(twice))
    bad = SSTransducer(MD.sigma, MD.sigma, REG, RegV(), 1, copy_sst().delta,
                       RegTree(REG, REG, MD.sigma, (RegLeaf(0, (), ((RVar(0), RVar(0)),)),)))
    assert validate_sst(bad)
    atom_twice = RegTree(ATOMS, REG, ATOMS, (RegLeaf(0, (), ((Lit(0, (Var(0),)), Lit(0, (Var(0),))),)),))
    assert copyless_violations(atom_twice)


def test_register_queries_rejected():
    node = {"q": {"l": 0, "r": {"reg": 0}, "y": {"leaf": {"b": 0, "o": []}}, "n": {"leaf": {"b": 0, "o": []}}}}
    with pytest.raises(SchemaError, match="register"):
        node_from_json(node, regs=True)
    q = RegTree(REG, REG, ATOMS, (Query(0, RVar(0), RegLeaf(0, (), ((),)), RegLeaf(0, (), ((),))),))
    assert copyless_violations(q)


def test_growth_and_multiplicity():
    rng = random.Random(0)
    n_regs = max(reg_arities(MD.state))
    for _ in range(200):
        w = [rng.choice(LETTERS) for _ in range(rng.randint(0, 15))]
        out = sst_run(MD, w)
        assert len(out) <= growth_bound(MD, len(w)) <= n_regs * 2 * max(len(w), 1) + n_regs
        assert multiplicity_ok(MD, w, out)
        counts = {}
        for x in out:
            for a in atoms_of(x):
                counts[a] = counts.get(a, 0) + 1
        assert all(c <= MD.k * sum(a in atoms_of(x) for x in w) for a, c in counts.items())


def test_bounded_equivalence():
    assert equivalent_bounded(MD, MD, max_len=3) is None
    w = equivalent_bounded(MD, copy_sst(), max_len=3)
    assert w is not None and sst_run(MD, w) != sst_run(copy_sst(), w)
    for w in words(LETTERS, 3):
        assert sst_run(copy_sst(), w) == w


def test_construction_checks():
    with pytest.raises(TypeError):
        SSTransducer(MD.sigma, MD.sigma, MD.state, Pair(RegV([InR(U)]), Pair(RegV(), RegV())), MD.k, MD.delta,
                     MD.out)

"""Independent oracles and generators shared by the test modules."""

from __future__ import annotations

import random
from itertools import permutations, product

from singleuse.pofset import (ATOMS, UNIT, AtomV, InL, InR, Prod, Sum, U, atoms_of, decode, rename_atoms)
from singleuse.sutree import Const, Leaf, Query, SUTree, Var


def words(letters, max_len):
    for n in range(max_len + 1):
        for w in product(letters, repeat=n):
            yield list(w)


def atom_word(*xs):
    return [AtomV(x) for x in xs]


def sep_word(items, sep="#"):
    """Letters of atoms + separator from a list like [1, 2, '#', 3]."""
    return [InR(U) if x == sep else InL(AtomV(x)) for x in items]


def same_orbit(t1, t2, frozen):
    """Brute force: is there a frozen-fixing bijection mapping t1 onto t2 position-wise?"""
    if len(t1) != len(t2):
        return False
    m = {}
    for a, b in zip(t1, t2):
        if a in frozen or b in frozen:
            if a != b:
                return False
            continue
        if m.setdefault(a, b) != b:
            return False
    return len(set(m.values())) == len(m)


def set_partitions(n):
    if n == 0:
        yield []
        return
    for part in set_partitions(n - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [n - 1]] + part[i + 1:]
        yield part + [[n - 1]]


def bell_brute(k):
    """Orbits of A^k counted as equality patterns of k-tuples over k atoms."""
    seen = set()
    for t in product(range(k), repeat=k):
        first = {}
        seen.add(tuple(first.setdefault(a, len(first)) for a in t))
    return len(seen)


def orbit_classes_brute(values, frozen, atom_pool):
    """Partition ``values`` into frozen-orbits using all permutations of the pool."""
    free = [a for a in atom_pool if a not in frozen]
    classes = []
    for v in values:
        for cls in classes:
            w = cls[0]
            if any(_perm_value(v, dict(zip(free, perm))) == w for perm in permutations(free)):
                cls.append(v)
                break
        else:
            classes.append([v])
    return classes


def _perm_value(v, m):
    return rename_atoms(v, lambda a: m.get(a, a))


def random_desc(rng: random.Random, depth=2, max_dim=3):
    while True:
        d = _random_desc(rng, depth)
        if max(d.arities) <= max_dim and len(d.arities) <= 4:
            return d


def _random_desc(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([UNIT, ATOMS, ATOMS])
    l, r = _random_desc(rng, depth - 1), _random_desc(rng, depth - 1)
    return Sum(l, r) if rng.random() < 0.4 else Prod(l, r)


def random_value(rng: random.Random, d, atoms=range(6)):
    b = rng.randrange(len(d.arities))
    return decode(d, b, [rng.choice(list(atoms)) for _ in range(d.arities[b])])


def random_tree(rng: random.Random, dom, cod, consts=(0, 1), query_p=0.5, max_depth=3):
    """A random single-use tree from dom to cod; constants are drawn from ``consts``."""

    def node(k, unused, depth):
        if depth < max_depth and len(unused) >= 1 and rng.random() < query_p:
            lhs = rng.choice(sorted(unused))
            rest = unused - {lhs}
            if rest and rng.random() < 0.6:
                j = rng.choice(sorted(rest))
                rhs = Var(j)
                rest = rest - {j}
            elif consts:
                rhs = Const(rng.choice(list(consts)))
            else:
                return leaf(unused)
            return Query(lhs, rhs, node(k, rest, depth + 1), node(k, rest, depth + 1))
        return leaf(unused)

    def leaf(unused):
        candidates = [b for b, m in enumerate(cod.arities) if m <= len(unused) or consts]
        b = rng.choice(candidates)
        pool = sorted(unused)
        ops = []
        for _ in range(cod.arities[b]):
            if pool and (not consts or rng.random() < 0.75):
                v = rng.choice(pool)
                pool.remove(v)
                ops.append(Var(v))
            else:
                ops.append(Const(rng.choice(list(consts))))
        return Leaf(b, tuple(ops))

    return SUTree(dom, cod, tuple(node(k, frozenset(range(k)), 0) for k in dom.arities))


def multiplicities(w):
    out = {}
    for x in w:
        for a in atoms_of(x):
            out[a] = out.get(a, 0) + 1
    return out



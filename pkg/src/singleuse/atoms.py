"""Atoms, finite permutations and canonical renaming.

Atoms are plain non-negative ints.  The only operation the rest of the
library performs on them is equality; the numeric order is used solely as a
tie-breaker when picking canonical representatives.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

Atom = int
AtomSet = frozenset  # a finite set of atoms; serialized as a sorted list


def atom_set(atoms: Iterable[Atom] = ()) -> frozenset[Atom]:
    out = frozenset(atoms)
    for a in out:
        if not isinstance(a, int) or isinstance(a, bool) or a < 0:
            raise ValueError(f"not an atom: {a!r}")
    return out


def fresh_atoms(avoid: Iterable[Atom], n: int) -> list[Atom]:
    """The ``n`` smallest atoms that are not in ``avoid``."""
    avoid = set(avoid)
    out = []
    a = 0
    while len(out) < n:
        if a not in avoid:
            out.append(a)
        a += 1
    return out


class FinPermutation:
    """A permutation of the atoms that moves only finitely many of them."""

    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Mapping[Atom, Atom] | Iterable[tuple[Atom, Atom]] = ()):
        items = dict(mapping.items() if isinstance(mapping, Mapping) else mapping)
        m = {a: b for a, b in items.items() if a != b}
        if len(set(m.values())) != len(m) or set(m) != set(m.values()):
            raise ValueError("mapping is not a bijection on its support")
        self._map = m
        self._hash = None

    @classmethod
    def extending(cls, partial: Mapping[Atom, Atom]) -> "FinPermutation":
        """Extend an injective partial map to a permutation.

        Each maximal chain a -> p(a) -> p(p(a)) ... that leaves the domain is
        closed up by sending its last image back to its first element.
        """
        m = {a: b for a, b in partial.items()}
        if len(set(m.values())) != len(m):
            raise ValueError("partial map is not injective")
        images = set(m.values())
        starts = [a for a in m if a not in images]
        for s in starts:
            end = m[s]
            while end in m:
                end = m[end]
            m[end] = s
        return cls(m)

    def __call__(self, a: Atom) -> Atom:
        return self._map.get(a, a)

    def items(self):
        return sorted(self._map.items())

    @property
    def moved(self) -> frozenset[Atom]:
        return frozenset(self._map)

    def __eq__(self, other):
        return isinstance(other, FinPermutation) and self._map == other._map

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __repr__(self):
        if not self._map:
            return "FinPermutation()"
        return f"FinPermutation({dict(self.items())})"


IDENTITY = FinPermutation()


def identity() -> FinPermutation:
    return IDENTITY


def swap(a: Atom, b: Atom) -> FinPermutation:
    return FinPermutation({a: b, b: a})


def cycle(*atoms: Atom) -> FinPermutation:
    """The cycle a0 -> a1 -> ... -> a0."""
    atoms = list(atoms)
    return FinPermutation({a: atoms[(i + 1) % len(atoms)] for i, a in enumerate(atoms)})


def apply(p: FinPermutation, a: Atom) -> Atom:
    return p(a)


def compose(p: FinPermutation, q: FinPermutation) -> FinPermutation:
    """p after q."""
    moved = set(p.moved) | set(q.moved)
    return FinPermutation({a: p(q(a)) for a in moved})


def inverse(p: FinPermutation) -> FinPermutation:
    return FinPermutation({b: a for a, b in p.items()})


def canonical_rename(t: Sequence[Atom], frozen: Iterable[Atom] = ()) -> tuple[tuple[Atom, ...], FinPermutation]:
    """Rename the non-frozen atoms of ``t`` by first occurrence.

    Returns the renamed tuple and a permutation mapping ``t`` onto it.
    Two sequences get the same output iff some permutation fixing
    ``frozen`` maps one onto the other.
    """
    frozen = frozenset(frozen)
    supply = _fresh_iter(frozen)
    partial: dict[Atom, Atom] = {}
    out = []
    for a in t:
        if a in frozen:
            out.append(a)
            continue
        if a not in partial:
            partial[a] = next(supply)
        out.append(partial[a])
    return tuple(out), FinPermutation.extending(partial)


def _fresh_iter(avoid: frozenset[Atom]):
    a = 0
    while True:
        if a not in avoid:
            yield a
        a += 1

"""Polynomial orbit-finite sets: descriptors, values, normal forms, orbits.

A descriptor is built from ``UNIT`` and ``ATOMS`` by binary ``Sum`` and
``Prod``.  Every descriptor has a normal form A^k1 + ... + A^kn; a value is
encoded as a branch index together with a tuple of atoms.  For products the
branches are ordered left-major and the tuples are concatenated, for sums the
branch lists are concatenated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product as _cartesian
from typing import Iterable, Iterator, Sequence

from .atoms import Atom, FinPermutation, canonical_rename, fresh_atoms


class SetDesc:
    """Base class of set descriptors.  Instances are immutable and hashable."""

    __slots__ = ("arities", "_hash")
    arities: tuple[int, ...]

    def __eq__(self, other):
        return self is other or (type(self) is type(other) and self._key() == other._key())

    def __hash__(self):
        return self._hash

    def _key(self):
        return ()

    @property
    def dim(self) -> int:
        return max(self.arities)


class _Unit(SetDesc):
    __slots__ = ()

    def __init__(self):
        self.arities = (0,)
        self._hash = hash("unit")

    def __repr__(self):
        return "UNIT"


class _Atoms(SetDesc):
    __slots__ = ()

    def __init__(self):
        self.arities = (1,)
        self._hash = hash("atoms")

    def __repr__(self):
        return "ATOMS"


class Sum(SetDesc):
    __slots__ = ("left", "right")

    def __init__(self, left: SetDesc, right: SetDesc):
        self.left, self.right = left, right
        self.arities = left.arities + right.arities
        self._hash = hash(("sum", left, right))

    def _key(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Sum({self.left!r}, {self.right!r})"


class Prod(SetDesc):
    __slots__ = ("left", "right")

    def __init__(self, left: SetDesc, right: SetDesc):
        self.left, self.right = left, right
        self.arities = tuple(a + b for a in left.arities for b in right.arities)
        self._hash = hash(("prod", left, right))

    def _key(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Prod({self.left!r}, {self.right!r})"


UNIT = _Unit()
ATOMS = _Atoms()


# -- values -----------------------------------------------------------------

class Value:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class UnitV(Value):
    def __repr__(self):
        return "()"


@dataclass(frozen=True, slots=True)
class AtomV(Value):
    a: Atom

    def __repr__(self):
        return f"<{self.a}>"


@dataclass(frozen=True, slots=True)
class InL(Value):
    v: Value

    def __repr__(self):
        return f"L({self.v!r})"


@dataclass(frozen=True, slots=True)
class InR(Value):
    v: Value

    def __repr__(self):
        return f"R({self.v!r})"


@dataclass(frozen=True, slots=True)
class Pair(Value):
    l: Value
    r: Value

    def __repr__(self):
        return f"({self.l!r}, {self.r!r})"


U = UnitV()
YES = InL(U)
NO = InR(U)
BOOL = Sum(UNIT, UNIT)


def boolv(b: bool) -> Value:
    return YES if b else NO


# -- small builders -----------------------------------------------------------

def power(d: SetDesc, k: int) -> SetDesc:
    """Right-associated k-fold product d x (d x ... d)."""
    if k < 1:
        raise ValueError("power needs k >= 1")
    out = d
    for _ in range(k - 1):
        out = Prod(d, out)
    return out


def replicate(v: Value, k: int) -> Value:
    out = v
    for _ in range(k - 1):
        out = Pair(v, out)
    return out


def tuple_value(*vs: Value) -> Value:
    """Right-associated tuple (v1, (v2, ... vn))."""
    return reduce(lambda acc, v: Pair(v, acc), reversed(vs[:-1]), vs[-1])


def untuple(v: Value, n: int) -> list[Value]:
    out = []
    for _ in range(n - 1):
        out.append(v.l)
        v = v.r
    out.append(v)
    return out


def finite(n: int) -> SetDesc:
    """1 + 1 + ... + 1 with n summands (right-associated)."""
    if n < 1:
        raise ValueError("finite needs n >= 1")
    out = UNIT
    for _ in range(n - 1):
        out = Sum(UNIT, out)
    return out


def enum_value(n: int, i: int) -> Value:
    """The i-th element of ``finite(n)``."""
    if not 0 <= i < n:
        raise ValueError(f"index {i} outside finite({n})")
    return inj(n, i, U)


def enum_index(n: int, v: Value) -> int:
    i = 0
    while i < n - 1:
        if isinstance(v, InL):
            return i
        v = v.v
        i += 1
    return n - 1


def sum_of(*ds: SetDesc) -> SetDesc:
    return reduce(lambda acc, d: Sum(d, acc), reversed(ds[:-1]), ds[-1])


def inj(n: int, i: int, v: Value) -> Value:
    """Injection into the i-th summand of an n-fold right-associated sum."""
    if i == n - 1:
        out = v
    else:
        out = InL(v)
    for _ in range(min(i, n - 1)):
        out = InR(out)
    return out


def proj_inj(n: int, v: Value) -> tuple[int, Value]:
    i = 0
    while i < n - 1:
        if isinstance(v, InL):
            return i, v.v
        v = v.v
        i += 1
    return n - 1, v


# -- checking, encoding --------------------------------------------------------

def check(d: SetDesc, v: Value) -> bool:
    if d is UNIT or isinstance(d, _Unit):
        return isinstance(v, UnitV)
    if isinstance(d, _Atoms):
        return isinstance(v, AtomV) and isinstance(v.a, int) and v.a >= 0
    if isinstance(d, Sum):
        if isinstance(v, InL):
            return check(d.left, v.v)
        if isinstance(v, InR):
            return check(d.right, v.v)
        return False
    if isinstance(d, Prod):
        return isinstance(v, Pair) and check(d.left, v.l) and check(d.right, v.r)
    return _check_extra(d, v)


_EXTRA_CHECKS = []


def _check_extra(d, v):
    for fn in _EXTRA_CHECKS:
        res = fn(d, v)
        if res is not None:
            return res
    return False


@dataclass(frozen=True)
class NormalForm:
    arities: tuple[int, ...]


def normal_form(d: SetDesc) -> NormalForm:
    return NormalForm(d.arities)


def dim(d: SetDesc) -> int:
    return max(d.arities)


def encode(d: SetDesc, v: Value) -> tuple[int, tuple[Atom, ...]]:
    if isinstance(d, _Unit):
        if not isinstance(v, UnitV):
            raise TypeError(f"{v!r} is not in {d!r}")
        return 0, ()
    if isinstance(d, _Atoms):
        if not isinstance(v, AtomV):
            raise TypeError(f"{v!r} is not in {d!r}")
        return 0, (v.a,)
    if isinstance(d, Sum):
        if isinstance(v, InL):
            return encode(d.left, v.v)
        if isinstance(v, InR):
            b, t = encode(d.right, v.v)
            return b + len(d.left.arities), t
        raise TypeError(f"{v!r} is not in {d!r}")
    if isinstance(d, Prod):
        if not isinstance(v, Pair):
            raise TypeError(f"{v!r} is not in {d!r}")
        bl, tl = encode(d.left, v.l)
        br, tr = encode(d.right, v.r)
        return bl * len(d.right.arities) + br, tl + tr
    raise TypeError(f"cannot encode into {d!r}")


def decode(d: SetDesc, branch: int, t: Sequence[Atom]) -> Value:
    if not 0 <= branch < len(d.arities):
        raise ValueError(f"branch {branch} out of range for {d!r}")
    if len(t) != d.arities[branch]:
        raise ValueError(f"branch {branch} of {d!r} needs {d.arities[branch]} atoms, got {len(t)}")
    return _decode(d, branch, tuple(t))


def _decode(d, branch, t):
    if isinstance(d, _Unit):
        return U
    if isinstance(d, _Atoms):
        return AtomV(t[0])
    if isinstance(d, Sum):
        n = len(d.left.arities)
        if branch < n:
            return InL(_decode(d.left, branch, t))
        return InR(_decode(d.right, branch - n, t))
    if isinstance(d, Prod):
        bl, br = divmod(branch, len(d.right.arities))
        k = d.left.arities[bl]
        return Pair(_decode(d.left, bl, t[:k]), _decode(d.right, br, t[k:]))
    raise TypeError(f"cannot decode from {d!r}")


# -- atoms inside values ---------------------------------------------------------

def atoms_of(v: Value) -> list[Atom]:
    """Atoms of ``v`` in left-to-right order, with repetitions."""
    out: list[Atom] = []
    stack = [v]
    while stack:
        x = stack.pop()
        if isinstance(x, AtomV):
            out.append(x.a)
        elif isinstance(x, Pair):
            stack.append(x.r)
            stack.append(x.l)
        elif isinstance(x, (InL, InR)):
            stack.append(x.v)
        else:
            more = getattr(x, "children", None)
            if more is not None:
                stack.extend(reversed(more()))
    return out


def support(v: Value) -> frozenset[Atom]:
    return frozenset(atoms_of(v))


def rename_atoms(v: Value, f) -> Value:
    """Apply the atom map ``f`` to every atom of ``v``."""
    if isinstance(v, AtomV):
        return AtomV(f(v.a))
    if isinstance(v, Pair):
        return Pair(rename_atoms(v.l, f), rename_atoms(v.r, f))
    if isinstance(v, InL):
        return InL(rename_atoms(v.v, f))
    if isinstance(v, InR):
        return InR(rename_atoms(v.v, f))
    if isinstance(v, UnitV):
        return v
    mapper = getattr(v, "map_atoms", None)
    if mapper is None:
        raise TypeError(f"not a value: {v!r}")
    return mapper(f)


def act(p: FinPermutation, v: Value) -> Value:
    if not p.moved:
        return v
    return rename_atoms(v, p)


def canon(d: SetDesc | None, v: Value, frozen: Iterable[Atom] = ()) -> Value:
    """Canonical representative of the frozen-orbit of ``v``."""
    if d is not None and not check(d, v):
        raise TypeError(f"{v!r} is not in {d!r}")
    return canon_with_perm(v, frozen)[0]


def canon_with_perm(v: Value, frozen: Iterable[Atom] = ()) -> tuple[Value, FinPermutation]:
    _, p = canonical_rename(atoms_of(v), frozen)
    return act(p, v), p


def value_key(v: Value):
    """A total order on values, used only for deterministic tie-breaking."""
    if isinstance(v, UnitV):
        return (0,)
    if isinstance(v, AtomV):
        return (1, v.a)
    if isinstance(v, InL):
        return (2, value_key(v.v))
    if isinstance(v, InR):
        return (3, value_key(v.v))
    if isinstance(v, Pair):
        return (4, value_key(v.l), value_key(v.r))
    sk = getattr(v, "sort_key", None)
    if sk is None:
        raise TypeError(f"not a value: {v!r}")
    return sk()


# -- counting and enumeration --------------------------------------------------------

def count_supported(d: SetDesc, beta) -> int:
    """Number of values of ``d`` whose atoms all lie in ``beta``."""
    n = beta if isinstance(beta, int) else len(frozenset(beta))
    return sum(n ** k for k in d.arities)


def atom_patterns(k: int, frozen: Iterable[Atom] = ()) -> Iterator[tuple[Atom, ...]]:
    """One canonical k-tuple per frozen-orbit of A^k.

    At each position the choices are, in order: the frozen atoms (ascending),
    the fresh atoms used so far, and one new fresh atom.
    """
    fz = sorted(set(frozen))
    supply = fresh_atoms(fz, k)

    def go(prefix, used):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for a in fz:
            yield from go(prefix + [a], used)
        for a in supply[:used]:
            yield from go(prefix + [a], used)
        if used < k:
            yield from go(prefix + [supply[used]], used + 1)

    yield from go([], 0)


def enumerate_orbit_reps(d: SetDesc, frozen: Iterable[Atom] = ()) -> list[Value]:
    frozen = tuple(sorted(set(frozen)))
    return list(_orbit_reps_cached(d, frozen))


_REPS_CACHE: dict = {}


def _orbit_reps_cached(d, frozen):
    key = (d, frozen)
    hit = _REPS_CACHE.get(key)
    if hit is None:
        hit = tuple(decode(d, b, t) for b, k in enumerate(d.arities) for t in atom_patterns(k, frozen))
        if len(_REPS_CACHE) > 4096:
            _REPS_CACHE.clear()
        _REPS_CACHE[key] = hit
    return hit


def enumerate_values(d: SetDesc, atoms: Iterable[Atom]) -> Iterator[Value]:
    """Every value of ``d`` built from the given atoms (brute force)."""
    atoms = sorted(set(atoms))
    for b, k in enumerate(d.arities):
        for t in _cartesian(atoms, repeat=k):
            yield decode(d, b, t)

"""Orbit-finite semigroups: products, generated subsemigroups, Green's relations
and smooth factorization trees.

Every semigroup here is equivariant with respect to permutations that fix a
finite set of constants.  Quantifiers over elements are turned into finite
searches by enumerating one element per orbit relative to a suitable finite
set of atoms: if x and y are fixed, then a witness a of ``a x b = y`` may be
moved by any permutation fixing supp(x), supp(y) and the constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .atoms import Atom, FinPermutation, fresh_atoms, swap
from .pofset import (BOOL, YES, Pair, Prod, SetDesc, Value, act, canon,
                     enumerate_orbit_reps, support, value_key)
from .sutree import MultiTree, TreeError, compile_multi, lift_multi


class _One:
    """The formal identity adjoined to a semigroup."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ONE"


ONE = _One()


class Semigroup:
    """Interface shared by presentations and semigroups of functions."""

    consts: frozenset[Atom] = frozenset()

    def mul(self, x, y):
        raise NotImplementedError

    def eq(self, x, y) -> bool:
        return x == y

    def atoms(self, x) -> frozenset[Atom]:
        """A superset of the least support of x (cheap)."""
        return self.support(x)

    def support(self, x) -> frozenset[Atom]:
        raise NotImplementedError

    def act(self, p: FinPermutation, x):
        raise NotImplementedError

    def key(self, x, frozen: Iterable[Atom]):
        """Equal for x and y iff some frozen-permutation maps the class of x to that of y."""
        raise NotImplementedError

    def elements(self, frozen: Iterable[Atom]) -> list:
        """At least one element from every (consts + frozen)-orbit."""
        raise NotImplementedError

    def pair_key(self, x, y):
        """Cache key for equivariant relations of pairs, or None."""
        return None

    # lifted to the adjoined identity
    def mul1(self, x, y):
        if x is ONE:
            return y
        if y is ONE:
            return x
        return self.mul(x, y)

    def eq1(self, x, y) -> bool:
        if x is ONE or y is ONE:
            return x is y
        return self.eq(x, y)

    def fold(self, xs: Sequence):
        if not xs:
            return ONE
        out = xs[0]
        for x in xs[1:]:
            out = self.mul(out, x)
        return out


@dataclass(eq=False)
class SemigroupPresentation(Semigroup):
    """A semigroup whose elements are values of ``carrier``.

    ``product`` has type carrier x carrier -o_k carrier and ``eq_tree`` (when
    given) decides when two values stand for the same element.
    """

    carrier: SetDesc
    product: MultiTree
    eq_tree: MultiTree | None = None
    name: str = ""
    extra_consts: frozenset[Atom] = frozenset()
    _eq_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        pair = Prod(self.carrier, self.carrier)
        if self.product.dom0 != pair or self.product.cod != self.carrier:
            raise TreeError("product must have type carrier x carrier -o carrier")
        if self.eq_tree is not None and (self.eq_tree.dom0 != pair or self.eq_tree.cod != BOOL):
            raise TreeError("equality must have type carrier x carrier -o 1+1")
        self.consts = frozenset(self.product.consts | (self.eq_tree.consts if self.eq_tree else frozenset())
                                | self.extra_consts)

    @property
    def structural(self) -> bool:
        return self.eq_tree is None

    def mul(self, x, y):
        return lift_multi(self.product, Pair(x, y))

    def eq(self, x, y) -> bool:
        if self.eq_tree is None:
            return x == y
        return lift_multi(self.eq_tree, Pair(x, y)) == YES

    def atoms(self, x):
        return support(x)

    def support(self, x):
        if self.eq_tree is None:
            return support(x)
        atoms = support(x)
        d = fresh_atoms(atoms | self.consts, 1)[0]
        return frozenset(c for c in atoms if c in self.consts or not self.eq(x, act(swap(c, d), x)))

    def act(self, p, x):
        return act(p, x)

    def key(self, x, frozen=()):
        return element_key(self, x, frozen)

    def elements(self, frozen=()):
        return enumerate_orbit_reps(self.carrier, frozenset(frozen) | self.consts)

    def pair_key(self, x, y):
        return canon(None, Pair(x, y), self.consts)


def presentation(carrier: SetDesc, mul_fn, eq_fn=None, *, k: int = 1, eq_k: int = 1, name: str = "",
                 consts: Iterable[Atom] = ()) -> SemigroupPresentation:
    """Build a presentation from traced Python functions of (x, y, tracer)."""
    pair = Prod(carrier, carrier)
    product = compile_multi(pair, carrier, k, lambda cs, t: mul_fn(cs, t))
    eq_tree = None
    if eq_fn is not None:
        eq_tree = compile_multi(pair, BOOL, eq_k, lambda cs, t: eq_fn(cs, t))
    return SemigroupPresentation(carrier, product, eq_tree, name, frozenset(consts))


def element_key(S: SemigroupPresentation, x: Value, frozen: Iterable[Atom] = ()):
    """Least canonical form, relative to frozen, over the members of the class of x."""
    frozen = frozenset(frozen) | S.consts
    if S.structural:
        return canon(None, x, frozen)
    best = None
    for y in enumerate_orbit_reps(S.carrier, frozen | S.support(x)):
        if S.eq(x, y):
            c = canon(None, y, frozen)
            if best is None or value_key(c) < value_key(best):
                best = c
    return best


# -- placements ----------------------------------------------------------------------------

def placements(atoms: Iterable[Atom], frozen: Iterable[Atom], consts: Iterable[Atom] = ()) -> list[FinPermutation]:
    """Permutations fixing ``consts`` that realise every way of placing ``atoms``
    relative to ``frozen``: each atom goes to a distinct frozen atom or to a fresh one.
    """
    consts = frozenset(consts)
    frozen = frozenset(frozen) | consts
    src = sorted(frozenset(atoms) - consts)
    targets = sorted(frozen - consts)
    fresh = fresh_atoms(frozen | frozenset(src), len(src))
    out = []
    for j in range(min(len(src), len(targets)) + 1):
        for chosen in combinations(range(len(src)), j):
            for img in permutations(targets, j):
                m = dict(zip((src[i] for i in chosen), img))
                rest = [a for i, a in enumerate(src) if i not in chosen]
                m.update(zip(rest, fresh))
                out.append(FinPermutation.extending(m))
    return out


@dataclass(eq=False)
class Generated(Semigroup):
    """A subsemigroup given by one representative per consts-orbit."""

    base: Semigroup
    reps: list
    keys: list
    extra_consts: frozenset = frozenset()

    def __post_init__(self):
        self.consts = self.base.consts | frozenset(self.extra_consts)
        self._index = {k: i for i, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.reps)

    def mul(self, x, y):
        return self.base.mul(x, y)

    def eq(self, x, y):
        return self.base.eq(x, y)

    def atoms(self, x):
        return self.base.atoms(x)

    def support(self, x):
        return self.base.support(x)

    def act(self, p, x):
        return self.base.act(p, x)

    def key(self, x, frozen=()):
        return self.base.key(x, frozenset(frozen) | self.consts)

    def pair_key(self, x, y):
        return self.base.pair_key(x, y)

    def index_of(self, x) -> int:
        """Position of the representative of the orbit of x."""
        return self._index[self.base.key(x, self.consts)]

    def elements(self, frozen=()):
        frozen = frozenset(frozen) | self.consts
        out = []
        for r in self.reps:
            for p in placements(self.base.atoms(r), frozen, self.consts):
                out.append(self.base.act(p, r))
        return out


def generate(S: Semigroup, gens: Iterable, limit: int = 5000, consts: Iterable[Atom] = ()) -> Generated:
    """Closure of the orbits of ``gens`` under the product.

    Orbits are taken relative to the constants of S together with ``consts``.
    """
    consts = S.consts | frozenset(consts)
    reps: list = []
    keys: list = []
    index: dict = {}
    todo: list = []

    def add(x):
        k = S.key(x, consts)
        if k not in index:
            if isinstance(S, SemigroupPresentation) and S.structural:
                x = k
            index[k] = len(reps)
            reps.append(x)
            keys.append(k)
            todo.append(x)
            if len(reps) > limit:
                raise RuntimeError("subsemigroup saturation did not converge")

    for g in gens:
        add(g)
    while todo:
        x = todo.pop(0)
        ax = S.atoms(x)
        for y in list(reps):
            for p in placements(S.atoms(y), consts | ax, consts):
                y2 = S.act(p, y)
                add(S.mul(x, y2))
                add(S.mul(y2, x))
    return Generated(S, reps, keys, consts)


def full(S: SemigroupPresentation) -> Generated:
    """The whole carrier as a generated semigroup."""
    return generate(S, S.elements(()))


# -- idempotents ------------------------------------------------------------------------------

def is_idempotent(S: Semigroup, e) -> bool:
    if e is ONE:
        return True
    return S.eq(S.mul(e, e), e)


def idempotent_power(S: Semigroup, x, limit: int = 10_000):
    """The idempotent among the powers of x."""
    if x is ONE:
        return ONE
    frozen = S.consts | S.atoms(x)
    powers = [x]
    seen = {S.key(x, frozen): 0}
    while True:
        nxt = S.mul(powers[-1], x)
        k = S.key(nxt, frozen)
        if k in seen:
            start = seen[k]
            break
        seen[k] = len(powers)
        powers.append(nxt)
        if len(powers) > limit:
            raise RuntimeError("no repeat among the powers")
    for p in powers[start:]:
        if is_idempotent(S, p):
            return p
    raise AssertionError("cycle without an idempotent")


# -- Green's relations -------------------------------------------------------------------------

def _atoms1(S, x):
    return frozenset() if x is ONE else S.atoms(x)


def _witnesses(S, frozen):
    return [ONE] + list(S.elements(frozen))


_GREEN_CACHE: dict = {}


def _cached(S, kind, x, y, compute):
    pk = S.pair_key(x, y) if x is not ONE and y is not ONE else None
    if pk is None:
        return compute()
    key = (id(S), kind, pk)
    hit = _GREEN_CACHE.get(key)
    if hit is None:
        hit = compute()
        if len(_GREEN_CACHE) > 200_000:
            _GREEN_CACHE.clear()
        _GREEN_CACHE[key] = hit
    return hit


def is_prefix(S: Semigroup, x, y) -> bool:
    """Whether x b = y for some b in S^1."""

    def compute():
        frozen = S.consts | _atoms1(S, x) | _atoms1(S, y)
        return any(S.eq1(S.mul1(x, b), y) for b in _witnesses(S, frozen))

    return _cached(S, "prefix", x, y, compute)


def is_suffix(S: Semigroup, x, y) -> bool:
    """Whether a x = y for some a in S^1."""

    def compute():
        frozen = S.consts | _atoms1(S, x) | _atoms1(S, y)
        return any(S.eq1(S.mul1(a, x), y) for a in _witnesses(S, frozen))

    return _cached(S, "suffix", x, y, compute)


def is_infix(S: Semigroup, x, y) -> bool:
    """Whether a x b = y for some a, b in S^1."""

    def compute():
        frozen = S.consts | _atoms1(S, x) | _atoms1(S, y)
        for a in _witnesses(S, frozen):
            ax = S.mul1(a, x)
            if S.eq1(ax, y):
                return True
            for b in _witnesses(S, frozen | _atoms1(S, a)):
                if b is not ONE and S.eq1(S.mul1(ax, b), y):
                    return True
        return False

    return _cached(S, "infix", x, y, compute)


def j_equivalent(S: Semigroup, x, y) -> bool:
    return is_infix(S, x, y) and is_infix(S, y, x)


def h_equivalent(S: Semigroup, x, y) -> bool:
    return is_prefix(S, x, y) and is_prefix(S, y, x) and is_suffix(S, x, y) and is_suffix(S, y, x)


@dataclass
class JStructure:
    """J-classes of a generated semigroup at the level of orbits."""

    S: Generated
    classes: list[list[int]]  # indices into S.reps
    class_of: list[int]  # rep index -> class index
    heights: list[int]  # per class; minimal classes have height 1

    @property
    def height(self) -> int:
        return max(self.heights) if self.heights else 0

    def height_of(self, x) -> int:
        return self.heights[self.class_of[self.S.index_of(x)]]


def _orbit_related(S: Generated, i: int, j: int, rel) -> bool:
    """Whether rel(r_i, y) holds for some y in the orbit of r_j."""
    ri, rj = S.reps[i], S.reps[j]
    for p in placements(S.atoms(rj), S.consts | S.atoms(ri), S.consts):
        if rel(ri, S.act(p, rj)):
            return True
    return False


def j_structure(S: Generated) -> JStructure:
    n = len(S.reps)
    class_of = [-1] * n
    classes: list[list[int]] = []
    for i in range(n):
        if class_of[i] >= 0:
            continue
        class_of[i] = len(classes)
        cls = [i]
        for j in range(i + 1, n):
            if class_of[j] < 0 and _orbit_related(S, i, j, lambda a, b: j_equivalent(S, a, b)):
                class_of[j] = class_of[i]
                cls.append(j)
        classes.append(cls)
    m = len(classes)
    # below[c] = classes strictly lower than c (reached by multiplying)
    below = [set() for _ in range(m)]
    for c in range(m):
        ri = classes[c][0]
        for d in range(m):
            if d != c and _orbit_related(S, ri, classes[d][0], lambda a, b: is_infix(S, a, b)):
                below[c].add(d)
    heights = [0] * m

    def h(c, stack=()):
        if heights[c]:
            return heights[c]
        if c in stack:
            raise AssertionError("infix order has a cycle between distinct classes")
        heights[c] = 1 + max((h(d, stack + (c,)) for d in below[c]), default=0)
        return heights[c]

    for c in range(m):
        h(c)
    return JStructure(S, classes, class_of, heights)


def j_classes(S: Generated) -> list[list]:
    st = j_structure(S)
    return [[S.reps[i] for i in cls] for cls in st.classes]


def j_height(S: Generated) -> int:
    return j_structure(S).height


# -- smoothness and factorization trees ----------------------------------------------------------

def is_smooth(S: Semigroup, seq: Sequence) -> bool:
    """Every consecutive product is J-equivalent to both of its factors."""
    for a, b in zip(seq, seq[1:]):
        ab = S.mul1(a, b)
        if not (j_equivalent(S, ab, a) and j_equivalent(S, ab, b)):
            return False
    return True


@dataclass(frozen=True)
class FactLeaf:
    value: object

    def height(self) -> int:
        return 0

    def leaves(self):
        return [self.value]

    @property
    def children(self):
        return ()


@dataclass(frozen=True)
class FactUnary:
    child: object
    value: object

    def height(self) -> int:
        return 1 + self.child.height()

    def leaves(self):
        return self.child.leaves()

    @property
    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class FactBinary:
    left: object
    right: object
    value: object

    def height(self) -> int:
        return 1 + max(self.left.height(), self.right.height())

    def leaves(self):
        return self.left.leaves() + self.right.leaves()

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class FactSmooth:
    kids: tuple
    value: object

    def height(self) -> int:
        return 1 + max(c.height() for c in self.kids)

    def leaves(self):
        return [x for c in self.kids for x in c.leaves()]

    @property
    def children(self):
        return self.kids


FactTree = FactLeaf | FactUnary | FactBinary | FactSmooth


def _binary(S, l, r):
    return FactBinary(l, r, S.mul(l.value, r.value))


def _smooth(S, kids):
    if len(kids) == 1:
        return kids[0]
    return FactSmooth(tuple(kids), S.fold([k.value for k in kids]))


def smooth_tree(S: Semigroup, seq: Sequence) -> FactTree:
    """A factorization tree whose inner nodes are binary or smooth.

    Each round cuts the sequence into maximal smooth runs, each closed by the
    element that breaks smoothness.  A run times its breaker is strictly lower
    in the J-order than the highest element involved, so the rounds stop after
    at most J-height many steps.
    """
    if not seq:
        raise ValueError("empty sequence")
    return _build(S, [FactLeaf(x) for x in seq])


def _build(S, nodes):
    if len(nodes) == 1:
        return nodes[0]
    values = [n.value for n in nodes]
    if is_smooth(S, values):
        return _smooth(S, nodes)
    blocks = []
    tail = None
    i = 0
    while i < len(nodes):
        j = i + 1
        while j < len(nodes) and is_smooth(S, values[i:j + 1]):
            j += 1
        run = _smooth(S, nodes[i:j])
        if j < len(nodes):
            blocks.append(_binary(S, run, nodes[j]))
            i = j + 1
        else:
            tail = run
            i = j
    rec = _build(S, blocks)
    return rec if tail is None else _binary(S, rec, tail)


def validate_fact_tree(S: Semigroup, tree: FactTree, seq: Sequence, bound: int | None = None) -> list[str]:
    """Problems with a factorization tree of ``seq``; empty when valid."""
    problems = []
    leaves = tree.leaves()
    if len(leaves) != len(seq) or not all(S.eq(a, b) for a, b in zip(leaves, seq)):
        problems.append("leaves do not spell the sequence")

    def visit(n, path):
        if isinstance(n, FactLeaf):
            return
        vals = [c.value for c in n.children]
        if not S.eq(S.fold(vals), n.value):
            problems.append(f"node {path}: value is not the product of its children")
        if isinstance(n, FactSmooth) and (len(vals) < 2 or not is_smooth(S, vals)):
            problems.append(f"node {path}: smooth node with a non-smooth sequence of children")
        for i, c in enumerate(n.children):
            visit(c, path + (i,))

    visit(tree, ())
    if bound is not None and tree.height() > bound:
        problems.append(f"height {tree.height()} exceeds {bound}")
    return problems


# -- validation of presentations ----------------------------------------------------------------

def validate_presentation(S: SemigroupPresentation) -> list[str]:
    """Check associativity modulo eq and that eq is a congruence, on orbit representatives."""
    problems = []
    c = S.consts
    reps = S.elements(())
    if S.eq_tree is not None:
        for x in reps:
            if not S.eq(x, x):
                problems.append(f"eq not reflexive at {x!r}")
        for x in reps:
            for y in S.elements(S.atoms(x)):
                if S.eq(x, y) != S.eq(y, x):
                    problems.append(f"eq not symmetric at {x!r}, {y!r}")
    for x in reps:
        for y in S.elements(S.atoms(x)):
            for z in S.elements(S.atoms(x) | S.atoms(y)):
                if not S.eq(S.mul(S.mul(x, y), z), S.mul(x, S.mul(y, z))):
                    problems.append(f"not associative at {x!r}, {y!r}, {z!r}")
                    return problems
    if S.eq_tree is not None:
        for x in reps:
            for y in S.elements(S.atoms(x)):
                if not S.eq(x, y):
                    continue
                for z in S.elements(S.atoms(x) | S.atoms(y) | c):
                    if not (S.eq(S.mul(x, z), S.mul(y, z)) and S.eq(S.mul(z, x), S.mul(z, y))):
                        problems.append(f"eq is not a congruence at {x!r}, {y!r}, {z!r}")
                        return problems
    return problems

"""Single-use decision trees.

A tree for a function A^k -> Y asks equality queries about the input
variables x0..x(k-1) and constants, and ends in a leaf naming a branch of the
normal form of Y together with the operands used to fill its atoms.  The
single-use restriction says that a variable may be mentioned at most once on
every root-to-leaf path.  An ``SUTree`` holds one such tree per branch of
the normal form of its domain.

Trees are usually written as ordinary Python functions and traced into tree
form by ``compile_tree``: the function receives a value whose atoms are
symbolic and asks equality questions through the tracer it is handed.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Iterable, Sequence

from .atoms import Atom, FinPermutation, fresh_atoms, inverse, swap
from .pofset import (ATOMS, BOOL, UNIT, AtomV, InL, InR, Pair, Prod, SetDesc, Sum, U, Value, act,
                     boolv, canon_with_perm, check, decode, encode, enumerate_orbit_reps, inj,
                     power, proj_inj, rename_atoms, replicate, untuple, value_key)


class TreeError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Var:
    i: int

    def __repr__(self):
        return f"x{self.i}"


@dataclass(frozen=True, slots=True)
class Const:
    a: Atom

    def __repr__(self):
        return f"'{self.a}"


Operand = Var | Const


@dataclass(frozen=True, slots=True)
class Query:
    lhs: int
    rhs: Operand
    yes: "TupleTree"
    no: "TupleTree"


@dataclass(frozen=True, slots=True)
class Leaf:
    branch: int
    out: tuple[Operand, ...] = ()


TupleTree = Query | Leaf


@dataclass(frozen=True)
class SUTree:
    dom: SetDesc
    cod: SetDesc
    branches: tuple[TupleTree, ...]

    def __post_init__(self):
        if len(self.branches) != len(self.dom.arities):
            raise TreeError(f"need {len(self.dom.arities)} branch trees, got {len(self.branches)}")

    def __call__(self, v: Value) -> Value:
        return eval_tree(self, v)

    @property
    def consts(self) -> frozenset[Atom]:
        return tree_consts(self)


# -- inspection -------------------------------------------------------------------

def _walk(node: TupleTree):
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, Query):
            stack.append(n.no)
            stack.append(n.yes)


def tree_consts(t: SUTree) -> frozenset[Atom]:
    out = set()
    for b in t.branches:
        for n in _walk(b):
            if isinstance(n, Query):
                if isinstance(n.rhs, Const):
                    out.add(n.rhs.a)
            else:
                out.update(o.a for o in n.out if isinstance(o, Const))
    return frozenset(out)


def size(t: SUTree) -> int:
    return sum(1 for b in t.branches for _ in _walk(b))


def depth(node: TupleTree) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(depth(node.yes), depth(node.no))


def validate_single_use(t: SUTree) -> bool:
    return not single_use_violations(t)


def single_use_violations(t: SUTree) -> list[str]:
    """Describe every problem found; an empty list means the tree is fine."""
    problems: list[str] = []
    cod_ar = t.cod.arities
    for bi, root in enumerate(t.branches):
        k = t.dom.arities[bi]

        def visit(node, used, path):
            if isinstance(node, Query):
                names = [node.lhs] + ([node.rhs.i] if isinstance(node.rhs, Var) else [])
                for i in names:
                    if not 0 <= i < k:
                        problems.append(f"branch {bi} path {path}: variable x{i} out of range")
                    elif i in used or names.count(i) > 1:
                        problems.append(f"branch {bi} path {path}: x{i} used twice")
                u = used | set(names)
                visit(node.yes, u, path + "y")
                visit(node.no, u, path + "n")
                return
            if not 0 <= node.branch < len(cod_ar):
                problems.append(f"branch {bi} path {path}: leaf branch {node.branch} out of range")
                return
            if len(node.out) != cod_ar[node.branch]:
                problems.append(f"branch {bi} path {path}: leaf arity {len(node.out)} != {cod_ar[node.branch]}")
            seen = set(used)
            for o in node.out:
                if isinstance(o, Var):
                    if not 0 <= o.i < k:
                        problems.append(f"branch {bi} path {path}: variable x{o.i} out of range")
                    elif o.i in seen:
                        problems.append(f"branch {bi} path {path}: x{o.i} used twice")
                    seen.add(o.i)

        visit(root, frozenset(), "")
    return problems


# -- evaluation ----------------------------------------------------------------------

def eval_node(node: TupleTree, t: Sequence[Atom]) -> tuple[int, tuple[Atom, ...]]:
    while isinstance(node, Query):
        r = node.rhs
        b = t[r.i] if isinstance(r, Var) else r.a
        node = node.yes if t[node.lhs] == b else node.no
    return node.branch, tuple(t[o.i] if isinstance(o, Var) else o.a for o in node.out)


def eval_tree(tr: SUTree, v: Value) -> Value:
    try:
        b, t = encode(tr.dom, v)
    except TypeError as e:
        raise TypeError(f"input {v!r} does not belong to {tr.dom!r}") from e
    cb, ct = eval_node(tr.branches[b], t)
    return decode(tr.cod, cb, ct)


# -- tracing compiler ------------------------------------------------------------------

class Sym:
    """A symbolic input variable used while tracing."""

    __slots__ = ("i",)

    def __init__(self, i: int):
        self.i = i

    def __repr__(self):
        return f"?{self.i}"


class _NeedChoice(Exception):
    def __init__(self, lhs: int, rhs: Operand):
        self.lhs, self.rhs = lhs, rhs


def _unwrap(x):
    return x.a if isinstance(x, AtomV) else x


class Tracer:
    """Answers equality questions.  Symbolic while compiling, concrete otherwise."""

    def __init__(self, choices: Sequence[bool] | None = None):
        self._choices = choices
        self._pos = 0

    def eq(self, x, y) -> bool:
        x, y = _unwrap(x), _unwrap(y)
        if self._choices is None:
            return x == y
        xs, ys = isinstance(x, Sym), isinstance(y, Sym)
        if not xs and not ys:
            return x == y
        if xs and ys and x.i == y.i:
            return True
        if not xs:
            x, y = y, x
        if self._pos < len(self._choices):
            c = self._choices[self._pos]
            self._pos += 1
            return c
        rhs = Var(y.i) if isinstance(y, Sym) else Const(y)
        raise _NeedChoice(x.i, rhs)

    def member(self, x, atoms: Iterable) -> bool:
        """Whether x equals one of ``atoms``; asks one query per candidate."""
        return any(self.eq(x, a) for a in atoms)


CONCRETE = Tracer(None)

TraceFn = Callable[[Value, Tracer], Value]


def compile_tree(dom: SetDesc, cod: SetDesc, fn: TraceFn, *, check_single_use: bool = True,
                 guard: Callable[[Value], bool] | None = None) -> SUTree:
    """Trace ``fn`` on symbolic inputs of every branch of ``dom``.

    Branches rejected by ``guard`` can never be reached; they get a filler leaf.
    """
    branches = []
    for b, k in enumerate(dom.arities):
        syms = tuple(Sym(i) for i in range(k))
        v = decode(dom, b, syms)
        if guard is not None and not guard(v):
            branches.append(_filler(cod, k))
        else:
            branches.append(_trace(v, cod, fn, []))
    t = SUTree(dom, cod, tuple(branches))
    if check_single_use:
        problems = single_use_violations(t)
        if problems:
            raise TreeError("traced function is not single-use: " + "; ".join(problems[:3]))
    return t


def _filler(cod: SetDesc, k: int) -> Leaf:
    for b, n in enumerate(cod.arities):
        if n <= k:
            return Leaf(b, tuple(Var(i) for i in range(n)))
    return Leaf(0, tuple(Const(0) for _ in range(cod.arities[0])))


def shape(v: Value) -> Value:
    """``v`` with every atom replaced by 0."""
    return rename_atoms(v, lambda a: 0)


def same_shape_copies(v: Value, k: int) -> bool:
    first, *rest = untuple(v, k)
    s0 = shape(first)
    return all(shape(x) == s0 for x in rest)


def compile_copies(sigma: SetDesc, k: int, rest: SetDesc | None, cod: SetDesc, fn) -> SUTree:
    """Trees on sigma^k (x rest) whose k copies of the letter agree in shape.

    ``fn(copies, rest_value, tracer)`` gets the copies as a list.  With
    ``rest`` None the domain is just sigma^k and rest_value is None.
    """
    if rest is None:
        return compile_tree(power(sigma, k), cod, lambda v, t: fn(untuple(v, k), None, t),
                            guard=lambda v: same_shape_copies(v, k))
    return compile_tree(Prod(power(sigma, k), rest), cod, lambda v, t: fn(untuple(v.l, k), v.r, t),
                        guard=lambda v: same_shape_copies(v.l, k))


def _trace(v, cod, fn, choices):
    tracer = Tracer(choices)
    try:
        out = fn(v, tracer)
    except _NeedChoice as q:
        return Query(q.lhs, q.rhs, _trace(v, cod, fn, choices + [True]), _trace(v, cod, fn, choices + [False]))
    try:
        cb, ct = encode(cod, out)
    except TypeError as e:
        raise TreeError(f"traced output {out!r} is not in {cod!r}") from e
    ops = tuple(Var(a.i) if isinstance(a, Sym) else Const(a) for a in ct)
    return Leaf(cb, ops)


def apply_traced(tr: "SUTree | MultiTree", v: Value, t: Tracer) -> Value:
    """Run a tree on a value that may hold symbolic atoms, asking ``t`` for answers."""
    if isinstance(tr, MultiTree):
        v, tr = replicate(v, tr.k), tr.tree
    b, atoms = encode(tr.dom, v)
    node = tr.branches[b]
    while isinstance(node, Query):
        r = node.rhs
        rhs = atoms[r.i] if isinstance(r, Var) else r.a
        node = node.yes if t.eq(atoms[node.lhs], rhs) else node.no
    return decode(tr.cod, node.branch, tuple(atoms[o.i] if isinstance(o, Var) else o.a for o in node.out))


def run_concrete(fn: TraceFn, v: Value) -> Value:
    return fn(v, CONCRETE)


# -- composition and combinators ---------------------------------------------------------

def _subst(g: TupleTree, ops: Sequence[Operand]) -> TupleTree:
    if isinstance(g, Leaf):
        return Leaf(g.branch, tuple(ops[o.i] if isinstance(o, Var) else o for o in g.out))
    lhs = ops[g.lhs]
    rhs = ops[g.rhs.i] if isinstance(g.rhs, Var) else g.rhs
    if isinstance(lhs, Const) and isinstance(rhs, Const):
        return _subst(g.yes if lhs.a == rhs.a else g.no, ops)
    if isinstance(lhs, Var) and isinstance(rhs, Var) and lhs.i == rhs.i:
        return _subst(g.yes, ops)
    if isinstance(lhs, Const):
        lhs, rhs = rhs, lhs
    return _query(lhs.i, rhs, _subst(g.yes, ops), _subst(g.no, ops))


def _query(lhs, rhs, yes, no):
    # a query whose answer does not matter is dropped
    return yes if yes == no else Query(lhs, rhs, yes, no)


def _graft(node: TupleTree, at_leaf: Callable[[Leaf], TupleTree]) -> TupleTree:
    if isinstance(node, Leaf):
        return at_leaf(node)
    return _query(node.lhs, node.rhs, _graft(node.yes, at_leaf), _graft(node.no, at_leaf))


def compose(g: SUTree, f: SUTree) -> SUTree:
    """The tree of g after f."""
    if f.cod != g.dom:
        raise TreeError(f"cannot compose: {f.cod!r} != {g.dom!r}")
    branches = tuple(_graft(fb, lambda leaf: _subst(g.branches[leaf.branch], leaf.out)) for fb in f.branches)
    return SUTree(f.dom, g.cod, branches)


def _shift(node: TupleTree, k: int) -> TupleTree:
    if k == 0:
        return node

    def sh(o):
        return Var(o.i + k) if isinstance(o, Var) else o

    if isinstance(node, Leaf):
        return Leaf(node.branch, tuple(sh(o) for o in node.out))
    return Query(node.lhs + k, sh(node.rhs), _shift(node.yes, k), _shift(node.no, k))


def product(f: SUTree, g: SUTree) -> SUTree:
    """The tree of f x g acting on pairs."""
    ncg = len(g.cod.arities)
    branches = []
    for bl, kf in enumerate(f.dom.arities):
        for br in range(len(g.dom.arities)):
            gb = _shift(g.branches[br], kf)

            def at_f(fl, gb=gb):
                return _graft(gb, lambda gl: Leaf(fl.branch * ncg + gl.branch, fl.out + gl.out))

            branches.append(_graft(f.branches[bl], at_f))
    return SUTree(Prod(f.dom, g.dom), Prod(f.cod, g.cod), tuple(branches))


def sum_(f: SUTree, g: SUTree) -> SUTree:
    """The tree of f + g acting on tagged values."""
    nf = len(f.cod.arities)
    shifted = tuple(_graft(b, lambda l: Leaf(l.branch + nf, l.out)) for b in g.branches)
    return SUTree(Sum(f.dom, g.dom), Sum(f.cod, g.cod), f.branches + shifted)


def rename_consts(t: SUTree, p: FinPermutation) -> SUTree:
    """The tree computing the p-translate of the function of ``t``."""
    if not p.moved:
        return t

    def op(o):
        return Const(p(o.a)) if isinstance(o, Const) else o

    def go(n):
        if isinstance(n, Leaf):
            return Leaf(n.branch, tuple(op(o) for o in n.out))
        return Query(n.lhs, op(n.rhs), go(n.yes), go(n.no))

    return SUTree(t.dom, t.cod, tuple(go(b) for b in t.branches))


def structural(dom: SetDesc, cod: SetDesc, fn: Callable[[Value], Value]) -> SUTree:
    """Tree of a function that only moves (or drops) atoms around."""
    return compile_tree(dom, cod, lambda v, _t: fn(v))


# -- the catalogue of basic functions ---------------------------------------------------------

def _flat(v: Value, n: int) -> list[Value]:
    return untuple(v, n)


def _tup(vs: Sequence[Value]) -> Value:
    out = vs[-1]
    for x in reversed(vs[:-1]):
        out = Pair(x, out)
    return out


def _prod_of(ds: Sequence[SetDesc]) -> SetDesc:
    out = ds[-1]
    for d in reversed(ds[:-1]):
        out = Prod(d, out)
    return out


def _sum_of(ds: Sequence[SetDesc]) -> SetDesc:
    out = ds[-1]
    for d in reversed(ds[:-1]):
        out = Sum(d, out)
    return out


def basic(name: str, *params) -> SUTree:
    """Trees of the basic single-use functions and of some derived ones.

    Parameters are descriptors, except for ``const`` (an atom) and
    ``shuffle`` (a permutation given as a sequence of 0-based positions,
    followed by the factor descriptors).
    """
    try:
        maker = _BASIC[name]
    except KeyError:
        raise TreeError(f"unknown basic function {name!r}") from None
    if not params and name in _DESC_DEFAULTS:
        params = (ATOMS,) * _DESC_DEFAULTS[name]
    try:
        return maker(*params)
    except TypeError as e:
        raise TreeError(f"bad parameters for {name}: {e}") from None


def _eq():
    return compile_tree(Prod(ATOMS, ATOMS), BOOL, lambda v, t: boolv(t.eq(v.l, v.r)))


def _const(a):
    if not isinstance(a, int) or a < 0:
        raise TreeError(f"const needs an atom, got {a!r}")
    return structural(UNIT, ATOMS, lambda v: AtomV(a))


def _shuffle(p, *xs):
    p = list(p)
    if sorted(p) != list(range(len(xs))):
        raise TreeError("shuffle needs a permutation of the factor positions")
    return structural(_prod_of(xs), _prod_of([xs[i] for i in p]),
                      lambda v: _tup([_flat(v, len(xs))[i] for i in p]))


def _assoc_star(xs, ys):
    n, m = len(xs), len(ys)
    return structural(Prod(_prod_of(xs), _prod_of(ys)), _prod_of(list(xs) + list(ys)),
                      lambda v: _tup(_flat(v.l, n) + _flat(v.r, m)))


def _coassoc_star(xs, ys):
    n, m = len(xs), len(ys)

    def fn(v):
        if isinstance(v, InL):
            i, x = proj_inj(n, v.v)
            return inj(n + m, i, x)
        j, y = proj_inj(m, v.v)
        return inj(n + m, n + j, y)

    return structural(Sum(_sum_of(xs), _sum_of(ys)), _sum_of(list(xs) + list(ys)), fn)


def _distr_star(xs, ys):
    n, m = len(xs), len(ys)
    cod = _sum_of([Prod(x, y) for x in xs for y in ys])

    def fn(v):
        i, x = proj_inj(n, v.l)
        j, y = proj_inj(m, v.r)
        return inj(n * m, i * m + j, Pair(x, y))

    return structural(Prod(_sum_of(xs), _sum_of(ys)), cod, fn)


def _distr_fn(v):
    x, yz = v.l, v.r
    return InL(Pair(x, yz.v)) if isinstance(yz, InL) else InR(Pair(x, yz.v))


def _distr_inv_fn(v):
    p = v.v
    return Pair(p.l, InL(p.r)) if isinstance(v, InL) else Pair(p.l, InR(p.r))


def _right_distr_fn(v):
    xy, z = v.l, v.r
    return InL(Pair(xy.v, z)) if isinstance(xy, InL) else InR(Pair(xy.v, z))


_BASIC: dict[str, Callable[..., SUTree]] = {
    "eq": _eq,
    "const": _const,
    "id": lambda x=ATOMS: structural(x, x, lambda v: v),
    "proj1": lambda x, y: structural(Prod(x, y), x, lambda v: v.l),
    "proj2": lambda x, y: structural(Prod(x, y), y, lambda v: v.r),
    "sym": lambda x, y: structural(Prod(x, y), Prod(y, x), lambda v: Pair(v.r, v.l)),
    "assoc": lambda x, y, z: structural(Prod(Prod(x, y), z), Prod(x, Prod(y, z)),
                                        lambda v: Pair(v.l.l, Pair(v.l.r, v.r))),
    "assoc_inv": lambda x, y, z: structural(Prod(x, Prod(y, z)), Prod(Prod(x, y), z),
                                            lambda v: Pair(Pair(v.l, v.r.l), v.r.r)),
    "leftI": lambda x: structural(x, Prod(UNIT, x), lambda v: Pair(U, v)),
    "leftI_inv": lambda x: structural(Prod(UNIT, x), x, lambda v: v.r),
    "rightI": lambda x: structural(x, Prod(x, UNIT), lambda v: Pair(v, U)),
    "rightI_inv": lambda x: structural(Prod(x, UNIT), x, lambda v: v.l),
    "constI": lambda x: structural(x, UNIT, lambda v: U),
    "coproj1": lambda x, y: structural(x, Sum(x, y), InL),
    "coproj2": lambda x, y: structural(y, Sum(x, y), InR),
    "cosym": lambda x, y: structural(Sum(x, y), Sum(y, x),
                                     lambda v: InR(v.v) if isinstance(v, InL) else InL(v.v)),
    "coassoc": lambda x, y, z: structural(
        Sum(Sum(x, y), z), Sum(x, Sum(y, z)),
        lambda v: (InL(v.v.v) if isinstance(v.v, InL) else InR(InL(v.v.v))) if isinstance(v, InL) else InR(InR(v.v))),
    "coassoc_inv": lambda x, y, z: structural(
        Sum(x, Sum(y, z)), Sum(Sum(x, y), z),
        lambda v: InL(InL(v.v)) if isinstance(v, InL) else (InL(InR(v.v.v)) if isinstance(v.v, InL) else InR(v.v.v))),
    "merge": lambda x: structural(Sum(x, x), x, lambda v: v.v),
    "distr": lambda x, y, z: structural(Prod(x, Sum(y, z)), Sum(Prod(x, y), Prod(x, z)), _distr_fn),
    "distr_inv": lambda x, y, z: structural(Sum(Prod(x, y), Prod(x, z)), Prod(x, Sum(y, z)), _distr_inv_fn),
    "rightDistr": lambda x, y, z: structural(Prod(Sum(x, y), z), Sum(Prod(x, z), Prod(y, z)), _right_distr_fn),
    "shuffle": _shuffle,
    "assoc*": _assoc_star,
    "coassoc*": _coassoc_star,
    "distr*": _distr_star,
}

BASIC_NAMES = tuple(_BASIC)

# number of descriptor parameters; omitted ones default to the atoms
_DESC_DEFAULTS = {n: (len(inspect.signature(f).parameters) if n not in ("eq", "const", "shuffle", "assoc*", "coassoc*", "distr*") else 0)
                  for n, f in _BASIC.items()}

# pairs (f, g) with g the inverse of f; used by tests and docs
INVERSES = {
    "sym": "sym", "assoc": "assoc_inv", "distr": "distr_inv", "leftI": "leftI_inv",
    "coassoc": "coassoc_inv", "cosym": "cosym", "rightI": "rightI_inv",
}


# -- k-fold use ----------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiTree:
    """A k-fold-use function: copy the input k times, then run ``tree``."""

    k: int
    dom0: SetDesc
    tree: SUTree

    def __post_init__(self):
        if self.k < 1:
            raise TreeError("k must be positive")
        if self.tree.dom != power(self.dom0, self.k):
            raise TreeError("tree domain is not the k-fold power of dom0")

    @property
    def cod(self) -> SetDesc:
        return self.tree.cod

    @property
    def consts(self) -> frozenset[Atom]:
        return tree_consts(self.tree)

    def __call__(self, v: Value) -> Value:
        return lift_multi(self, v)

    def act(self, p: FinPermutation) -> "MultiTree":
        return MultiTree(self.k, self.dom0, rename_consts(self.tree, p))


def single(t: SUTree) -> MultiTree:
    return MultiTree(1, t.dom, t)


def compile_multi(dom0: SetDesc, cod: SetDesc, k: int, fn: Callable[[list[Value], Tracer], Value]) -> MultiTree:
    """Trace a function that receives the k copies of its input as a list."""
    tree = compile_copies(dom0, k, None, cod, lambda cs, _r, t: fn(cs, t))
    return MultiTree(k, dom0, tree)


def lift_multi(m: MultiTree, v: Value) -> Value:
    if not check(m.dom0, v):
        raise TypeError(f"{v!r} is not in {m.dom0!r}")
    return eval_tree(m.tree, replicate(v, m.k))


@dataclass(frozen=True)
class Fingerprint:
    frozen: frozenset[Atom]
    table: tuple[tuple[Value, Value], ...]

    def lookup(self, v: Value) -> Value:
        """Evaluate the fingerprinted function on an arbitrary input."""
        r, p = canon_with_perm(v, self.frozen)
        out = dict(self.table)[r]
        return act(inverse(p), out)


def fingerprint(m: MultiTree | SUTree, frozen: Iterable[Atom] = (), *, strict: bool = True) -> Fingerprint:
    """Table of outputs on the frozen-orbit representatives of the domain.

    With ``strict`` the frozen set must contain every constant of the tree.
    Without it the caller vouches that ``frozen`` supports the function.
    """
    if isinstance(m, SUTree):
        m = single(m)
    frozen = frozenset(frozen)
    if strict:
        missing = m.consts - frozen
        if missing:
            raise TreeError(f"frozen set misses constants {sorted(missing)}")
    reps = enumerate_orbit_reps(m.dom0, frozen)
    return Fingerprint(frozen, tuple((r, lift_multi(m, r)) for r in reps))


def equivalent(m1: MultiTree | SUTree, m2: MultiTree | SUTree, frozen: Iterable[Atom] | None = None) -> bool:
    if isinstance(m1, SUTree):
        m1 = single(m1)
    if isinstance(m2, SUTree):
        m2 = single(m2)
    if m1.dom0 != m2.dom0 or m1.cod != m2.cod:
        raise TreeError("type mismatch")
    if frozen is None:
        frozen = m1.consts | m2.consts
    return fingerprint(m1, frozen) == fingerprint(m2, frozen)


# -- supports and orbit keys of functions ----------------------------------------------------

def least_support(m: MultiTree, consts: Iterable[Atom] = ()) -> frozenset[Atom]:
    """Smallest set of non-``consts`` atoms that, together with ``consts``, supports m.

    An atom c belongs to the least support iff swapping c with a fresh atom
    changes the function.  Only constants of the tree can qualify.
    """
    consts = frozenset(consts)
    cands = sorted(m.consts - consts)
    if not cands:
        return frozenset()
    base = consts | m.consts
    d = fresh_atoms(base, 1)[0]
    frozen = base | {d}
    fp = fingerprint(m, frozen, strict=False)
    keep = set()
    for c in cands:
        if fingerprint(m.act(swap(c, d)), frozen, strict=False) != fp:
            keep.add(c)
    return frozenset(keep)


def orbit_key(m: MultiTree, consts: Iterable[Atom] = (), supp: frozenset[Atom] | None = None):
    """A key that is equal for two functions iff a consts-permutation maps one to the other."""
    consts = frozenset(consts)
    if supp is None:
        supp = least_support(m, consts)
    supp = sorted(supp)
    canon_atoms = fresh_atoms(consts, len(supp))
    frozen = consts | frozenset(canon_atoms)
    best = None
    for order in permutations(supp):
        p = FinPermutation.extending(dict(zip(order, canon_atoms)))
        fp = fingerprint(m.act(p), frozen, strict=False)
        k = tuple(value_key(out) for _, out in fp.table)
        if best is None or k < best:
            best = k
    return (len(supp), best)

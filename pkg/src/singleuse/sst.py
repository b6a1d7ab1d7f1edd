"""Single-use streaming string transducers with atoms.

States live in a register set: a polynomial descriptor in which ``REG``
stands for one write-only register holding a word over the output alphabet.
Transitions are register trees: equality queries on atoms only, and leaves
that build each output register as a concatenation of old registers and
output letters.  The copyless discipline says that on every path each atom
variable and each register variable is used at most once.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from . import pofset
from .atoms import Atom
from .automata import check_word
from .pofset import (ATOMS, UNIT, InL, InR, Pair, Prod, SetDesc, Sum, U, Value, atoms_of, check, decode,
                     encode, power, replicate, untuple)
from .sutree import Const, Query, Sym, Tracer, TreeError, Var, _NeedChoice, same_shape_copies

Word = Sequence[Value]


class _Reg(SetDesc):
    __slots__ = ()

    def __init__(self):
        self.arities = (0,)
        self._hash = hash("reg")

    def __repr__(self):
        return "REG"


REG = _Reg()


# -- ropes -------------------------------------------------------------------------------------

class Rope:
    """Immutable word with constant-time concatenation."""

    __slots__ = ("left", "right", "leaf", "size")

    def __init__(self, leaf=(), left=None, right=None):
        self.leaf, self.left, self.right = tuple(leaf), left, right
        self.size = len(self.leaf) if left is None else left.size + right.size

    @staticmethod
    def cat(*parts: "Rope") -> "Rope":
        parts = [p for p in parts if p.size]
        if not parts:
            return EMPTY_ROPE
        out = parts[0]
        for p in parts[1:]:
            out = Rope(left=out, right=p)
        return out

    def flatten(self) -> tuple:
        out = []
        stack = [self]
        while stack:
            r = stack.pop()
            if r.left is None:
                out.extend(r.leaf)
            else:
                stack.append(r.right)
                stack.append(r.left)
        return tuple(out)

    def __len__(self):
        return self.size


EMPTY_ROPE = Rope()


class RegV(Value):
    """Contents of a register."""

    __slots__ = ("rope",)

    def __init__(self, rope: Rope | Sequence = EMPTY_ROPE):
        self.rope = rope if isinstance(rope, Rope) else Rope(rope)

    @property
    def word(self) -> tuple:
        return self.rope.flatten()

    def children(self):
        return list(self.word)

    def map_atoms(self, f):
        return RegV(tuple(pofset.rename_atoms(x, f) for x in self.word))

    def __eq__(self, other):
        return isinstance(other, RegV) and self.word == other.word

    def __hash__(self):
        return hash(("reg", self.word))

    def __repr__(self):
        return "R[" + " ".join(map(repr, self.word)) + "]"


def _check_reg(d, v):
    if isinstance(d, _Reg):
        return isinstance(v, RegV)
    return None


pofset._EXTRA_CHECKS.append(_check_reg)


def reg_arities(d: SetDesc) -> tuple[int, ...]:
    """Registers per branch of the normal form (branch order as for atoms)."""
    if isinstance(d, _Reg):
        return (1,)
    if isinstance(d, Sum):
        return reg_arities(d.left) + reg_arities(d.right)
    if isinstance(d, Prod):
        rl, rr = reg_arities(d.left), reg_arities(d.right)
        return tuple(a + b for a in rl for b in rr)
    return (0,) * len(d.arities)


def has_registers(d: SetDesc) -> bool:
    return any(reg_arities(d))


def rencode(d: SetDesc, v: Value):
    """Branch, atoms and registers of a value of a register set."""
    if isinstance(d, _Reg):
        if not isinstance(v, (RegV, SymReg)):
            raise TypeError(f"{v!r} is not a register")
        return 0, (), (v,)
    if isinstance(d, Sum):
        if isinstance(v, InL):
            return rencode(d.left, v.v)
        if isinstance(v, InR):
            b, t, r = rencode(d.right, v.v)
            return b + len(d.left.arities), t, r
        raise TypeError(f"{v!r} is not in {d!r}")
    if isinstance(d, Prod):
        if not isinstance(v, Pair):
            raise TypeError(f"{v!r} is not in {d!r}")
        bl, tl, rl = rencode(d.left, v.l)
        br, tr, rr = rencode(d.right, v.r)
        return bl * len(d.right.arities) + br, tl + tr, rl + rr
    b, t = encode(d, v)
    return b, t, ()


def rdecode(d: SetDesc, branch: int, atoms: Sequence, regs: Sequence):
    if isinstance(d, _Reg):
        return regs[0]
    if isinstance(d, Sum):
        n = len(d.left.arities)
        if branch < n:
            return InL(rdecode(d.left, branch, atoms, regs))
        return InR(rdecode(d.right, branch - n, atoms, regs))
    if isinstance(d, Prod):
        bl, br = divmod(branch, len(d.right.arities))
        k, r = d.left.arities[bl], reg_arities(d.left)[bl]
        return Pair(rdecode(d.left, bl, atoms[:k], regs[:r]), rdecode(d.right, br, atoms[k:], regs[r:]))
    return decode(d, branch, atoms)


def empty_registers(d: SetDesc, v: Value) -> bool:
    return all(not r.rope.size for r in rencode(d, v)[2])


# -- register trees ----------------------------------------------------------------------------

@dataclass(frozen=True)
class RVar:
    """The i-th register of the input."""

    i: int

    def __repr__(self):
        return f"r{self.i}"


@dataclass(frozen=True)
class Lit:
    """An output letter: a branch of gamma with atom operands."""

    branch: int
    out: tuple = ()


@dataclass(frozen=True)
class RegLeaf:
    branch: int
    out: tuple = ()  # atom operands
    regs: tuple = ()  # one tuple of RVar/Lit pieces per output register


@dataclass(frozen=True)
class RegTree:
    dom: SetDesc
    cod: SetDesc
    gamma: SetDesc
    branches: tuple

    def __post_init__(self):
        if len(self.branches) != len(self.dom.arities):
            raise TreeError(f"need {len(self.dom.arities)} branch trees, got {len(self.branches)}")

    def __call__(self, v: Value) -> Value:
        return eval_reg_tree(self, v)

    @property
    def consts(self) -> frozenset[Atom]:
        out = set()
        for root in self.branches:
            for n in _walk(root):
                if isinstance(n, Query):
                    if isinstance(n.rhs, Const):
                        out.add(n.rhs.a)
                else:
                    out.update(o.a for o in n.out if isinstance(o, Const))
                    for pieces in n.regs:
                        for p in pieces:
                            if isinstance(p, Lit):
                                out.update(o.a for o in p.out if isinstance(o, Const))
        return frozenset(out)


def _walk(node):
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, Query):
            stack.extend((n.no, n.yes))


def copyless_violations(t: RegTree) -> list[str]:
    """Every violated path condition; empty when the tree is copyless."""
    problems = []
    cod_at, cod_rg = t.cod.arities, reg_arities(t.cod)
    dom_rg = reg_arities(t.dom)
    g_ar = t.gamma.arities
    for bi, root in enumerate(t.branches):
        k, nr = t.dom.arities[bi], dom_rg[bi]

        def use(i, seen, path, what="x"):
            bound = k if what == "x" else nr
            if not 0 <= i < bound:
                problems.append(f"branch {bi} path {path}: {what}{i} out of range")
            elif i in seen:
                problems.append(f"branch {bi} path {path}: {what}{i} used twice")
            seen.add(i)

        def visit(node, used, path):
            if isinstance(node, Query):
                seen = set(used)
                for o in (Var(node.lhs), node.rhs):
                    if isinstance(o, RVar):
                        problems.append(f"branch {bi} path {path}: query on a register")
                    elif isinstance(o, Var):
                        use(o.i, seen, path)
                visit(node.yes, frozenset(seen), path + "y")
                visit(node.no, frozenset(seen), path + "n")
                return
            if not isinstance(node, RegLeaf) or not 0 <= node.branch < len(cod_at):
                problems.append(f"branch {bi} path {path}: bad leaf")
                return
            seen, rseen = set(used), set()
            if len(node.out) != cod_at[node.branch] or len(node.regs) != cod_rg[node.branch]:
                problems.append(f"branch {bi} path {path}: leaf arity mismatch")
            for o in node.out:
                if isinstance(o, Var):
                    use(o.i, seen, path)
            for pieces in node.regs:
                for p in pieces:
                    if isinstance(p, RVar):
                        use(p.i, rseen, path, "r")
                    elif isinstance(p, Lit):
                        if not 0 <= p.branch < len(g_ar) or len(p.out) != g_ar[p.branch]:
                            problems.append(f"branch {bi} path {path}: bad output letter")
                        for o in p.out:
                            if isinstance(o, Var):
                                use(o.i, seen, path)
                    else:
                        problems.append(f"branch {bi} path {path}: unknown register piece {p!r}")

        visit(root, frozenset(), "")
    return problems


def _operand(o, atoms):
    return atoms[o.i] if isinstance(o, Var) else o.a


def eval_reg_tree(t: RegTree, v: Value) -> Value:
    try:
        b, atoms, regs = rencode(t.dom, v)
    except TypeError as e:
        raise TypeError(f"input {v!r} does not belong to {t.dom!r}") from e
    node = t.branches[b]
    while isinstance(node, Query):
        node = node.yes if atoms[node.lhs] == _operand(node.rhs, atoms) else node.no
    out_atoms = tuple(_operand(o, atoms) for o in node.out)
    out_regs = []
    for pieces in node.regs:
        parts = []
        for p in pieces:
            if isinstance(p, RVar):
                parts.append(regs[p.i].rope)
            else:
                parts.append(Rope((decode(t.gamma, p.branch, tuple(_operand(o, atoms) for o in p.out)),)))
        out_regs.append(RegV(Rope.cat(*parts)))
    return rdecode(t.cod, node.branch, out_atoms, out_regs)


# -- tracing ---------------------------------------------------------------------------------------

class SymReg(Value):
    """Symbolic register contents while tracing: a tuple of pieces."""

    __slots__ = ("pieces",)

    def __init__(self, pieces=()):
        self.pieces = tuple(pieces)

    def __repr__(self):
        return f"SymReg{self.pieces}"


def cat(*parts) -> SymReg:
    """Concatenate registers and output letters (an output letter is a gamma value)."""
    pieces = []
    for p in parts:
        if isinstance(p, SymReg):
            pieces.extend(p.pieces)
        else:
            pieces.append(p)
    return SymReg(pieces)


def _sym_value(d, branch):
    syms = tuple(Sym(i) for i in range(d.arities[branch]))
    regs = tuple(SymReg((RVar(j),)) for j in range(reg_arities(d)[branch]))
    return rdecode(d, branch, syms, regs)


def _ops(atoms):
    return tuple(Var(a.i) if isinstance(a, Sym) else Const(a) for a in atoms)


def _leaf(cod, gamma, out):
    b, atoms, regs = rencode(cod, out)
    pieces_out = []
    for r in regs:
        if not isinstance(r, SymReg):
            raise TreeError(f"register output {r!r} is not built with cat()")
        pieces = []
        for p in r.pieces:
            if isinstance(p, RVar):
                pieces.append(p)
            else:
                gb, gt = encode(gamma, p)
                pieces.append(Lit(gb, _ops(gt)))
        pieces_out.append(tuple(pieces))
    return RegLeaf(b, _ops(atoms), tuple(pieces_out))


def _trace(v, cod, gamma, fn, choices):
    tracer = Tracer(choices)
    try:
        out = fn(v, tracer)
    except _NeedChoice as q:
        return Query(q.lhs, q.rhs, _trace(v, cod, gamma, fn, choices + [True]),
                     _trace(v, cod, gamma, fn, choices + [False]))
    return _leaf(cod, gamma, out)


def compile_reg_tree(dom: SetDesc, cod: SetDesc, gamma: SetDesc, fn, guard=None) -> RegTree:
    """Trace ``fn(value, tracer)``; registers arrive as SymReg and are combined with ``cat``."""
    branches = []
    for b in range(len(dom.arities)):
        v = _sym_value(dom, b)
        if guard is not None and not guard(v):
            branches.append(_filler(cod))
        else:
            branches.append(_trace(v, cod, gamma, fn, []))
    t = RegTree(dom, cod, gamma, tuple(branches))
    problems = copyless_violations(t)
    if problems:
        raise TreeError("traced function is not copyless: " + "; ".join(problems[:3]))
    return t


def _filler(cod):
    ar, rg = cod.arities, reg_arities(cod)
    for b in range(len(ar)):
        if ar[b] == 0:
            return RegLeaf(b, (), tuple(() for _ in range(rg[b])))
    return RegLeaf(0, tuple(Const(0) for _ in range(ar[0])), tuple(() for _ in range(rg[0])))


# -- transducers ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class SSTransducer:
    sigma: SetDesc
    gamma: SetDesc
    state: SetDesc
    q0: Value
    k: int
    delta: RegTree
    out: RegTree
    name: str = ""

    def __post_init__(self):
        if has_registers(self.sigma) or has_registers(self.gamma):
            raise TreeError("alphabets cannot contain registers")
        if self.delta.dom != Prod(power(self.sigma, self.k), self.state) or self.delta.cod != self.state:
            raise TreeError("transition tree must have type sigma^k x Q -o Q")
        if self.out.dom != self.state or self.out.cod != REG:
            raise TreeError("output tree must have type Q -o REG")
        if self.delta.gamma != self.gamma or self.out.gamma != self.gamma:
            raise TreeError("trees must write letters of gamma")
        if not check(self.state, self.q0) or not empty_registers(self.state, self.q0):
            raise TypeError("initial state must be in Q with all registers empty")

    @property
    def consts(self) -> frozenset[Atom]:
        return self.delta.consts | self.out.consts | frozenset(atoms_of(self.q0))


def validate_sst(t: SSTransducer) -> list[str]:
    """Diagnostics for both trees; empty when the transducer is copyless."""
    return ([f"delta: {p}" for p in copyless_violations(t.delta)]
            + [f"out: {p}" for p in copyless_violations(t.out)])


def sst(sigma, gamma, state, q0, k, step, finish, name="") -> SSTransducer:
    """Build a transducer from traced ``step(copies, state, tracer)`` and ``finish(state, tracer)``."""
    dom = Prod(power(sigma, k), state)
    delta = compile_reg_tree(dom, state, gamma, lambda v, t: step(untuple(v.l, k), v.r, t),
                             guard=lambda v: same_shape_copies(v.l, k))
    out = compile_reg_tree(state, REG, gamma, finish)
    return SSTransducer(sigma, gamma, state, q0, k, delta, out, name)


def sst_step(t: SSTransducer, q: Value, letter: Value) -> Value:
    return t.delta(Pair(replicate(letter, t.k), q))


def sst_run(t: SSTransducer, w: Word) -> list[Value]:
    check_word(t.sigma, w)
    q = t.q0
    for x in w:
        q = sst_step(t, q, x)
    return list(t.out(q).word)


def literals_per_leaf(t: RegTree) -> int:
    best = 0
    for root in t.branches:
        for n in _walk(root):
            if isinstance(n, RegLeaf):
                best = max(best, sum(isinstance(p, Lit) for ps in n.regs for p in ps))
    return best


def growth_bound(t: SSTransducer, n: int) -> int:
    """Upper bound on the output length after n letters: copyless leaves only add their literals."""
    return literals_per_leaf(t.delta) * n + literals_per_leaf(t.out)


def multiplicity_ok(t: SSTransducer, w: Word, out: Word) -> bool:
    cin = Counter(a for x in w for a in atoms_of(x))
    cout = Counter(a for y in out for a in atoms_of(y))
    return all(c in t.consts or n <= t.k * cin.get(c, 0) for c, n in cout.items())


def equivalent_bounded(t1: SSTransducer, t2: SSTransducer, max_len: int = 4, atoms: Sequence[Atom] = (0, 1, 2)):
    """First word (up to max_len over the given atoms) on which the two disagree, or None."""
    from itertools import product
    from .pofset import enumerate_values
    if t1.sigma != t2.sigma:
        raise TypeError("alphabets differ")
    letters = list(enumerate_values(t1.sigma, atoms))
    for n in range(max_len + 1):
        for w in product(letters, repeat=n):
            if sst_run(t1, list(w)) != sst_run(t2, list(w)):
                return list(w)
    return None


# -- the map-dup machine ---------------------------------------------------------------------------

MD_SIGMA = Sum(ATOMS, UNIT)
MD_SEP = InR(U)
MD_STATE = Prod(REG, Prod(REG, REG))  # finished output, two copies of the current block


def map_dup_sst() -> SSTransducer:
    """Duplicates every #-separated block, keeping two copies of the current block."""

    def step(cs, q, t):
        done, (c1, c2) = q.l, (q.r.l, q.r.r)
        x1, x2 = cs
        if x1 == MD_SEP:
            return Pair(cat(done, c1, c2, MD_SEP), Pair(cat(), cat()))
        return Pair(done, Pair(cat(c1, x1), cat(c2, x2)))

    def finish(q, t):
        return cat(q.l, q.r.l, q.r.r)

    q0 = Pair(RegV(), Pair(RegV(), RegV()))
    return sst(MD_SIGMA, MD_SIGMA, MD_STATE, q0, 2, step, finish, name="map-dup")

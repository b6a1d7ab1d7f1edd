"""Krohn-Rhodes prime functions, pipelines of primes, and compilation of
length-preserving left-to-right pipelines into single-use Mealy machines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .automata import check_word
from .pofset import (ATOMS, UNIT, InL, InR, Pair, Prod, SetDesc, Sum, U, Value, enum_index, enum_value, finite,
                     power, tuple_value, untuple)
from .sutree import MultiTree, apply_traced
from .transduce import MealyMachine, identity_mealy, mealy, mealy_seq

Word = Sequence[Value]

SEP = InR(U)  # the separator in sigma + #, and the right marker in sigma + 1
DOWN = InR(InL(U))
NOP = InR(InR(U))
EMPTY = InR(U)

BITS = finite(3)
BIT_EPS = enum_value(3, 0)


class PipelineError(TypeError):
    pass


def validate_group(table: Sequence[Sequence[int]]) -> list[str]:
    """Problems with a Cayley table whose element 0 should be the identity."""
    n = len(table)
    if n == 0:
        return ["empty table"]
    problems = []
    if any(len(row) != n or any(not 0 <= x < n for x in row) for row in table):
        return ["table is not an n x n table over range(n)"]
    if any(table[0][x] != x or table[x][0] != x for x in range(n)):
        problems.append("0 is not the identity")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    problems.append(f"not associative at {(a, b, c)}")
                    return problems
    for a in range(n):
        if not any(table[a][b] == 0 for b in range(n)):
            problems.append(f"{a} has no inverse")
    return problems


def _group_check(table):
    problems = validate_group(table)
    if problems:
        raise ValueError("not a group: " + problems[0])


# -- the primes ------------------------------------------------------------------------------------

@dataclass(frozen=True)
class Hom:
    """Letter-to-word homomorphism.

    With ``width`` None, ``f`` maps letters to letters; otherwise it maps a
    letter to (gamma + 1)^width and the unit entries are dropped.
    """

    sigma: SetDesc
    gamma: SetDesc
    f: MultiTree
    width: int | None = None

    def __post_init__(self):
        cod = self.gamma if self.width is None else power(Sum(self.gamma, UNIT), self.width)
        if self.f.dom0 != self.sigma or self.f.cod != cod:
            raise PipelineError(f"homomorphism tree must have type {self.sigma!r} -o {cod!r}")

    @property
    def length_preserving(self):
        return self.width is None


@dataclass(frozen=True)
class SUPropL:
    """Single-use propagation: letters x + down + eps, outputs x + eps."""

    x: SetDesc = ATOMS

    @property
    def sigma(self):
        return Sum(self.x, Sum(UNIT, UNIT))

    @property
    def gamma(self):
        return Sum(self.x, UNIT)

    length_preserving = True


@dataclass(frozen=True)
class SUPropR(SUPropL):
    pass


@dataclass(frozen=True)
class BitPropL:
    sigma: SetDesc = BITS
    gamma: SetDesc = BITS
    length_preserving = True


@dataclass(frozen=True)
class BitPropR(BitPropL):
    pass


@dataclass(frozen=True)
class GroupPrefix:
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(r) for r in self.table))
        _group_check(self.table)

    @property
    def sigma(self):
        return finite(len(self.table))

    gamma = sigma
    length_preserving = True


@dataclass(frozen=True)
class GroupSuffix(GroupPrefix):
    pass


@dataclass(frozen=True)
class MapDup:
    """Duplicates every #-separated block."""

    base: SetDesc = ATOMS

    @property
    def sigma(self):
        return Sum(self.base, UNIT)

    gamma = sigma
    length_preserving = False


@dataclass(frozen=True)
class MapRev(MapDup):
    """Reverses every #-separated block."""


@dataclass(frozen=True)
class EndMarker:
    """Appends a right end marker."""

    base: SetDesc = ATOMS

    @property
    def sigma(self):
        return self.base

    @property
    def gamma(self):
        return Sum(self.base, UNIT)

    length_preserving = False


@dataclass(frozen=True)
class ParId:
    """``p`` on the first coordinate, identity on the second."""

    p: object
    pad: SetDesc

    def __post_init__(self):
        if not self.p.length_preserving:
            raise PipelineError("only length-preserving primes can run in parallel with the identity")

    @property
    def sigma(self):
        return Prod(self.p.sigma, self.pad)

    @property
    def gamma(self):
        return Prod(self.p.gamma, self.pad)

    length_preserving = True


PRIME_TYPES = (Hom, SUPropL, SUPropR, BitPropL, BitPropR, GroupPrefix, GroupSuffix, MapDup, MapRev, EndMarker, ParId)
RIGHT_TO_LEFT = (SUPropR, BitPropR, GroupSuffix)


# -- evaluation ----------------------------------------------------------------------------------

def _blocks(w: Word) -> list[list[Value]]:
    out = [[]]
    for x in w:
        if x == SEP:
            out.append([])
        else:
            out[-1].append(x)
    return out


def _join(blocks: list[list[Value]]) -> list[Value]:
    out = []
    for i, b in enumerate(blocks):
        if i:
            out.append(SEP)
        out.extend(b)
    return out


def _su_prop(w: Word) -> list[Value]:
    reg = EMPTY
    out = []
    for x in w:
        if x == DOWN:
            out.append(reg)
            reg = EMPTY
        elif x == NOP:
            out.append(EMPTY)
        else:
            out.append(EMPTY)
            reg = InL(x.v)
    return out


def _bit_prop(w: Word) -> list[Value]:
    reg = BIT_EPS
    out = []
    for x in w:
        out.append(reg)
        if x != BIT_EPS:
            reg = x
    return out


def _group_prefix(table, w: Word) -> list[Value]:
    n = len(table)
    g = 0
    out = []
    for x in w:
        g = table[g][enum_index(n, x)]
        out.append(enum_value(n, g))
    return out


def _one_way(p, w: Word) -> list[Value]:
    if isinstance(p, SUPropL):
        return _su_prop(w)
    if isinstance(p, BitPropL):
        return _bit_prop(w)
    return _group_prefix(p.table, w)


def _group_suffix(table, w):
    # products g_i ... g_n; the reversed word is multiplied in the opposite group
    opposite = tuple(tuple(table[b][a] for b in range(len(table))) for a in range(len(table)))
    return _group_prefix(opposite, w[::-1])[::-1]


def eval_prime(p, w: Word) -> list[Value]:
    check_word(p.sigma, w)
    w = list(w)
    if isinstance(p, Hom):
        if p.width is None:
            return [p.f(x) for x in w]
        out = []
        for x in w:
            out.extend(y.v for y in untuple(p.f(x), p.width) if isinstance(y, InL))
        return out
    if isinstance(p, GroupSuffix):
        return _group_suffix(p.table, w)
    if isinstance(p, RIGHT_TO_LEFT):
        return _one_way(p, w[::-1])[::-1]
    if isinstance(p, (SUPropL, BitPropL, GroupPrefix)):
        return _one_way(p, w)
    if isinstance(p, MapRev):
        return _join([b[::-1] for b in _blocks(w)])
    if isinstance(p, MapDup):
        return _join([b + b for b in _blocks(w)])
    if isinstance(p, EndMarker):
        return [InL(x) for x in w] + [EMPTY]
    if isinstance(p, ParId):
        inner = eval_prime(p.p, [x.l for x in w])
        return [Pair(y, x.r) for y, x in zip(inner, w)]
    raise TypeError(f"unknown prime {p!r}")


@dataclass(frozen=True)
class Pipeline:
    stages: tuple = ()
    sigma: SetDesc | None = None

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if self.sigma is None:
            if not self.stages:
                raise PipelineError("an empty pipeline needs an explicit alphabet")
            object.__setattr__(self, "sigma", self.stages[0].sigma)
        check_pipeline(self)

    @property
    def gamma(self) -> SetDesc:
        return self.stages[-1].gamma if self.stages else self.sigma


def check_pipeline(pl: Pipeline) -> None:
    cur = pl.sigma
    for i, p in enumerate(pl.stages):
        if p.sigma != cur:
            raise PipelineError(f"stage {i} expects {p.sigma!r} but receives {cur!r}")
        cur = p.gamma


def eval_pipeline(pl: Pipeline, w: Word) -> list[Value]:
    check_word(pl.sigma, w)
    out = list(w)
    for p in pl.stages:
        out = eval_prime(p, out)
    return out


# -- compilation to Mealy machines -------------------------------------------------------------------

def prime_mealy(p) -> MealyMachine:
    """A single-use Mealy machine for a length-preserving left-to-right prime."""
    if isinstance(p, Hom):
        if p.width is not None:
            raise PipelineError("letter-to-word homomorphisms are not length preserving")
        f = p.f
        return mealy(p.sigma, p.gamma, UNIT, U, f.k,
                     lambda cs, q, t: Pair(U, apply_traced(f.tree, tuple_value(*cs), t)), name="hom")
    if isinstance(p, RIGHT_TO_LEFT):
        raise PipelineError(f"{type(p).__name__} reads right to left")
    if isinstance(p, SUPropL):
        def su(cs, q, t):
            x = cs[0]
            if x == DOWN:
                return Pair(EMPTY, q)
            if x == NOP:
                return Pair(q, EMPTY)
            return Pair(InL(x.v), EMPTY)

        return mealy(p.sigma, p.gamma, p.gamma, EMPTY, 1, su, name="su-prop")
    if isinstance(p, BitPropL):
        return mealy(BITS, BITS, BITS, BIT_EPS, 1,
                     lambda cs, q, t: Pair(q if cs[0] == BIT_EPS else cs[0], q), name="bit-prop")
    if isinstance(p, GroupPrefix):
        table, n = p.table, len(p.table)

        def grp(cs, q, t):
            g = enum_value(n, table[enum_index(n, q)][enum_index(n, cs[0])])
            return Pair(g, g)

        return mealy(p.sigma, p.gamma, p.sigma, enum_value(n, 0), 1, grp, name="group-prefix")
    if isinstance(p, ParId):
        inner = prime_mealy(p.p)
        k = inner.k

        def par(cs, q, t):
            r = apply_traced(inner.delta, Pair(tuple_value(*[c.l for c in cs]), q), t)
            return Pair(r.l, Pair(r.r, cs[0].r))

        return mealy(p.sigma, p.gamma, inner.q, inner.q0, k, par, name=f"{inner.name}x id")
    raise PipelineError(f"{type(p).__name__} is not length preserving")


def compile_lp_pipeline(pl: Pipeline) -> MealyMachine:
    m = identity_mealy(pl.sigma)
    for i, p in enumerate(pl.stages):
        try:
            pm = prime_mealy(p)
        except PipelineError as e:
            raise PipelineError(f"stage {i}: {e}") from None
        m = pm if i == 0 else mealy_seq(pm, m)
    return m

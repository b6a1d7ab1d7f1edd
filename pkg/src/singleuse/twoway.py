"""Two-way single-use automata and transducers.

The tape is ``LEFT_END w RIGHT_END``.  A run starts on the first letter of w
(on ``RIGHT_END`` when w is empty).  Positions in run shapes are 1-based word
positions; marker visits are not recorded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .atoms import Atom
from .automata import check_word, word_support
from .atoms import inverse
from .pofset import (BOOL, UNIT, YES, InL, InR, Pair, Prod, SetDesc, Sum, U, Value, act, canon_with_perm, check,
                     count_supported, enumerate_orbit_reps, power, replicate, support)
from .sutree import SUTree, TreeError, single_use_violations

LEFT_END = InR(InL(U))
RIGHT_END = InR(InR(U))
DIR = BOOL
LEFT = InL(U)
RIGHT = InR(U)
EPS = InR(U)


def marked(sigma: SetDesc) -> SetDesc:
    return Sum(sigma, Sum(UNIT, UNIT))


def tape(w: Sequence[Value]) -> list[Value]:
    return [LEFT_END] + [InL(x) for x in w] + [RIGHT_END]


def dir_name(d: Value) -> str:
    return "<" if d == LEFT else ">"


class Loop(Exception):
    """Raised when a run exceeds its step budget (or falls off the tape)."""


class NotNormalized(ValueError):
    pass


LOOP = "loop"


@dataclass(frozen=True)
class TwoWayMachine:
    role: str  # "acceptor" or "transducer"
    sigma: SetDesc
    q: SetDesc
    q0: Value
    k: int
    delta: SUTree
    gamma: SetDesc | None = None
    name: str = ""

    def __post_init__(self):
        if self.role not in ("acceptor", "transducer"):
            raise ValueError(f"unknown role {self.role!r}")
        if self.role == "transducer" and self.gamma is None:
            raise ValueError("a transducer needs an output alphabet")
        if self.delta.dom != Prod(power(marked(self.sigma), self.k), self.q):
            raise TreeError("transition domain must be (sigma + markers)^k x Q")
        if self.delta.cod != out_desc(self):
            raise TreeError(f"transition codomain must be {out_desc(self)!r}")
        if not check(self.q, self.q0):
            raise TypeError("initial state is not in Q")
        problems = single_use_violations(self.delta)
        if problems:
            raise TreeError("; ".join(problems[:3]))

    @property
    def consts(self) -> frozenset[Atom]:
        return self.delta.consts | support(self.q0)


def out_desc(m: TwoWayMachine) -> SetDesc:
    if m.role == "acceptor":
        return Sum(Prod(m.q, DIR), BOOL)
    return Sum(Prod(m.q, Prod(Sum(m.gamma, UNIT), DIR)), UNIT)


def step_cap(m: TwoWayMachine, w: Sequence[Value]) -> int:
    return (len(w) + 2) * count_supported(m.q, m.consts | word_support(w))


def _delta(m: TwoWayMachine, letter: Value, q: Value) -> Value:
    return m.delta(Pair(replicate(letter, m.k), q))


def _trace(m: TwoWayMachine, w: Sequence[Value]):
    """Yield (position, entered, state, result) for every step of the run.

    Raises Loop when the budget runs out or the head leaves the tape.
    """
    check_word(m.sigma, w)
    t = tape(w)
    cap = step_cap(m, w)
    pos, q, entered = 1, m.q0, RIGHT
    for _ in range(cap):
        r = _delta(m, t[pos], q)
        yield pos, entered, q, r
        if isinstance(r, InR):
            return
        q, d = r.v.l, (r.v.r if m.role == "acceptor" else r.v.r.r)
        pos += 1 if d == RIGHT else -1
        entered = d
        if not 0 <= pos < len(t):
            raise Loop("head left the tape")
    raise Loop(f"no result within {cap} steps")


def run_acceptor(m: TwoWayMachine, w: Sequence[Value]) -> bool:
    if m.role != "acceptor":
        raise TypeError("not an acceptor")
    try:
        for *_, r in _trace(m, w):
            if isinstance(r, InR):
                return r.v == YES
    except Loop:
        return False
    return False


def run_transducer(m: TwoWayMachine, w: Sequence[Value]):
    """The output word, or ``LOOP``."""
    if m.role != "transducer":
        raise TypeError("not a transducer")
    out = []
    try:
        for *_, r in _trace(m, w):
            if isinstance(r, InL) and isinstance(r.v.r.l, InL):
                out.append(r.v.r.l.v)
    except Loop:
        return LOOP
    return out


# -- behaviour tables ---------------------------------------------------------------------

ENTER_LEFT, ENTER_RIGHT = "enter-left", "enter-right"
EXIT_LEFT, EXIT_RIGHT = "exit-left", "exit-right"


@dataclass(frozen=True)
class BehaviourTable:
    q: SetDesc
    frozen: frozenset[Atom]
    table: tuple  # ((side, state), result) pairs; result is (exit side, state) or bool
    crossings: int = 0

    def as_dict(self):
        return dict(self.table)

    def lookup(self, side: str, q: Value):
        r, p = canon_with_perm(q, self.frozen)
        res = self.as_dict()[(side, r)]
        if isinstance(res, bool):
            return res
        return res[0], act(inverse(p), res[1])


def _entries(q: SetDesc, frozen):
    reps = enumerate_orbit_reps(q, frozen)
    return [(side, r) for side in (ENTER_LEFT, ENTER_RIGHT) for r in reps]


def _run_inside(m: TwoWayMachine, t: Sequence[Value], side: str, q: Value, cap: int):
    n = len(t)
    pos = 0 if side == ENTER_LEFT else n - 1
    for _ in range(cap):
        if pos < 0:
            return (EXIT_LEFT, q)
        if pos >= n:
            return (EXIT_RIGHT, q)
        r = _delta(m, t[pos], q)
        if isinstance(r, InR):
            return r.v == YES
        q, d = r.v.l, r.v.r
        pos += 1 if d == RIGHT else -1
    if pos < 0:
        return (EXIT_LEFT, q)
    if pos >= n:
        return (EXIT_RIGHT, q)
    return False


def behaviour2_tape(m: TwoWayMachine, t: Sequence[Value]) -> BehaviourTable:
    """Behaviour of an acceptor on a piece of tape (marked letters)."""
    if m.role != "acceptor":
        raise TypeError("behaviour tables are defined for acceptors")
    frozen = m.consts
    for x in t:
        frozen |= support(x)
    cap = (len(t) + 2) * count_supported(m.q, frozen)
    rows = tuple(((side, r), _run_inside(m, t, side, r, cap)) for side, r in _entries(m.q, frozen))
    return BehaviourTable(m.q, frozen, rows)


def behaviour2(m: TwoWayMachine, w: Sequence[Value]) -> BehaviourTable:
    check_word(m.sigma, w)
    return behaviour2_tape(m, [InL(x) for x in w])


def compose_behaviours(bu: BehaviourTable, bv: BehaviourTable) -> BehaviourTable:
    """Behaviour of uv from those of u and v, bouncing across the seam."""
    if bu.q != bv.q:
        raise TypeError("state descriptors differ")
    frozen = bu.frozen | bv.frozen
    cap = 2 * count_supported(bu.q, frozen) + 1
    rows = []
    worst = 0
    for side, q in _entries(bu.q, frozen):
        res, crossings = _bounce(bu, bv, side, q, cap)
        worst = max(worst, crossings)
        rows.append(((side, q), res))
    return BehaviourTable(bu.q, frozen, tuple(rows), worst)


def _bounce(bu, bv, side, q, cap):
    where = "u" if side == ENTER_LEFT else "v"
    crossings = 0
    while True:
        res = bu.lookup(side, q) if where == "u" else bv.lookup(side, q)
        if isinstance(res, bool):
            return res, crossings
        exit_side, q = res
        if where == "u" and exit_side == EXIT_LEFT:
            return (EXIT_LEFT, q), crossings
        if where == "v" and exit_side == EXIT_RIGHT:
            return (EXIT_RIGHT, q), crossings
        crossings += 1
        if crossings > cap:
            return False, crossings
        if where == "u":
            where, side = "v", ENTER_LEFT
        else:
            where, side = "u", ENTER_RIGHT


def identity_table(q: SetDesc, frozen=frozenset()) -> BehaviourTable:
    rows = tuple(((side, r), (EXIT_RIGHT if side == ENTER_LEFT else EXIT_LEFT, r)) for side, r in _entries(q, frozen))
    return BehaviourTable(q, frozenset(frozen), rows)


def framed_accept(m: TwoWayMachine, w: Sequence[Value]) -> bool:
    """Acceptance computed from the tables of the left marker and of w followed by the right marker."""
    b_left = behaviour2_tape(m, [LEFT_END])
    b_rest = behaviour2_tape(m, [InL(x) for x in w] + [RIGHT_END])
    cap = 2 * count_supported(m.q, b_left.frozen | b_rest.frozen) + 1
    res = b_rest.lookup(ENTER_LEFT, m.q0)
    for _ in range(cap):
        if isinstance(res, bool):
            return res
        side, q = res
        if side == EXIT_RIGHT:
            return False
        res = b_left.lookup(ENTER_RIGHT, q)
        if isinstance(res, bool):
            return res
        side, q = res
        if side == EXIT_LEFT:
            return False
        res = b_rest.lookup(ENTER_LEFT, q)
    return False


# -- run shapes ------------------------------------------------------------------------------

Visit = tuple  # (entered, left_toward, output): entered/left are "<" or ">", output a Value or None


@dataclass(frozen=True)
class RunShape:
    visits: tuple[tuple[Visit, ...], ...]
    bound: int

    def counts(self) -> list[int]:
        return [len(v) for v in self.visits]


def visit_bound(m: TwoWayMachine, w: Sequence[Value]) -> int:
    return 2 * count_supported(m.q, m.consts | word_support(w))


def run_shape(m: TwoWayMachine, w: Sequence[Value]) -> RunShape:
    if m.role != "transducer":
        raise TypeError("run shapes are defined for transducers")
    visits: list[list[Visit]] = [[] for _ in w]
    n = len(w)
    finished = False
    for pos, entered, _q, r in _trace(m, w):
        if isinstance(r, InR):
            if 1 <= pos <= n:
                raise NotNormalized("machine finishes inside the word")
            finished = True
            break
        o, d = r.v.r.l, r.v.r.r
        out = o.v if isinstance(o, InL) else None
        if 1 <= pos <= n:
            visits[pos - 1].append((dir_name(entered), dir_name(d), out))
        elif out is not None:
            raise NotNormalized("machine outputs on an end marker")
    if not finished:
        raise Loop("run did not finish")
    return RunShape(tuple(tuple(v) for v in visits), visit_bound(m, w))


class MalformedShape(ValueError):
    pass


def untangle(s: RunShape) -> list[Value]:
    """Retrace the run recorded in a shape and collect its output."""
    vs = s.visits
    n = len(vs)
    if n == 0:
        return []
    used = [[False] * len(v) for v in vs]

    def take(i, entered):
        for j, (e, _l, _o) in enumerate(vs[i]):
            if not used[i][j] and e == entered:
                used[i][j] = True
                return vs[i][j]
        return None

    out = []
    cur = take(0, ">")
    if cur is None:
        raise MalformedShape("no initial visit at position 1")
    i = 0
    while True:
        _e, leave, o = cur
        if o is not None:
            out.append(o)
        if leave == ">":
            if i + 1 < n:
                i += 1
                cur = take(i, ">")
                if cur is None:
                    raise MalformedShape(f"no continuation at position {i + 1}")
                continue
            cur = take(i, "<")  # bounce on the right marker
        else:
            if i > 0:
                i -= 1
                cur = take(i, "<")
                if cur is None:
                    raise MalformedShape(f"no continuation at position {i + 1}")
                continue
            cur = take(i, ">")  # bounce on the left marker
        if cur is None:
            break
    if not all(all(u) for u in used):
        raise MalformedShape("some visits are not on the run")
    return out

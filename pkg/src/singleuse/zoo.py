"""Machines and semigroups used throughout the docs, demos and tests."""

from __future__ import annotations

from .automata import SUAutomaton
from .pofset import (ATOMS, BOOL, NO, UNIT, YES, AtomV, InL, InR, Pair, Prod, Sum, U, boolv, enum_index, enum_value,
                     finite, power)
from .semigroup import SemigroupPresentation, presentation
from .sutree import compile_copies, compile_tree
from .twoway import LEFT, LEFT_END, RIGHT, RIGHT_END, TwoWayMachine, marked, out_desc

# -- one-way automata ----------------------------------------------------------------------
#
# States of the no-twice automaton: start + prev(a) + fail

NT_Q = Sum(UNIT, Sum(ATOMS, UNIT))
NT_START = InL(U)
NT_FAIL = InR(InR(U))


def nt_prev(a):
    return InR(InL(AtomV(a) if isinstance(a, int) else a))


def no_twice() -> SUAutomaton:
    """Rejects words with two equal consecutive letters.

    The register is destroyed by the comparison, so the letter is read twice.
    """

    def delta(v, t):
        (c1, c2), q = (v.l.l, v.l.r), v.r
        if isinstance(q, InL):
            return InR(InL(c2))
        if isinstance(q.v, InR):
            return NT_FAIL
        return NT_FAIL if t.eq(c1, q.v.v) else InR(InL(c2))

    def accept(q, t):
        return boolv(q != NT_FAIL)

    return SUAutomaton(ATOMS, NT_Q, NT_START, 2,
                       compile_tree(Prod(power(ATOMS, 2), NT_Q), NT_Q, delta),
                       compile_tree(NT_Q, BOOL, accept), name="no-twice")


def no_twice_permuted() -> SUAutomaton:
    """The same language with the state summands laid out as fail + (prev(a) + start)."""
    q_desc = Sum(UNIT, Sum(ATOMS, UNIT))
    start, fail = InR(InR(U)), InL(U)

    def delta(v, t):
        (c1, c2), q = (v.l.l, v.l.r), v.r
        if q == start:
            return InR(InL(c2))
        if q == fail:
            return fail
        return fail if t.eq(q.v.v, c1) else InR(InL(c2))

    return SUAutomaton(ATOMS, q_desc, start, 2,
                       compile_tree(Prod(power(ATOMS, 2), q_desc), q_desc, delta),
                       compile_tree(q_desc, BOOL, lambda q, t: boolv(q != fail)), name="no-twice-permuted")


def _three_state(name, first, accept_states):
    q_desc = Sum(UNIT, Sum(UNIT, UNIT))
    start = InL(U)

    def delta(cs, q, t):
        x = cs[0]
        return first(x, t) if q == start else q

    return SUAutomaton(ATOMS, q_desc, start, 1,
                       compile_copies(ATOMS, 1, q_desc, q_desc, delta),
                       compile_tree(q_desc, BOOL, lambda q, t: boolv(q in accept_states)), name=name)


def starts_with(a: int = 5) -> SUAutomaton:
    """Nonempty words whose first letter is the constant ``a``."""
    acc, rej = InR(InL(U)), InR(InR(U))
    return _three_state(f"starts-with-{a}", lambda x, t: acc if t.eq(x, a) else rej, {acc})


def reject_all() -> SUAutomaton:
    return SUAutomaton(ATOMS, UNIT, U, 1,
                       compile_tree(Prod(ATOMS, UNIT), UNIT, lambda v, t: U),
                       compile_tree(UNIT, BOOL, lambda q, t: NO), name="reject-all")


def even_length() -> SUAutomaton:
    """Ignores the letters; its states form the group Z2."""
    return SUAutomaton(ATOMS, BOOL, YES, 1,
                       compile_tree(Prod(ATOMS, BOOL), BOOL, lambda v, t: boolv(v.r != YES)),
                       compile_tree(BOOL, BOOL, lambda q, t: q), name="even-length")


# -- two-way machines ------------------------------------------------------------------------

def _two_way(role, sigma, q_desc, q0, k, fn, gamma=None, name=""):
    m0 = TwoWayMachine.__new__(TwoWayMachine)
    object.__setattr__(m0, "role", role)
    object.__setattr__(m0, "q", q_desc)
    object.__setattr__(m0, "gamma", gamma)
    delta = compile_copies(marked(sigma), k, q_desc, out_desc(m0), fn)
    return TwoWayMachine(role, sigma, q_desc, q0, k, delta, gamma, name)


def _move(q, d, out=None):
    """Transducer step: go to q, emit ``out`` (or nothing), move in direction d."""
    return InL(Pair(q, Pair(InR(U) if out is None else InL(out), d)))


FINISH = InR(U)


def reverse_transducer(sigma=ATOMS) -> TwoWayMachine:
    """Walk to the right marker silently, then emit letters walking back."""
    fwd, back = InL(U), InR(U)

    def delta(cs, q, t):
        x = cs[0]
        if q == fwd:
            return _move(back, LEFT) if x == RIGHT_END else _move(fwd, RIGHT)
        if x == LEFT_END:
            return FINISH
        if x == RIGHT_END:
            return _move(back, LEFT)
        return _move(back, LEFT, x.v)

    return _two_way("transducer", sigma, BOOL, fwd, 1, delta, sigma, "reverse")


SEP_SIGMA = Sum(ATOMS, UNIT)
SEP = InR(U)


def map_dup_transducer() -> TwoWayMachine:
    """Copy a block, walk back to its start, copy it again, emit the separator."""
    q_desc = finite(3)
    copy1, back, copy2 = (enum_value(3, i) for i in range(3))

    def delta(cs, q, t):
        x = cs[0]
        if q == copy1:
            if x == LEFT_END:
                return _move(copy1, RIGHT)
            if x == RIGHT_END or x.v == SEP:
                return _move(back, LEFT)
            return _move(copy1, RIGHT, x.v)
        if q == back:
            if x == LEFT_END or (isinstance(x, InL) and x.v == SEP):
                return _move(copy2, RIGHT)
            if x == RIGHT_END:
                return _move(back, LEFT)
            return _move(back, LEFT)
        if x == RIGHT_END:
            return FINISH
        if x == LEFT_END:
            return _move(copy2, RIGHT)
        if x.v == SEP:
            return _move(copy1, RIGHT, SEP)
        return _move(copy2, RIGHT, x.v)

    return _two_way("transducer", SEP_SIGMA, q_desc, copy1, 1, delta, SEP_SIGMA, "map-dup")


def silent_transducer() -> TwoWayMachine:
    """Finishes immediately with empty output."""
    return _two_way("transducer", ATOMS, UNIT, U, 1, lambda cs, q, t: FINISH, ATOMS, "silent")


def _acc_move(q, d):
    return InL(Pair(q, d))


def no_twice_two_way() -> TwoWayMachine:
    """The no-twice automaton run as a single left-to-right sweep."""

    def delta(cs, q, t):
        c1, c2 = cs
        if c1 == RIGHT_END:
            return InR(boolv(q != NT_FAIL))
        if c1 == LEFT_END:
            return _acc_move(q, RIGHT)
        if isinstance(q, InL):
            return _acc_move(InR(InL(c2.v)), RIGHT)
        if isinstance(q.v, InR):
            return _acc_move(NT_FAIL, RIGHT)
        nxt = NT_FAIL if t.eq(c1.v, q.v.v) else InR(InL(c2.v))
        return _acc_move(nxt, RIGHT)

    return _two_way("acceptor", ATOMS, NT_Q, NT_START, 2, delta, name="no-twice-2way")


def first_equals_last() -> TwoWayMachine:
    """Nonempty words whose first and last letters coincide (uses a bounce)."""
    q_desc = Sum(UNIT, Sum(ATOMS, ATOMS))
    start = InL(U)

    def delta(cs, q, t):
        x = cs[0]
        if q == start:
            if isinstance(x, InL):
                return _acc_move(InR(InL(x.v)), RIGHT)
            return InR(NO)
        if isinstance(q.v, InL):
            if x == RIGHT_END:
                return _acc_move(InR(InR(q.v.v)), LEFT)
            if x == LEFT_END:
                return InR(NO)
            return _acc_move(q, RIGHT)
        if isinstance(x, InL):
            return InR(boolv(t.eq(x.v, q.v.v)))
        return InR(NO)

    return _two_way("acceptor", ATOMS, q_desc, start, 1, delta, name="first-equals-last")


def reject_all_two_way() -> TwoWayMachine:
    return _two_way("acceptor", ATOMS, UNIT, U, 1, lambda cs, q, t: InR(NO), name="reject-all-2way")


def looping_two_way() -> TwoWayMachine:
    """Bounces between the end markers forever."""

    def delta(cs, q, t):
        return _acc_move(U, LEFT if cs[0] == RIGHT_END else RIGHT)

    return _two_way("acceptor", ATOMS, UNIT, U, 1, delta, name="looping")


# -- semigroups ------------------------------------------------------------------------------
#
# three-class semigroup: A^2 + bottom + 1

TC_CARRIER = Sum(Prod(ATOMS, ATOMS), Sum(UNIT, UNIT))
TC_BOT = InR(InL(U))
TC_ONE = InR(InR(U))


def tc_pair(a, b):
    return InL(Pair(AtomV(a), AtomV(b)))


def three_class() -> SemigroupPresentation:
    """(a,b)(c,d) = (a,d) if b != c, bottom otherwise; plus an identity."""

    def mul(cs, t):
        x, y = cs[0].l, cs[0].r
        if x == TC_ONE:
            return y
        if y == TC_ONE:
            return x
        if x == TC_BOT or y == TC_BOT:
            return TC_BOT
        (a, b), (c, d) = (x.v.l, x.v.r), (y.v.l, y.v.r)
        return TC_BOT if t.eq(b, c) else InL(Pair(a, d))

    return presentation(TC_CARRIER, mul, name="three-class")


def f_cmp_semigroup() -> SemigroupPresentation:
    """A^2 with (a,b)(c,d) = (a,d)."""
    return presentation(Prod(ATOMS, ATOMS), lambda cs, t: Pair(cs[0].l.l, cs[0].r.r), name="f-cmp")


# single-use atom propagation: eps + a + bot + down + a-down

SP_CARRIER = Sum(UNIT, Sum(ATOMS, Sum(UNIT, Sum(UNIT, ATOMS))))
SP_EPS = InL(U)
SP_BOT = InR(InR(InL(U)))
SP_DOWN = InR(InR(InR(InL(U))))


def sp_store(a):
    return InR(InL(AtomV(a) if isinstance(a, int) else a))


def sp_out(a):
    return InR(InR(InR(InR(AtomV(a) if isinstance(a, int) else a))))


def _sp_kind(x):
    if x == SP_EPS:
        return "eps"
    if isinstance(x.v, InL):
        return "store"
    if x == SP_BOT:
        return "bot"
    if x == SP_DOWN:
        return "down"
    return "out"


def su_prop_semigroup() -> SemigroupPresentation:
    def mul(cs, t):
        x, y = cs[0].l, cs[0].r
        kx, ky = _sp_kind(x), _sp_kind(y)
        if ky == "eps":
            return x if kx in ("eps", "store", "bot") else SP_BOT
        if ky == "down":
            if kx == "eps":
                return SP_DOWN
            if kx == "store":
                return sp_out(x.v.v)
            return SP_BOT
        return y

    return presentation(SP_CARRIER, mul, name="su-prop")


def t2_min() -> SemigroupPresentation:
    """Maps {0,1} -> {0,1} under composition, times ({0,1}, min); eight elements, no atoms."""
    carrier = Prod(finite(4), finite(2))

    def mul(cs, t):
        x, y = cs[0].l, cs[0].r
        fx, fy = enum_index(4, x.l), enum_index(4, y.l)
        tx = (fx >> 1, fx & 1)
        ty = (fy >> 1, fy & 1)
        comp = (ty[tx[0]], ty[tx[1]])
        m = min(enum_index(2, x.r), enum_index(2, y.r))
        return Pair(enum_value(4, 2 * comp[0] + comp[1]), enum_value(2, m))

    return presentation(carrier, mul, name="t2-min")


# -- Mealy machines ----------------------------------------------------------------------------
#
# bits: eps (empty register) + black + white

BITS = finite(3)
BIT_EPS, BIT_BLACK, BIT_WHITE = (enum_value(3, i) for i in range(3))


def bit_prop():
    """Outputs the register, then stores the letter unless it is eps."""
    from .transduce import mealy

    def fn(cs, q, t):
        x = cs[0]
        return Pair(q if x == BIT_EPS else x, q)

    return mealy(BITS, BITS, BITS, BIT_EPS, 1, fn, name="bit-prop")


# P-prefix: eps is the identity, and a non-identity right factor wins
P_TABLE = ((0, 1, 2), (1, 1, 2), (2, 1, 2))


def monoid_prefix(table, name="prefix"):
    """Products of the input prefixes in a finite monoid with identity 0."""
    from .transduce import mealy
    n = len(table)
    m_desc = finite(n)

    def fn(cs, q, t):
        p = enum_value(n, table[enum_index(n, q)][enum_index(n, cs[0])])
        return Pair(p, p)

    return mealy(m_desc, m_desc, m_desc, enum_value(n, 0), 1, fn, name=name)


def p_prefix():
    return monoid_prefix(P_TABLE, "P-prefix")


Z2_TABLE = ((0, 1), (1, 0))


def z2_prefix():
    return monoid_prefix(Z2_TABLE, "Z2-prefix")


def relabel_bits():
    """Letter-to-letter relabelling that swaps black and white."""
    from .transduce import mealy

    def fn(cs, q, t):
        x = cs[0]
        return Pair(U, BIT_WHITE if x == BIT_BLACK else BIT_BLACK if x == BIT_WHITE else BIT_EPS)

    return mealy(BITS, BITS, UNIT, U, 1, fn, name="relabel")


# single-use atom propagation: letters a + down + eps, outputs a + eps

SUP_SIGMA = Sum(ATOMS, Sum(UNIT, UNIT))
SUP_DOWN = InR(InL(U))
SUP_EPS = InR(InR(U))
SUP_GAMMA = Sum(ATOMS, UNIT)
SUP_NONE = InR(U)


def sup_letter(x):
    """Shorthand: an int stores the atom, 'v' is down, None is eps."""
    if x is None:
        return SUP_EPS
    if x == "v":
        return SUP_DOWN
    return InL(AtomV(x))


def su_prop_mealy():
    from .transduce import mealy

    def fn(cs, q, t):
        x = cs[0]
        if x == SUP_DOWN:
            return Pair(SUP_NONE, q)
        if x == SUP_EPS:
            return Pair(q, SUP_NONE)
        return Pair(InL(x.v), SUP_NONE)

    return mealy(SUP_SIGMA, SUP_GAMMA, SUP_GAMMA, SUP_NONE, 1, fn, name="su-prop")


def atom_copy():
    """Reads each atom twice and outputs the pair (a, a)."""
    from .transduce import mealy
    return mealy(ATOMS, Prod(ATOMS, ATOMS), UNIT, U, 2, lambda cs, q, t: Pair(U, Pair(cs[0], cs[1])),
                 name="atom-copy")


# -- semigroup transductions --------------------------------------------------------------------

def f_cmp():
    """Compares every letter with the first one; not computable by a single-use Mealy machine."""
    from .sutree import compile_multi
    from .transduce import SemigroupTransduction
    S = f_cmp_semigroup()
    h = compile_multi(ATOMS, Prod(ATOMS, ATOMS), 2, lambda cs, t: Pair(cs[0], cs[1]))
    lam = compile_multi(Prod(ATOMS, ATOMS), BOOL, 1, lambda cs, t: boolv(t.eq(cs[0].l, cs[0].r)))
    return SemigroupTransduction(S, h, lam, ATOMS, BOOL, name="f-cmp")


def su_prop_transduction():
    from .sutree import compile_multi
    from .transduce import SemigroupTransduction
    S = su_prop_semigroup()

    def h(cs, t):
        x = cs[0]
        if x == SUP_DOWN:
            return SP_DOWN
        if x == SUP_EPS:
            return SP_EPS
        return sp_store(x.v)

    def lam(cs, t):
        x = cs[0]
        return InL(x.v.v.v.v) if _sp_kind(x) == "out" else SUP_NONE

    return SemigroupTransduction(S, compile_multi(SUP_SIGMA, SP_CARRIER, 1, h),
                                 compile_multi(SP_CARRIER, SUP_GAMMA, 1, lam), SUP_SIGMA, SUP_GAMMA,
                                 name="su-prop")


def swap_first_last():
    """Rational transduction exchanging the first and the last letter."""
    from .sutree import compile_multi
    from .transduce import RationalTransduction
    S = f_cmp_semigroup()
    h = compile_multi(ATOMS, Prod(ATOMS, ATOMS), 2, lambda cs, t: Pair(cs[0], cs[1]))
    s1 = Sum(Prod(ATOMS, ATOMS), UNIT)

    def lam(cs, t):
        (p, (a, s)) = cs[0].l, (cs[0].r.l, cs[0].r.r)
        if isinstance(p, InR):  # first position
            return a if isinstance(s, InR) else s.v.r
        if isinstance(s, InR):  # last position
            return p.v.l
        return a

    lam3 = compile_multi(Prod(s1, Prod(ATOMS, s1)), ATOMS, 1, lam)
    return RationalTransduction(S, h, lam3, ATOMS, ATOMS, name="swap-first-last")

"""Single-use Mealy machines, semigroup transductions and their rational variant,
with decision procedures for locality and future independence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .atoms import Atom, FinPermutation
from .automata import check_word
from .pofset import (UNIT, InL, InR, Pair, Prod, SetDesc, U, Value, act, atoms_of, canon_with_perm, check,
                     enumerate_orbit_reps, power, replicate, support, tuple_value, untuple)
from .semigroup import ONE, Generated, Semigroup, generate, is_idempotent, placements
from .sutree import (MultiTree, SUTree, TreeError, apply_traced, basic, compile_copies, compile_tree, compose,
                     fingerprint, least_support, orbit_key, single, single_use_violations)

Word = Sequence[Value]


# -- Mealy machines -----------------------------------------------------------------------------

@dataclass(frozen=True)
class MealyMachine:
    sigma: SetDesc
    gamma: SetDesc
    q: SetDesc
    q0: Value
    k: int
    delta: SUTree
    name: str = ""

    def __post_init__(self):
        if self.delta.dom != Prod(power(self.sigma, self.k), self.q):
            raise TreeError("transition domain must be sigma^k x Q")
        if self.delta.cod != Prod(self.q, self.gamma):
            raise TreeError("transition codomain must be Q x gamma")
        if not check(self.q, self.q0):
            raise TypeError("initial state is not in Q")
        problems = single_use_violations(self.delta)
        if problems:
            raise TreeError("; ".join(problems[:3]))

    @property
    def consts(self) -> frozenset[Atom]:
        return self.delta.consts | support(self.q0)


def mealy(sigma, gamma, q, q0, k, fn, name="") -> MealyMachine:
    """Build a machine from a traced ``fn(letter_copies, state, tracer) -> (state, output)``."""
    delta = compile_copies(sigma, k, q, Prod(q, gamma), lambda cs, s, t: fn(cs, s, t))
    return MealyMachine(sigma, gamma, q, q0, k, delta, name)


def mealy_step(m: MealyMachine, q: Value, letter: Value) -> tuple[Value, Value]:
    r = m.delta(Pair(replicate(letter, m.k), q))
    return r.l, r.r


def mealy_run(m: MealyMachine, w: Word) -> list[Value]:
    check_word(m.sigma, w)
    q = m.q0
    out = []
    for x in w:
        q, y = mealy_step(m, q, x)
        out.append(y)
    return out


def identity_mealy(sigma: SetDesc) -> MealyMachine:
    return mealy(sigma, sigma, UNIT, U, 1, lambda cs, s, t: Pair(U, cs[0]), name="id")


def mealy_seq(m2: MealyMachine, m1: MealyMachine) -> MealyMachine:
    """Run m1, then feed its output to m2.

    m2 reads every letter k2 times, so m1 is simulated by k2 identical copies.
    """
    if m1.gamma != m2.sigma:
        raise TypeError("output alphabet of the first machine is not the input of the second")
    k1, k2 = m1.k, m2.k
    q1s = power(m1.q, k2)
    q = Prod(q1s, m2.q)

    def fn(cs, s, t):
        states = untuple(s.l, k2)
        new1, outs = [], []
        for j in range(k2):
            r = apply_traced(m1.delta, Pair(tuple_value(*cs[j * k1:(j + 1) * k1]), states[j]), t)
            new1.append(r.l)
            outs.append(r.r)
        r2 = apply_traced(m2.delta, Pair(tuple_value(*outs), s.r), t)
        return Pair(Pair(tuple_value(*new1), r2.l), r2.r)

    q0 = Pair(replicate(m1.q0, k2), m2.q0)
    return mealy(m1.sigma, m2.gamma, q, q0, k1 * k2, fn, name=f"{m2.name}.{m1.name}")


def mealy_par(m1: MealyMachine, m2: MealyMachine) -> MealyMachine:
    """Run both machines side by side on pairs of letters."""
    k = max(m1.k, m2.k)
    q = Prod(m1.q, m2.q)

    def fn(cs, s, t):
        a = tuple_value(*[c.l for c in cs[:m1.k]])
        b = tuple_value(*[c.r for c in cs[:m2.k]])
        r1 = apply_traced(m1.delta, Pair(a, s.l), t)
        r2 = apply_traced(m2.delta, Pair(b, s.r), t)
        return Pair(Pair(r1.l, r2.l), Pair(r1.r, r2.r))

    return mealy(Prod(m1.sigma, m2.sigma), Prod(m1.gamma, m2.gamma), q, Pair(m1.q0, m2.q0), k, fn,
                 name=f"{m1.name}|{m2.name}")


def multiplicity_ok(w: Word, out: Word, k: int, const_occurrences: int = 0) -> bool:
    """Each atom occurs in ``out`` at most k times its input count plus ``const_occurrences``."""
    from collections import Counter
    cin = Counter(a for x in w for a in atoms_of(x))
    cout = Counter(a for y in out for a in atoms_of(y))
    return all(n <= k * cin.get(a, 0) + const_occurrences for a, n in cout.items())


def const_occurrences(t: SUTree) -> int:
    """Maximal number of constant operands in a leaf."""
    from .sutree import Const, Leaf, _walk
    best = 0
    for b in t.branches:
        for n in _walk(b):
            if isinstance(n, Leaf):
                best = max(best, sum(isinstance(o, Const) for o in n.out))
    return best


# -- semigroups of behaviours ------------------------------------------------------------------

@dataclass(eq=False)
class BehaviourSemigroup(Semigroup):
    """Trees Q -o Q x gamma; the product runs the first tree, drops its output, runs the second."""

    q: SetDesc
    gamma: SetDesc
    base_consts: frozenset = frozenset()
    _supp: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.consts = frozenset(self.base_consts)
        self._proj = basic("proj1", self.q, self.gamma)

    def mul(self, x: SUTree, y: SUTree) -> SUTree:
        return compose(y, compose(self._proj, x))

    def eq(self, x, y) -> bool:
        frozen = self.consts | x.consts | y.consts
        return fingerprint(x, frozen) == fingerprint(y, frozen)

    def support(self, x):
        hit = self._supp.get(x)
        if hit is None:
            hit = least_support(single(x))
            self._supp[x] = hit
        return hit

    def act(self, p, x):
        from .sutree import rename_consts
        return rename_consts(x, p)

    def key(self, x, frozen=()):
        return orbit_key(single(x), frozenset(frozen) | self.consts)


# -- semigroup transductions ---------------------------------------------------------------------

def _as_fn(f):
    if isinstance(f, MultiTree):
        return f.__call__
    if isinstance(f, SUTree):
        return f.__call__
    return f


def _consts_of(f) -> frozenset:
    if isinstance(f, (MultiTree, SUTree)):
        return f.consts
    return frozenset()


@dataclass(eq=False)
class SemigroupTransduction:
    S: Semigroup
    h: object  # MultiTree sigma -o_k carrier, or a function
    lam: object  # MultiTree carrier -o_k gamma, or a function
    sigma: SetDesc
    gamma: SetDesc
    extra_consts: frozenset = frozenset()
    name: str = ""

    @property
    def consts(self) -> frozenset[Atom]:
        return self.S.consts | _consts_of(self.h) | _consts_of(self.lam) | frozenset(self.extra_consts)

    def hv(self, a):
        return _as_fn(self.h)(a)

    def lv(self, x):
        return _as_fn(self.lam)(x)


def transduction_eval(t: SemigroupTransduction, w: Word) -> list[Value]:
    check_word(t.sigma, w)
    out = []
    p = ONE
    for x in w:
        p = t.S.mul1(p, t.hv(x))
        out.append(t.lv(p))
    return out


def mealy_to_transduction(m: MealyMachine) -> SemigroupTransduction:
    S = BehaviourSemigroup(m.q, m.gamma, m.consts)
    cache: dict = {}

    def h(a):
        hit = cache.get(a)
        if hit is None:
            lv = replicate(a, m.k)
            hit = compile_tree(m.q, Prod(m.q, m.gamma), lambda s, t: apply_traced(m.delta, Pair(lv, s), t))
            cache[a] = hit
        return hit

    def lam(f):
        return f(m.q0).r

    return SemigroupTransduction(S, h, lam, m.sigma, m.gamma, m.consts, name=f"behaviours({m.name})")


def fullify(t: SemigroupTransduction) -> Generated:
    gens = [t.hv(a) for a in enumerate_orbit_reps(t.sigma, t.consts)]
    return generate(t.S, gens, consts=t.consts)


@dataclass
class LocalityResult:
    local: bool
    witness: dict | None = None
    checked: int = 0

    def __bool__(self):
        return self.local


def _elements1(G: Generated, frozen):
    return [ONE] + G.elements(frozen)


def is_local(t: SemigroupTransduction, variant: str = "definition", fuzz: int = 0, seed: int = 0) -> LocalityResult:
    """Decide whether the output function satisfies the locality equation.

    With e = y z idempotent and x' ranging over the supp(e)-orbit of x, the
    definition compares lam(x e y) with lam(x' e y); ``variant="algorithm"``
    compares lam(x y z) with lam(x' y z) instead.
    """
    if variant not in ("definition", "algorithm"):
        raise ValueError(f"unknown variant {variant!r}")
    G = fullify(t)
    S = G
    C = G.consts
    checked = 0
    for y in _elements1(G, C):
        ay = frozenset() if y is ONE else S.atoms(y)
        for z in _elements1(G, C | ay):
            if y is ONE and z is ONE:
                continue
            e = S.mul1(y, z)
            if not is_idempotent(S, e):
                continue
            se = S.support(e) | C
            az = frozenset() if z is ONE else S.atoms(z)
            tail = S.mul1(e, y) if variant == "definition" else e
            fixed = se | ay | az
            # one x per supp(e)-orbit; its mates are placed relative to everything else in sight
            for x in G.elements(se):
                base = t.lv(S.mul1(x, tail))
                for p in placements(S.atoms(x) - se, fixed, se):
                    x2 = S.act(p, x)
                    checked += 1
                    other = t.lv(S.mul1(x2, tail))
                    if other != base:
                        return LocalityResult(False, {"x": x, "x'": x2, "y": y, "z": z, "e": e,
                                                      "out": base, "out'": other}, checked)
    if fuzz:
        w = _fuzz_local(t, fuzz, seed, variant)
        if w is not None:
            return LocalityResult(False, w, checked)
    return LocalityResult(True, None, checked)


def _random_word(t, rng, n, pool):
    letters = []
    for _ in range(n):
        reps = enumerate_orbit_reps(t.sigma, t.consts)
        r = rng.choice(reps)
        m = {a: rng.choice(pool) for a in support(r) - t.consts}
        letters.append(act(FinPermutation.extending(_injective(m, t.consts, pool, rng)), r))
    return letters


def _injective(m, consts, pool, rng):
    # make a random map injective by dropping clashing images
    out, used = {}, set(consts)
    for a, b in m.items():
        if b not in used:
            out[a] = b
            used.add(b)
    return out


def _fuzz_local(t, rounds, seed, variant):
    """Random concrete instances of the locality equation; a counterexample or None."""
    rng = random.Random(seed)
    S = t.S
    pool = list(range(max(t.consts, default=-1) + 1, max(t.consts, default=-1) + 7))

    def elem(n):
        w = _random_word(t, rng, n, pool)
        return S.fold([t.hv(a) for a in w]) if w else ONE

    for _ in range(rounds):
        x, y, z = elem(rng.randint(1, 3)), elem(rng.randint(0, 3)), elem(rng.randint(0, 3))
        if x is ONE or (y is ONE and z is ONE):
            continue
        e = S.mul1(y, z)
        if not is_idempotent(S, e):
            e = None
            continue
        se = S.support(e) | t.consts
        movable = sorted(S.atoms(x) - se)
        if not movable:
            continue
        targets = [a for a in pool + [max(pool) + 1 + i for i in range(len(movable))] if a not in se]
        rng.shuffle(targets)
        p = FinPermutation.extending(_injective(dict(zip(movable, targets)), se, targets, rng))
        tail = S.mul1(e, y) if variant == "definition" else e
        if t.lv(S.mul1(x, tail)) != t.lv(S.mul1(S.act(p, x), tail)):
            return {"x": x, "x'": S.act(p, x), "y": y, "z": z, "e": e, "fuzz": True}
    return None


# -- rational transductions ------------------------------------------------------------------------

def s1_value(x) -> Value:
    """Encode an element of S^1 (for presentations) as carrier + 1."""
    return InR(U) if x is ONE else InL(x)


@dataclass(eq=False)
class RationalTransduction:
    S: Semigroup
    h: object
    lam3: Callable  # (prefix or ONE, letter, suffix or ONE) -> output
    sigma: SetDesc
    gamma: SetDesc
    extra_consts: frozenset = frozenset()
    name: str = ""

    @property
    def consts(self) -> frozenset[Atom]:
        return self.S.consts | _consts_of(self.h) | _consts_of(self.lam3) | frozenset(self.extra_consts)

    def hv(self, a):
        return _as_fn(self.h)(a)

    def lv(self, x, a, y):
        if isinstance(self.lam3, MultiTree):
            return self.lam3(Pair(s1_value(x), Pair(a, s1_value(y))))
        return self.lam3(x, a, y)


def rational_eval(t: RationalTransduction, w: Word) -> list[Value]:
    check_word(t.sigma, w)
    hs = [t.hv(a) for a in w]
    n = len(w)
    suffix = [ONE] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = t.S.mul1(hs[i], suffix[i + 1])
    out = []
    prefix = ONE
    for i, a in enumerate(w):
        out.append(t.lv(prefix, a, suffix[i + 1]))
        prefix = t.S.mul1(prefix, hs[i])
    return out


def _rational_gen(t: RationalTransduction) -> Generated:
    gens = [t.hv(a) for a in enumerate_orbit_reps(t.sigma, t.consts)]
    return generate(t.S, gens, consts=t.consts)


def is_local_rational(t: RationalTransduction) -> LocalityResult:
    """Check lam(x1 e y1, a, x2 e y2) = lam(pi x1 e y1, a, x2 e pi y2) whenever e = y1 h(a) x2 is idempotent."""
    G = _rational_gen(t)
    S = G
    C = G.consts
    checked = 0
    for a in enumerate_orbit_reps(t.sigma, C):
        ha = t.hv(a)
        fa = C | support(a)
        for y1 in G.elements(fa):
            a1 = fa | S.atoms(y1)
            for x2 in G.elements(a1):
                e = S.mul(S.mul(y1, ha), x2)
                if not is_idempotent(S, e):
                    continue
                se = S.support(e) | C
                fixed = a1 | S.atoms(x2) | se
                # (x1, y2) up to supp(e)-orbits, then every placement of the pair among the rest
                for x1 in G.elements(se):
                    for y2 in G.elements(se | S.atoms(x1)):
                        base = t.lv(S.mul(S.mul(x1, e), y1), a, S.mul(S.mul(x2, e), y2))
                        for p in placements((S.atoms(x1) | S.atoms(y2)) - se, fixed, se):
                            checked += 1
                            l2 = S.mul(S.mul(S.act(p, x1), e), y1)
                            r2 = S.mul(S.mul(x2, e), S.act(p, y2))
                            other = t.lv(l2, a, r2)
                            if other != base:
                                return LocalityResult(False, {"x1": x1, "y1": y1, "a": a, "x2": x2, "y2": y2,
                                                              "e": e, "pi": p.items(), "out": base, "out'": other},
                                                      checked)
    return LocalityResult(True, None, checked)


def is_future_independent(t: RationalTransduction) -> bool:
    """Whether lam(x, a, y) never depends on the suffix y (including the empty suffix)."""
    G = _rational_gen(t)
    C = G.consts
    for a in enumerate_orbit_reps(t.sigma, C):
        fa = C | support(a)
        for x in [ONE] + G.elements(fa):
            fx = fa | (frozenset() if x is ONE else G.atoms(x))
            base = t.lv(x, a, ONE)
            for y in G.elements(fx):
                if t.lv(x, a, y) != base:
                    return False
    return True


def to_rational(t: SemigroupTransduction) -> RationalTransduction:
    S = t.S

    def lam3(x, a, y):
        return t.lv(S.mul1(x, t.hv(a)))

    return RationalTransduction(S, t.h, lam3, t.sigma, t.gamma, t.consts, name=f"rational({t.name})")


@dataclass(eq=False)
class LastLetterSemigroup(Semigroup):
    """Pairs (x, a) with x in S^1: (x1, a1)(x2, a2) = (x1 h(a1) x2, a2)."""

    base: Semigroup
    h: Callable
    sigma: SetDesc
    extra_consts: frozenset = frozenset()

    def __post_init__(self):
        self.consts = self.base.consts | frozenset(self.extra_consts)

    def mul(self, u, v):
        (x1, a1), (x2, a2) = u, v
        return (self.base.mul1(self.base.mul1(x1, self.h(a1)), x2), a2)

    def eq(self, u, v):
        return u[1] == v[1] and self.base.eq1(u[0], v[0])

    def atoms(self, u):
        return (frozenset() if u[0] is ONE else self.base.atoms(u[0])) | support(u[1])

    def support(self, u):
        return (frozenset() if u[0] is ONE else self.base.support(u[0])) | support(u[1])

    def act(self, p, u):
        x, a = u
        return (x if x is ONE else self.base.act(p, x), act(p, a))

    def key(self, u, frozen=()):
        frozen = frozenset(frozen) | self.consts
        x, a = u
        ca, p = canon_with_perm(a, frozen)
        if x is ONE:
            return (ca, "one")
        return (ca, self.base.key(self.base.act(p, x), frozen | support(ca)))


def to_oneway(t: RationalTransduction) -> SemigroupTransduction:
    if not is_future_independent(t):
        raise ValueError("the rational transduction is not future independent")
    S2 = LastLetterSemigroup(t.S, t.hv, t.sigma, t.consts)

    def h(a):
        return (ONE, a)

    def lam(u):
        return t.lv(u[0], u[1], ONE)

    return SemigroupTransduction(S2, h, lam, t.sigma, t.gamma, t.consts, name=f"oneway({t.name})")

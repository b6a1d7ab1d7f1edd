"""One-way single-use automata."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .atoms import Atom
from .pofset import (BOOL, YES, Pair, Prod, SetDesc, Value, act, boolv, canon_with_perm, check,
                     enumerate_orbit_reps, power, replicate, support, tuple_value, untuple)
from .sutree import (MultiTree, SUTree, TreeError, Fingerprint, apply_traced, compile_tree, compose,
                     fingerprint, orbit_key, single, single_use_violations, basic)

Word = Sequence[Value]


def word_support(w: Word) -> frozenset[Atom]:
    out: set[Atom] = set()
    for x in w:
        out |= support(x)
    return frozenset(out)


def act_word(p, w: Word) -> list[Value]:
    return [act(p, x) for x in w]


def check_word(sigma: SetDesc, w: Word) -> None:
    for i, x in enumerate(w):
        if not check(sigma, x):
            raise TypeError(f"letter {i} ({x!r}) is not in {sigma!r}")


@dataclass(frozen=True)
class SUAutomaton:
    sigma: SetDesc
    q: SetDesc
    q0: Value
    k: int
    delta: SUTree
    accept: SUTree
    name: str = ""

    def __post_init__(self):
        if self.delta.dom != Prod(power(self.sigma, self.k), self.q) or self.delta.cod != self.q:
            raise TreeError("transition tree must have type sigma^k x Q -o Q")
        if self.accept.dom != self.q or self.accept.cod != BOOL:
            raise TreeError("acceptance tree must have type Q -o 1+1")
        if not check(self.q, self.q0):
            raise TypeError("initial state is not in Q")
        for t in (self.delta, self.accept):
            problems = single_use_violations(t)
            if problems:
                raise TreeError("; ".join(problems[:3]))

    @property
    def consts(self) -> frozenset[Atom]:
        return self.delta.consts | self.accept.consts | support(self.q0)


def step(a: SUAutomaton, q: Value, letter: Value) -> Value:
    return a.delta(Pair(replicate(letter, a.k), q))


def run_state(a: SUAutomaton, w: Word) -> Value:
    check_word(a.sigma, w)
    q = a.q0
    for x in w:
        q = step(a, q, x)
    return q


def accepts_state(a: SUAutomaton, q: Value) -> bool:
    return a.accept(q) == YES


def run(a: SUAutomaton, w: Word) -> bool:
    return accepts_state(a, run_state(a, w))


def reachable_with_words(a: SUAutomaton) -> dict[Value, list[Value]]:
    """Canonical reachable states, each with a word leading to it."""
    consts = a.consts
    q0, _ = canon_with_perm(a.q0, consts)
    seen = {q0: []}
    todo = deque([q0])
    while todo:
        s = todo.popleft()
        w = seen[s]
        for x in enumerate_orbit_reps(a.sigma, consts | support(s)):
            nxt, p = canon_with_perm(step(a, s, x), consts)
            if nxt not in seen:
                seen[nxt] = act_word(p, w + [x])
                todo.append(nxt)
    return seen


def reachable(a: SUAutomaton) -> list[Value]:
    return list(reachable_with_words(a))


def find_word(a: SUAutomaton) -> list[Value] | None:
    """A shortest-ish accepted word, or None when the language is empty."""
    for s, w in reachable_with_words(a).items():
        if accepts_state(a, s):
            return w
    return None


def is_empty(a: SUAutomaton) -> bool:
    return find_word(a) is None


def _split_letters(v: Value, ka: int, kb: int):
    copies = untuple(v, ka + kb)
    return tuple_value(*copies[:ka]), tuple_value(*copies[ka:])


def xor_product(a: SUAutomaton, b: SUAutomaton) -> SUAutomaton:
    """Automaton for the symmetric difference of the two languages.

    Each letter copy may be used once, so the product needs ka + kb copies.
    """
    if a.sigma != b.sigma:
        raise TypeError("alphabets differ")
    ka, kb = a.k, b.k
    q = Prod(a.q, b.q)

    def delta(v, t):
        la, lb = _split_letters(v.l, ka, kb)
        qa = apply_traced(a.delta, Pair(la, v.r.l), t)
        qb = apply_traced(b.delta, Pair(lb, v.r.r), t)
        return Pair(qa, qb)

    def accept(v, t):
        x = apply_traced(a.accept, v.l, t) == YES
        y = apply_traced(b.accept, v.r, t) == YES
        return boolv(x != y)

    return SUAutomaton(a.sigma, q, Pair(a.q0, b.q0), ka + kb,
                       compile_tree(Prod(power(a.sigma, ka + kb), q), q, delta),
                       compile_tree(q, BOOL, accept), name=f"xor({a.name},{b.name})")


def equivalent(a: SUAutomaton, b: SUAutomaton) -> bool:
    return is_empty(xor_product(a, b))


# -- behaviours ----------------------------------------------------------------------------

@dataclass(frozen=True)
class BehaviourElem:
    rep: MultiTree
    key: Fingerprint
    word: tuple[Value, ...] = ()
    orbit: object = None

    def __call__(self, q: Value) -> Value:
        return self.rep(q)


def letter_tree(a: SUAutomaton, letter: Value) -> SUTree:
    """The transition tree with the letter plugged in as constants."""
    lv = replicate(letter, a.k)
    return compile_tree(a.q, a.q, lambda s, t: apply_traced(a.delta, Pair(lv, s), t))


def behaviour_tree(a: SUAutomaton, w: Word) -> SUTree:
    check_word(a.sigma, w)
    t = basic("id", a.q)
    for x in w:
        t = compose(letter_tree(a, x), t)
    return t


def behaviour(a: SUAutomaton, w: Word) -> BehaviourElem:
    m = single(behaviour_tree(a, w))
    return BehaviourElem(m, fingerprint(m, a.consts | word_support(w)), tuple(w))


def compose_behaviours(bv: BehaviourElem, bu: BehaviourElem) -> BehaviourElem:
    """b_v after b_u, i.e. the behaviour of the word uv."""
    m = single(compose(bv.rep.tree, bu.rep.tree))
    w = bu.word + bv.word
    frozen = bu.key.frozen | bv.key.frozen
    return BehaviourElem(m, fingerprint(m, frozen), w)


@dataclass
class BehaviourMonoid:
    elements: list[BehaviourElem]
    accepting: list[bool]
    consts: frozenset[Atom] = field(default_factory=frozenset)

    def __len__(self):
        return len(self.elements)


def behaviour_monoid(a: SUAutomaton, limit: int = 10_000) -> BehaviourMonoid:
    """Saturate the letter behaviours under composition, one element per consts-orbit."""
    consts = a.consts
    ident = behaviour(a, [])
    ident = BehaviourElem(ident.rep, ident.key, (), orbit_key(ident.rep, consts))
    elems = [ident]
    seen = {ident.orbit}
    todo = deque([ident])
    while todo:
        e = todo.popleft()
        for x in enumerate_orbit_reps(a.sigma, consts | word_support(e.word)):
            n = compose_behaviours(behaviour(a, [x]), e)
            k = orbit_key(n.rep, consts)
            if k in seen:
                continue
            seen.add(k)
            n = BehaviourElem(n.rep, n.key, n.word, k)
            elems.append(n)
            todo.append(n)
            if len(elems) > limit:
                raise RuntimeError("behaviour saturation did not converge")
    acc = [accepts_state(a, e(a.q0)) for e in elems]
    return BehaviourMonoid(elems, acc, consts)

"""One-way single-use automata over the atoms.

The running example accepts words where no atom appears twice in a row.
"""

from singleuse import zoo
from singleuse.automata import (behaviour, behaviour_monoid, compose_behaviours, equivalent, find_word, reachable,
                                run)
from singleuse.pofset import AtomV


def word(*xs):
    return [AtomV(x) for x in xs]


# %% Running the automaton
nt = zoo.no_twice()
for w in ([1, 2, 1], [1, 1, 2], [], [7, 3, 7, 3]):
    print(w, "accept" if run(nt, word(*w)) else "reject")

# %% Reachable states, one per orbit
# "start", "I just saw some atom a" and "fail".  The middle state stands for
# infinitely many concrete states, one per atom.
for q in reachable(nt):
    print("reachable:", q)

# %% Emptiness with a witness
sw = zoo.starts_with(5)
print("starts-with-5 witness:", find_word(sw))
print("reject-all witness:", find_word(zoo.reject_all()))

# %% Behaviours compose like the words they come from
bu, bv = behaviour(nt, word(1, 2)), behaviour(nt, word(2, 3))
print("b(uv) == b(v) o b(u):", behaviour(nt, word(1, 2, 2, 3)).key == compose_behaviours(bv, bu).key)

# the behaviour monoid is orbit-finite; list its orbits and which ones accept
bm = behaviour_monoid(nt)
print(len(bm.elements), "orbits of behaviours")
for e, acc in zip(bm.elements, bm.accepting):
    print("  witness word", [a.a for a in e.word], "accepting" if acc else "rejecting")

# %% Equivalence is decided exactly, through a product automaton
print("no-twice == permuted copy:", equivalent(nt, zoo.no_twice_permuted()))
print("no-twice == even length:", equivalent(nt, zoo.even_length()))

"""Orbit-finite semigroups, Green's relations and smooth factorization trees.

The three-class semigroup has pairs of atoms with (a,b)(c,d) = (a,d) when
b != c, a bottom element otherwise, and an adjoined identity.
"""

import random

from singleuse import zoo
from singleuse.semigroup import (full, generate, idempotent_power, is_infix, is_smooth, j_structure, smooth_tree,
                                 validate_fact_tree)

S = zoo.three_class()
P, BOT, ONE = zoo.tc_pair, zoo.TC_BOT, zoo.TC_ONE

# %% Products
print("(1,2)(3,7) =", S.mul(P(1, 2), P(3, 7)))
print("(1,2)(2,5) =", S.mul(P(1, 2), P(2, 5)))
print("idempotent power of (3,3):", idempotent_power(S, P(3, 3)))

# %% Closure of one orbit of generators
G = generate(S, [P(0, 1)])
print("orbits generated by (0,1):", G.reps)

# %% J-classes of the whole semigroup
st = j_structure(full(S))
for cls, h in zip(st.classes, st.heights):
    print("height", h, [st.S.reps[i] for i in cls])
print("(0,1) is an infix of bottom:", is_infix(S, P(0, 1), BOT))
print("bottom is an infix of (0,1):", is_infix(S, BOT, P(0, 1)))

# %% Smooth sequences stay in one J-class
print(is_smooth(S, [P(1, 2), P(3, 7), P(4, 9), P(7, 19)]))
print(is_smooth(S, [P(7, 3), ONE, P(4, 8)]))

# %% Factorization trees whose inner nodes are binary or smooth
rng = random.Random(1)
pool = [ONE, BOT] + [P(a, b) for a in range(4) for b in range(4)]
heights = []
for _ in range(50):
    seq = [rng.choice(pool) for _ in range(rng.randint(1, 40))]
    t = smooth_tree(S, seq)
    assert not validate_fact_tree(S, t, seq, 11)
    heights.append(t.height())
print("tree heights over 50 random sequences:", min(heights), "to", max(heights), "(bound 11)")

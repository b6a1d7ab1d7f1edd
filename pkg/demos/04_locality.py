"""Which semigroup transductions can a single-use Mealy machine compute?

Locality separates them.  Comparing every letter with the first one is not
local; single-use atom propagation is.
"""

from singleuse import zoo
from singleuse.pofset import AtomV
from singleuse.transduce import (is_future_independent, is_local, is_local_rational, mealy_run, mealy_to_transduction,
                                 rational_eval, to_oneway, to_rational, transduction_eval)

# %% Compare with the first letter
f = zoo.f_cmp()
w = [AtomV(a) for a in (1, 2, 1, 5, 6, 1, 1)]
print("f_cmp:", ["=" if y == zoo.YES else "!=" for y in transduction_eval(f, w)])
r = is_local(f)
print("local?", r.local)
print("witness:", {k: r.witness[k] for k in ("x", "x'", "e")})

# the algorithm-text reading of the check misses this counterexample
print("local under the other reading?", is_local(f, variant="algorithm").local)

# %% Atom propagation through a register that is destroyed on use
sp = zoo.su_prop_transduction()
print("su-prop local?", is_local(sp).local)

# %% Every Mealy machine gives a local transduction of its behaviours
for m in (zoo.bit_prop(), zoo.su_prop_mealy(), zoo.atom_copy()):
    t = mealy_to_transduction(m)
    print(m.name, "local?", is_local(t).local)

bits = [zoo.BIT_BLACK, zoo.BIT_EPS, zoo.BIT_WHITE, zoo.BIT_EPS, zoo.BIT_EPS]
bp = zoo.bit_prop()
print("bit propagation agrees:", mealy_run(bp, bits) == transduction_eval(mealy_to_transduction(bp), bits))

# %% Rational transductions see the suffix as well
swap = zoo.swap_first_last()
print("swap-first-last:", [x.a for x in rational_eval(swap, [AtomV(1), AtomV(2), AtomV(3)])])
print("local?", is_local_rational(swap).local, "future independent?", is_future_independent(swap))
back = to_oneway(to_rational(f))
print("round trip through the rational form:", transduction_eval(back, w) == transduction_eval(f, w))

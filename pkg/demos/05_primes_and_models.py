"""Prime functions, pipelines of primes, and four models that compute the same function."""

from itertools import product

from singleuse import listfn, primes, zoo
from singleuse.pofset import AtomV, InL, InR, U
from singleuse.sst import map_dup_sst, sst_run
from singleuse.transduce import mealy_run
from singleuse.twoway import run_transducer


def blocks(text):
    return [InR(U) if c == "#" else InL(AtomV(int(c))) for c in text.split()]


def show(w):
    return " ".join("#" if x == InR(U) else str(x.v.a) for x in w)


# %% Two-way primes on a #-separated word
w = blocks("1 2 3 # 5 7 # 1 2")
print("map-dup:", show(primes.eval_prime(primes.MapDup(), w)))
print("map-rev:", show(primes.eval_prime(primes.MapRev(), w)))

# %% Prefix products in Z3 after bit propagation
z3 = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
pl = primes.Pipeline([primes.BitPropL(), primes.GroupPrefix(z3)])
bits = [zoo.BIT_BLACK, zoo.BIT_EPS, zoo.BIT_WHITE, zoo.BIT_EPS]
print("pipeline:", [str(y) for y in primes.eval_pipeline(pl, bits)])

# length-preserving left-to-right pipelines compile to a single Mealy machine
m = primes.compile_lp_pipeline(pl)
print("compiled machine reads each letter", m.k, "times and agrees:", mealy_run(m, bits) == primes.eval_pipeline(pl, bits))

# %% One function, four models
letters = [InL(AtomV(0)), InL(AtomV(1)), InR(U)]
tw, st, lf = zoo.map_dup_transducer(), map_dup_sst(), listfn.library_program("map_duplicate")
checked = 0
for n in range(6):
    for w in product(letters, repeat=n):
        w = list(w)
        out = primes.eval_prime(primes.MapDup(), w)
        assert run_transducer(tw, w) == sst_run(st, w) == listfn.run_word(lf, w) == out
        checked += 1
print(checked, "words: prime, two-way transducer, streaming string transducer and list function agree")
print("the list function has type", listfn.typecheck(lf))

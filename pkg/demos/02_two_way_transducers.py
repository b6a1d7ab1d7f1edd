"""Two-way transducers: reversing, duplicating blocks, and the shape of a run."""

from singleuse import zoo
from singleuse.pofset import AtomV, InL, InR, U
from singleuse.twoway import behaviour2, framed_accept, run_acceptor, run_shape, run_transducer, step_cap, untangle


def show(w):
    return " ".join("#" if x == InR(U) else str(x.v.a if isinstance(x, InL) else x.a) for x in w)


def blocks(text):
    return [InR(U) if c == "#" else InL(AtomV(int(c))) for c in text.split()]


# %% Reverse: walk right silently, then emit while walking back
rev = zoo.reverse_transducer()
w = [AtomV(a) for a in (1, 2, 3)]
print("reverse", show(w), "->", show(run_transducer(rev, w)))
print("step budget on this word:", step_cap(rev, w))

# %% Duplicate every #-separated block
md = zoo.map_dup_transducer()
w = blocks("1 2 3 # 5 7 # 1 2")
print("map-dup", show(w), "->", show(run_transducer(md, w)))

# %% The shape of a run records every visit to every position
s = run_shape(rev, [AtomV(1), AtomV(2)])
for i, visits in enumerate(s.visits, 1):
    print(f"position {i}:", visits)
# retracing the visits in chronological order recovers the output
print("untangled:", show(untangle(s)))

# %% Acceptors and their behaviour tables
fel = zoo.first_equals_last()
for w in ([4, 2, 4], [4, 2], [9]):
    atoms = [AtomV(a) for a in w]
    print(w, run_acceptor(fel, atoms), "(from tables:", framed_accept(fel, atoms), end=")\n")
table = behaviour2(fel, [AtomV(4), AtomV(2)])
print(len(table.table), "rows in the behaviour table of [4, 2]")

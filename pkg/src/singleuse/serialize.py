"""JSON encoding of descriptors, values, trees and every kind of machine file."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .atoms import FinPermutation
from .automata import SUAutomaton
from .listfn import Compose, ListV, Map, Plus, Prim, Star, Times
from .pofset import ATOMS, UNIT, AtomV, InL, InR, Pair, Prod, SetDesc, Sum, U, UnitV, Value, check, power
from .primes import (BitPropL, BitPropR, EndMarker, GroupPrefix, GroupSuffix, Hom, MapDup, MapRev, ParId, Pipeline,
                     SUPropL, SUPropR)
from .semigroup import FactBinary, FactLeaf, FactSmooth, FactUnary, SemigroupPresentation
from .sst import REG, Lit, RegLeaf, RegTree, RegV, RVar, SSTransducer, _Reg
from .sutree import Const, Leaf, MultiTree, Query, SUTree, TreeError, Var, single_use_violations
from .transduce import MealyMachine, RationalTransduction, SemigroupTransduction
from .twoway import RunShape, TwoWayMachine

VERSION = 1


class SchemaError(ValueError):
    def __init__(self, msg: str, path: str = "$"):
        super().__init__(f"{path}: {msg}")
        self.path = path


def _obj(x, path, *keys):
    if not isinstance(x, dict):
        raise SchemaError("expected an object", path)
    missing = [k for k in keys if k not in x]
    if missing:
        raise SchemaError(f"missing keys {missing}", path)
    return x


def _int(x, path, lo=0):
    if not isinstance(x, int) or isinstance(x, bool) or x < lo:
        raise SchemaError(f"expected an integer >= {lo}", path)
    return x


def _list(x, path):
    if not isinstance(x, list):
        raise SchemaError("expected an array", path)
    return x


def _tag(x, path):
    if isinstance(x, str):
        return x, None
    if isinstance(x, dict) and len(x) == 1:
        return next(iter(x.items()))
    raise SchemaError("expected a single-key object", path)


# -- descriptors and values -------------------------------------------------------------------

def desc_to_json(d: SetDesc):
    if d == UNIT:
        return {"unit": {}}
    if d == ATOMS:
        return {"atoms": {}}
    if isinstance(d, _Reg):
        return {"reg": {}}
    if isinstance(d, Star):
        return {"star": desc_to_json(d.elem)}
    if isinstance(d, Sum):
        return {"sum": [desc_to_json(d.left), desc_to_json(d.right)]}
    if isinstance(d, Prod):
        return {"prod": [desc_to_json(d.left), desc_to_json(d.right)]}
    raise TypeError(f"cannot serialize {d!r}")


def desc_from_json(x, path="$", *, regs=False, stars=False) -> SetDesc:
    tag, body = _tag(x, path)
    if tag == "unit":
        return UNIT
    if tag == "atoms":
        return ATOMS
    if tag == "reg":
        if not regs:
            raise SchemaError("registers are not allowed here", path)
        return REG
    if tag == "star":
        if not stars:
            raise SchemaError("list types are not allowed here", path)
        return Star(desc_from_json(body, path + ".star", regs=regs, stars=stars))
    if tag in ("sum", "prod"):
        parts = _list(body, f"{path}.{tag}")
        if len(parts) != 2:
            raise SchemaError(f"{tag} needs two components", path)
        l, r = (desc_from_json(p, f"{path}.{tag}[{i}]", regs=regs, stars=stars) for i, p in enumerate(parts))
        return Sum(l, r) if tag == "sum" else Prod(l, r)
    raise SchemaError(f"unknown descriptor tag {tag!r}", path)


def value_to_json(v: Value):
    if isinstance(v, UnitV):
        return {"u": 0}
    if isinstance(v, AtomV):
        return {"a": v.a}
    if isinstance(v, InL):
        return {"l": value_to_json(v.v)}
    if isinstance(v, InR):
        return {"r": value_to_json(v.v)}
    if isinstance(v, Pair):
        return {"p": [value_to_json(v.l), value_to_json(v.r)]}
    if isinstance(v, ListV):
        return {"list": [value_to_json(x) for x in v.items]}
    if isinstance(v, RegV):
        return {"reg": [value_to_json(x) for x in v.word]}
    raise TypeError(f"cannot serialize {v!r}")


def value_from_json(x, path="$") -> Value:
    tag, body = _tag(x, path)
    if tag == "u":
        return U
    if tag == "a":
        return AtomV(_int(body, path + ".a"))
    if tag == "l":
        return InL(value_from_json(body, path + ".l"))
    if tag == "r":
        return InR(value_from_json(body, path + ".r"))
    if tag == "p":
        parts = _list(body, path + ".p")
        if len(parts) != 2:
            raise SchemaError("pair needs two components", path)
        return Pair(value_from_json(parts[0], path + ".p[0]"), value_from_json(parts[1], path + ".p[1]"))
    if tag == "list":
        return ListV(tuple(value_from_json(y, f"{path}.list[{i}]") for i, y in enumerate(_list(body, path))))
    if tag == "reg":
        return RegV(tuple(value_from_json(y, f"{path}.reg[{i}]") for i, y in enumerate(_list(body, path))))
    raise SchemaError(f"unknown value tag {tag!r}", path)


def typed_value(d: SetDesc, x, path="$") -> Value:
    v = value_from_json(x, path)
    if not check(d, v):
        raise SchemaError(f"value is not in {d!r}", path)
    return v


def word_from_json(x, sigma: SetDesc | None = None, path="$") -> list[Value]:
    w = [value_from_json(y, f"{path}[{i}]") for i, y in enumerate(_list(x, path))]
    if sigma is not None:
        for i, v in enumerate(w):
            if not check(sigma, v):
                raise SchemaError(f"letter is not in {sigma!r}", f"{path}[{i}]")
    return w


def word_to_json(w) -> list:
    return [value_to_json(v) for v in w]


def perm_to_json(p: FinPermutation) -> list:
    return [[a, b] for a, b in sorted(p.items())]


def perm_from_json(x, path="$") -> FinPermutation:
    pairs = []
    for i, pr in enumerate(_list(x, path)):
        if not isinstance(pr, list) or len(pr) != 2:
            raise SchemaError("expected a [from, to] pair", f"{path}[{i}]")
        pairs.append((_int(pr[0], f"{path}[{i}][0]"), _int(pr[1], f"{path}[{i}][1]")))
    if len({a for a, _ in pairs}) != len(pairs):
        raise SchemaError("an atom is mapped twice", path)
    try:
        return FinPermutation(pairs)
    except ValueError as e:
        raise SchemaError(str(e), path) from None


# -- trees ---------------------------------------------------------------------------------------------

def _op_to_json(o):
    if isinstance(o, Var):
        return {"v": o.i}
    if isinstance(o, Const):
        return {"c": o.a}
    if isinstance(o, RVar):
        return {"reg": o.i}
    raise TypeError(o)


def _op_from_json(x, path):
    tag, body = _tag(x, path)
    if tag == "v":
        return Var(_int(body, path + ".v"))
    if tag == "c":
        return Const(_int(body, path + ".c"))
    if tag == "reg":
        raise SchemaError("queries and atom operands cannot mention registers", path)
    raise SchemaError(f"unknown operand tag {tag!r}", path)


def node_to_json(n):
    if isinstance(n, Query):
        return {"q": {"l": n.lhs, "r": _op_to_json(n.rhs), "y": node_to_json(n.yes), "n": node_to_json(n.no)}}
    if isinstance(n, RegLeaf):
        regs = [[{"reg": p.i} if isinstance(p, RVar) else {"lit": {"b": p.branch, "o": [_op_to_json(o) for o in p.out]}}
                 for p in ps] for ps in n.regs]
        return {"leaf": {"b": n.branch, "o": [_op_to_json(o) for o in n.out], "regs": regs}}
    return {"leaf": {"b": n.branch, "o": [_op_to_json(o) for o in n.out]}}


def node_from_json(x, path="$", *, regs=False):
    tag, body = _tag(x, path)
    if tag == "q":
        b = _obj(body, path + ".q", "l", "r", "y", "n")
        if isinstance(b["l"], dict):
            raise SchemaError("query left-hand side must be an atom variable index", path + ".q.l")
        return Query(_int(b["l"], path + ".q.l"), _op_from_json(b["r"], path + ".q.r"),
                     node_from_json(b["y"], path + ".q.y", regs=regs), node_from_json(b["n"], path + ".q.n", regs=regs))
    if tag == "leaf":
        b = _obj(body, path + ".leaf", "b")
        ops = tuple(_op_from_json(o, f"{path}.leaf.o[{i}]") for i, o in enumerate(_list(b.get("o", []), path)))
        if not regs:
            if "regs" in b:
                raise SchemaError("register constructors are only allowed in register trees", path)
            return Leaf(_int(b["b"], path + ".leaf.b"), ops)
        out = []
        for i, ps in enumerate(_list(b.get("regs", []), path + ".leaf.regs")):
            pieces = []
            for j, pc in enumerate(_list(ps, f"{path}.leaf.regs[{i}]")):
                pp = f"{path}.leaf.regs[{i}][{j}]"
                t, body2 = _tag(pc, pp)
                if t == "reg":
                    pieces.append(RVar(_int(body2, pp)))
                elif t == "lit":
                    lb = _obj(body2, pp, "b")
                    pieces.append(Lit(_int(lb["b"], pp + ".b"),
                                      tuple(_op_from_json(o, pp) for o in _list(lb.get("o", []), pp))))
                else:
                    raise SchemaError(f"unknown register piece {t!r}", pp)
            out.append(tuple(pieces))
        return RegLeaf(_int(b["b"], path + ".leaf.b"), ops, tuple(out))
    raise SchemaError(f"unknown node tag {tag!r}", path)


def _single_use(t, path):
    problems = single_use_violations(t)
    if problems:
        raise SchemaError("; ".join(problems[:3]), path)


def tree_to_json(t: SUTree):
    return {"dom": desc_to_json(t.dom), "cod": desc_to_json(t.cod), "tree": [node_to_json(b) for b in t.branches]}


def tree_from_json(x, path="$") -> SUTree:
    b = _obj(x, path, "dom", "cod", "tree")
    dom, cod = desc_from_json(b["dom"], path + ".dom"), desc_from_json(b["cod"], path + ".cod")
    nodes = tuple(node_from_json(n, f"{path}.tree[{i}]") for i, n in enumerate(_list(b["tree"], path + ".tree")))
    try:
        t = SUTree(dom, cod, nodes)
    except TreeError as e:
        raise SchemaError(str(e), path) from None
    _single_use(t, path)
    return t


def multi_to_json(m: MultiTree):
    return {"k": m.k, "dom": desc_to_json(m.dom0), "cod": desc_to_json(m.cod),
            "tree": [node_to_json(b) for b in m.tree.branches]}


def multi_from_json(x, path="$") -> MultiTree:
    b = _obj(x, path, "k", "dom", "cod", "tree")
    k = _int(b["k"], path + ".k", 1)
    dom0, cod = desc_from_json(b["dom"], path + ".dom"), desc_from_json(b["cod"], path + ".cod")
    nodes = tuple(node_from_json(n, f"{path}.tree[{i}]") for i, n in enumerate(_list(b["tree"], path + ".tree")))
    try:
        m = MultiTree(k, dom0, SUTree(power(dom0, k), cod, nodes))
    except TreeError as e:
        raise SchemaError(str(e), path) from None
    _single_use(m.tree, path)
    return m


def regtree_to_json(t: RegTree):
    return {"dom": desc_to_json(t.dom), "cod": desc_to_json(t.cod), "gamma": desc_to_json(t.gamma),
            "tree": [node_to_json(b) for b in t.branches]}


def regtree_from_json(x, path="$") -> RegTree:
    b = _obj(x, path, "dom", "cod", "gamma", "tree")
    dom = desc_from_json(b["dom"], path + ".dom", regs=True)
    cod = desc_from_json(b["cod"], path + ".cod", regs=True)
    gamma = desc_from_json(b["gamma"], path + ".gamma")
    nodes = tuple(node_from_json(n, f"{path}.tree[{i}]", regs=True) for i, n in enumerate(_list(b["tree"], path)))
    try:
        return RegTree(dom, cod, gamma, nodes)
    except TreeError as e:
        raise SchemaError(str(e), path) from None


# -- list-function ASTs ---------------------------------------------------------------------------------

def expr_to_json(e):
    if isinstance(e, Prim):
        params = []
        for q in e.params:
            params.append(desc_to_json(q) if isinstance(q, SetDesc) else
                          [list(r) for r in q] if isinstance(q, tuple) else q)
        out: dict[str, Any] = {"prim": e.name}
        if params:
            out["params"] = params
        if e.opts:
            out["opts"] = dict(e.opts)
        return out
    for cls, tag in ((Compose, "compose"), (Times, "times"), (Plus, "plus")):
        if isinstance(e, cls):
            return {tag: [expr_to_json(e.f), expr_to_json(e.g)]}
    if isinstance(e, Map):
        return {"map": expr_to_json(e.f)}
    raise TypeError(f"not a list expression: {e!r}")


def expr_from_json(x, path="$"):
    if not isinstance(x, dict):
        raise SchemaError("expected an object", path)
    if "prim" in x:
        name = x["prim"]
        if not isinstance(name, str):
            raise SchemaError("primitive name must be a string", path)
        params = []
        for i, q in enumerate(_list(x.get("params", []), path + ".params")):
            pp = f"{path}.params[{i}]"
            if isinstance(q, int) and not isinstance(q, bool):
                params.append(q)
            elif isinstance(q, list):
                params.append(tuple(tuple(_int(c, pp) for c in _list(r, pp)) for r in q))
            else:
                params.append(desc_from_json(q, pp, stars=True))
        opts = x.get("opts", {})
        if not isinstance(opts, dict):
            raise SchemaError("opts must be an object", path)
        return Prim(name, tuple(params), tuple(sorted(opts.items())))
    tag, body = _tag(x, path)
    if tag in ("compose", "times", "plus"):
        parts = _list(body, f"{path}.{tag}")
        if len(parts) != 2:
            raise SchemaError(f"{tag} needs two parts", path)
        f, g = (expr_from_json(q, f"{path}.{tag}[{i}]") for i, q in enumerate(parts))
        return {"compose": Compose, "times": Times, "plus": Plus}[tag](f, g)
    if tag == "map":
        return Map(expr_from_json(body, path + ".map"))
    raise SchemaError(f"unknown expression tag {tag!r}", path)


# -- primes ---------------------------------------------------------------------------------------------

def prime_to_json(p):
    if isinstance(p, Hom):
        out = {"prime": "hom", "sigma": desc_to_json(p.sigma), "gamma": desc_to_json(p.gamma), "f": multi_to_json(p.f)}
        if p.width is not None:
            out["width"] = p.width
        return out
    if isinstance(p, SUPropL):
        return {"prime": "su-prop-r" if isinstance(p, SUPropR) else "su-prop-l", "x": desc_to_json(p.x)}
    if isinstance(p, BitPropL):
        return {"prime": "bit-prop-r" if isinstance(p, BitPropR) else "bit-prop-l"}
    if isinstance(p, GroupPrefix):
        return {"prime": "group-suffix" if isinstance(p, GroupSuffix) else "group-prefix",
                "table": [list(r) for r in p.table]}
    if isinstance(p, MapDup):
        return {"prime": "map-rev" if isinstance(p, MapRev) else "map-dup", "sigma": desc_to_json(p.base)}
    if isinstance(p, EndMarker):
        return {"prime": "end-marker", "sigma": desc_to_json(p.base)}
    if isinstance(p, ParId):
        return {"prime": "par-id", "p": prime_to_json(p.p), "pad": desc_to_json(p.pad)}
    raise TypeError(f"not a prime: {p!r}")


def prime_from_json(x, path="$"):
    b = _obj(x, path, "prime")
    name = b["prime"]
    try:
        if name == "hom":
            _obj(b, path, "sigma", "gamma", "f")
            return Hom(desc_from_json(b["sigma"], path + ".sigma"), desc_from_json(b["gamma"], path + ".gamma"),
                       multi_from_json(b["f"], path + ".f"), b.get("width"))
        if name in ("su-prop-l", "su-prop-r"):
            xd = desc_from_json(b.get("x", {"atoms": {}}), path + ".x")
            return (SUPropL if name == "su-prop-l" else SUPropR)(xd)
        if name in ("bit-prop-l", "bit-prop-r"):
            return BitPropL() if name == "bit-prop-l" else BitPropR()
        if name in ("group-prefix", "group-suffix"):
            _obj(b, path, "table")
            table = tuple(tuple(_int(c, path + ".table") for c in _list(r, path + ".table"))
                          for r in _list(b["table"], path + ".table"))
            return (GroupPrefix if name == "group-prefix" else GroupSuffix)(table)
        if name in ("map-dup", "map-rev", "end-marker"):
            base = desc_from_json(b.get("sigma", {"atoms": {}}), path + ".sigma")
            return {"map-dup": MapDup, "map-rev": MapRev, "end-marker": EndMarker}[name](base)
        if name == "par-id":
            _obj(b, path, "p", "pad")
            return ParId(prime_from_json(b["p"], path + ".p"), desc_from_json(b["pad"], path + ".pad"))
    except (TypeError, ValueError) as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError(str(e), path) from None
    raise SchemaError(f"unknown prime {name!r}", path)


# -- run shapes and factorization trees -------------------------------------------------------------------

def shape_to_json(s: RunShape):
    return {"type": "shape", "version": VERSION, "bound": s.bound,
            "visits": [[[e, l, None if o is None else value_to_json(o)] for e, l, o in vs] for vs in s.visits]}


def shape_from_json(x, path="$") -> RunShape:
    b = _obj(x, path, "visits")
    visits = []
    for i, vs in enumerate(_list(b["visits"], path + ".visits")):
        row = []
        for j, v in enumerate(_list(vs, f"{path}.visits[{i}]")):
            pp = f"{path}.visits[{i}][{j}]"
            if not isinstance(v, list) or len(v) != 3 or v[0] not in "<>" or v[1] not in "<>" or not v[0] or not v[1]:
                raise SchemaError("a visit is [entered, left, output-or-null] with directions '<' or '>'", pp)
            row.append((v[0], v[1], None if v[2] is None else value_from_json(v[2], pp + "[2]")))
        visits.append(tuple(row))
    return RunShape(tuple(visits), _int(b.get("bound", 0), path + ".bound"))


def fact_to_json(t):
    if isinstance(t, FactLeaf):
        return ["leaf", value_to_json(t.value)]
    if isinstance(t, FactUnary):
        return ["unary", fact_to_json(t.child), value_to_json(t.value)]
    if isinstance(t, FactBinary):
        return ["binary", fact_to_json(t.left), fact_to_json(t.right), value_to_json(t.value)]
    return ["smooth", [fact_to_json(c) for c in t.kids], value_to_json(t.value)]


def fact_from_json(x, path="$"):
    if not isinstance(x, list) or not x:
        raise SchemaError("expected a tagged array", path)
    tag = x[0]
    if tag == "leaf" and len(x) == 2:
        return FactLeaf(value_from_json(x[1], path + "[1]"))
    if tag == "unary" and len(x) == 3:
        return FactUnary(fact_from_json(x[1], path + "[1]"), value_from_json(x[2], path + "[2]"))
    if tag == "binary" and len(x) == 4:
        return FactBinary(fact_from_json(x[1], path + "[1]"), fact_from_json(x[2], path + "[2]"),
                          value_from_json(x[3], path + "[3]"))
    if tag == "smooth" and len(x) == 3:
        kids = tuple(fact_from_json(c, f"{path}[1][{i}]") for i, c in enumerate(_list(x[1], path + "[1]")))
        return FactSmooth(kids, value_from_json(x[2], path + "[2]"))
    raise SchemaError(f"bad factorization node {tag!r}", path)


# -- machine files --------------------------------------------------------------------------------------------

def _semigroup_json(S: SemigroupPresentation):
    return {"carrier": desc_to_json(S.carrier), "product": multi_to_json(S.product),
            "eq": None if S.eq_tree is None else multi_to_json(S.eq_tree), "name": S.name}


def _semigroup_from(b, path):
    _obj(b, path, "carrier", "product")
    eq = b.get("eq")
    try:
        return SemigroupPresentation(desc_from_json(b["carrier"], path + ".carrier"),
                                     multi_from_json(b["product"], path + ".product"),
                                     None if eq is None else multi_from_json(eq, path + ".eq"), name=b.get("name", ""))
    except TreeError as e:
        raise SchemaError(str(e), path) from None


def _fn_json(f, what):
    if isinstance(f, MultiTree):
        return multi_to_json(f)
    raise TypeError(f"{what} must be a tree to be serialized")


def to_json(obj) -> dict:
    """A machine file (with type tag and version) for any supported object."""
    d = desc_to_json
    if isinstance(obj, SUAutomaton):
        out = {"type": "su-automaton", "sigma": d(obj.sigma), "q": d(obj.q), "k": obj.k,
               "q0": value_to_json(obj.q0), "delta": tree_to_json(obj.delta), "accept": tree_to_json(obj.accept)}
    elif isinstance(obj, TwoWayMachine):
        out = {"type": "two-way", "role": obj.role, "sigma": d(obj.sigma), "q": d(obj.q), "k": obj.k,
               "q0": value_to_json(obj.q0), "delta": tree_to_json(obj.delta)}
        if obj.gamma is not None:
            out["gamma"] = d(obj.gamma)
    elif isinstance(obj, SemigroupPresentation):
        out = {"type": "semigroup", **_semigroup_json(obj)}
    elif isinstance(obj, MealyMachine):
        out = {"type": "mealy", "sigma": d(obj.sigma), "gamma": d(obj.gamma), "q": d(obj.q), "k": obj.k,
               "q0": value_to_json(obj.q0), "delta": tree_to_json(obj.delta)}
    elif isinstance(obj, SemigroupTransduction):
        if not isinstance(obj.S, SemigroupPresentation):
            raise TypeError("only presentations can be serialized")
        out = {"type": "sg-transduction", "semigroup": _semigroup_json(obj.S), "sigma": d(obj.sigma),
               "gamma": d(obj.gamma), "h": _fn_json(obj.h, "h"), "lambda": _fn_json(obj.lam, "lambda")}
    elif isinstance(obj, RationalTransduction):
        if not isinstance(obj.S, SemigroupPresentation):
            raise TypeError("only presentations can be serialized")
        out = {"type": "rational", "semigroup": _semigroup_json(obj.S), "sigma": d(obj.sigma),
               "gamma": d(obj.gamma), "h": _fn_json(obj.h, "h"), "lambda3": _fn_json(obj.lam3, "lambda3")}
    elif isinstance(obj, Pipeline):
        out = {"type": "pipeline", "sigma": d(obj.sigma), "stages": [prime_to_json(p) for p in obj.stages]}
    elif isinstance(obj, SSTransducer):
        out = {"type": "sst", "sigma": d(obj.sigma), "gamma": d(obj.gamma), "state": d(obj.state), "k": obj.k,
               "q0": value_to_json(obj.q0), "delta": regtree_to_json(obj.delta), "out": regtree_to_json(obj.out)}
    elif isinstance(obj, RunShape):
        return shape_to_json(obj)
    elif isinstance(obj, (Prim, Compose, Times, Plus, Map)):
        out = {"type": "listfn", "expr": expr_to_json(obj)}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    name = getattr(obj, "name", "")
    if name and "name" not in out:
        out["name"] = name
    out["version"] = VERSION
    return out


def from_json(x) -> Any:
    """Parse a machine file; raises SchemaError (or TreeError for ill-formed trees)."""
    b = _obj(x, "$", "type")
    if b.get("version") != VERSION:
        raise SchemaError(f"unsupported version {b.get('version')!r}; expected {VERSION}", "$.version")
    kind = b["type"]
    name = b.get("name", "")
    try:
        return _parse(kind, b, name)
    except TreeError as e:
        raise SchemaError(str(e)) from None
    except TypeError as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError(str(e)) from None


def _parse(kind, b, name):
    dj = desc_from_json
    if kind == "su-automaton":
        _obj(b, "$", "sigma", "q", "k", "q0", "delta", "accept")
        q = dj(b["q"], "$.q")
        return SUAutomaton(dj(b["sigma"], "$.sigma"), q, typed_value(q, b["q0"], "$.q0"), _int(b["k"], "$.k", 1),
                           tree_from_json(b["delta"], "$.delta"), tree_from_json(b["accept"], "$.accept"), name)
    if kind == "two-way":
        _obj(b, "$", "role", "sigma", "q", "k", "q0", "delta")
        q = dj(b["q"], "$.q")
        gamma = dj(b["gamma"], "$.gamma") if "gamma" in b else None
        try:
            return TwoWayMachine(b["role"], dj(b["sigma"], "$.sigma"), q, typed_value(q, b["q0"], "$.q0"),
                                 _int(b["k"], "$.k", 1), tree_from_json(b["delta"], "$.delta"), gamma, name)
        except ValueError as e:
            if isinstance(e, SchemaError):
                raise
            raise SchemaError(str(e)) from None
    if kind == "semigroup":
        return _semigroup_from(b, "$")
    if kind == "mealy":
        _obj(b, "$", "sigma", "gamma", "q", "k", "q0", "delta")
        q = dj(b["q"], "$.q")
        return MealyMachine(dj(b["sigma"], "$.sigma"), dj(b["gamma"], "$.gamma"), q, typed_value(q, b["q0"], "$.q0"),
                            _int(b["k"], "$.k", 1), tree_from_json(b["delta"], "$.delta"), name)
    if kind in ("sg-transduction", "rational"):
        lam_key = "lambda" if kind == "sg-transduction" else "lambda3"
        _obj(b, "$", "semigroup", "sigma", "gamma", "h", lam_key)
        S = _semigroup_from(b["semigroup"], "$.semigroup")
        sigma, gamma = dj(b["sigma"], "$.sigma"), dj(b["gamma"], "$.gamma")
        h = multi_from_json(b["h"], "$.h")
        lam = multi_from_json(b[lam_key], "$." + lam_key)
        if h.dom0 != sigma or h.cod != S.carrier:
            raise SchemaError("h must have type sigma -o carrier", "$.h")
        if kind == "sg-transduction":
            if lam.dom0 != S.carrier or lam.cod != gamma:
                raise SchemaError("lambda must have type carrier -o gamma", "$.lambda")
            return SemigroupTransduction(S, h, lam, sigma, gamma, name=name)
        s1 = Sum(S.carrier, UNIT)
        if lam.dom0 != Prod(s1, Prod(sigma, s1)) or lam.cod != gamma:
            raise SchemaError("lambda3 must have type (S+1) x (sigma x (S+1)) -o gamma", "$.lambda3")
        return RationalTransduction(S, h, lam, sigma, gamma, name=name)
    if kind == "pipeline":
        _obj(b, "$", "stages")
        stages = [prime_from_json(s, f"$.stages[{i}]") for i, s in enumerate(_list(b["stages"], "$.stages"))]
        sigma = dj(b["sigma"], "$.sigma") if "sigma" in b else None
        return Pipeline(tuple(stages), sigma)
    if kind == "sst":
        _obj(b, "$", "sigma", "gamma", "state", "k", "q0", "delta", "out")
        state = dj(b["state"], "$.state", regs=True)
        return SSTransducer(dj(b["sigma"], "$.sigma"), dj(b["gamma"], "$.gamma"), state,
                            typed_value(state, b["q0"], "$.q0"), _int(b["k"], "$.k", 1),
                            regtree_from_json(b["delta"], "$.delta"), regtree_from_json(b["out"], "$.out"), name)
    if kind == "shape":
        return shape_from_json(b)
    if kind == "listfn":
        _obj(b, "$", "expr")
        return expr_from_json(b["expr"], "$.expr")
    raise SchemaError(f"unknown machine type {kind!r}", "$.type")


def dumps(obj, indent=None) -> str:
    return json.dumps(to_json(obj), indent=indent, sort_keys=True)


def loads(s: str):
    try:
        x = json.loads(s)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from None
    return from_json(x)


def load(path) -> Any:
    return loads(Path(path).read_text())


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj, indent=1) + "\n")

"""Regular list functions with atoms: a typed AST, a type checker and an evaluator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import pofset
from .pofset import (ATOMS, BOOL, UNIT, AtomV, InL, InR, Pair, Prod, SetDesc, Sum, U, UnitV, Value, boolv, check,
                     enum_index, enum_value, finite)


class Star(SetDesc):
    """Finite lists over ``elem``.  Not orbit-finite: it only occurs in list-function types."""

    __slots__ = ("elem",)

    def __init__(self, elem: SetDesc):
        self.elem = elem
        self.arities = (0,)  # placeholder so that Sum/Prod can be built around it
        self._hash = hash(("star", elem))

    def _key(self):
        return (self.elem,)

    def __repr__(self):
        return f"Star({self.elem!r})"


@dataclass(frozen=True, slots=True)
class ListV(Value):
    items: tuple = ()

    def children(self):
        return list(self.items)

    def map_atoms(self, f):
        return ListV(tuple(pofset.rename_atoms(x, f) for x in self.items))

    def __len__(self):
        return len(self.items)

    def __repr__(self):
        return "[" + ", ".join(map(repr, self.items)) + "]"


def lst(*xs) -> ListV:
    return ListV(tuple(xs))


def _check_star(d, v):
    if isinstance(d, Star):
        return isinstance(v, ListV) and all(check(d.elem, x) for x in v.items)
    return None


pofset._EXTRA_CHECKS.append(_check_star)


class ListTypeError(TypeError):
    def __init__(self, msg: str, path: str = ""):
        super().__init__(f"{path or '<root>'}: {msg}")
        self.path = path


# -- the AST -------------------------------------------------------------------------------------

@dataclass(frozen=True)
class Prim:
    name: str
    params: tuple = ()
    opts: tuple = ()  # (key, value) pairs

    def opt(self, key, default=None):
        return dict(self.opts).get(key, default)


@dataclass(frozen=True)
class Compose:
    """``f`` after ``g``."""

    f: object
    g: object


@dataclass(frozen=True)
class Times:
    f: object
    g: object


@dataclass(frozen=True)
class Plus:
    f: object
    g: object


@dataclass(frozen=True)
class Map:
    f: object


ListExpr = Prim | Compose | Times | Plus | Map


def _sum_case(v, l, r):
    return InL(l(v.v)) if isinstance(v, InL) else InR(r(v.v))


def _distr(v):
    return InL(Pair(v.l, v.r.v)) if isinstance(v.r, InL) else InR(Pair(v.l, v.r.v))


def _blocks(v, maximal):
    out, cur = [], []
    for x in v.items:
        if isinstance(x, InR):
            out.append(ListV(tuple(cur)))
            cur = []
        else:
            cur.append(x.v)
    out.append(ListV(tuple(cur)))
    if maximal:
        out = [b for b in out if b.items]
    return ListV(tuple(out))


def _group(table):
    n = len(table)

    def run(v):
        g, out = 0, []
        for x in v.items:
            g = table[g][enum_index(n, x.l)]
            out.append(Pair(enum_value(n, g), x.r))
        return ListV(tuple(out))

    return run


def _destruct(v):
    if not v.items:
        return InR(U)
    return InL(Pair(v.items[0], ListV(v.items[1:])))


def _concat(v):
    return ListV(tuple(x for inner in v.items for x in inner.items))


# name -> (number of type parameters, typing, semantics)
_PRIMS: dict[str, tuple[int, Callable, Callable]] = {
    "id": (1, lambda x: (x, x), lambda: lambda v: v),
    "proj1": (2, lambda x, y: (Prod(x, y), x), lambda: lambda v: v.l),
    "proj2": (2, lambda x, y: (Prod(x, y), y), lambda: lambda v: v.r),
    "sym": (2, lambda x, y: (Prod(x, y), Prod(y, x)), lambda: lambda v: Pair(v.r, v.l)),
    "assoc": (3, lambda x, y, z: (Prod(Prod(x, y), z), Prod(x, Prod(y, z))),
              lambda: lambda v: Pair(v.l.l, Pair(v.l.r, v.r))),
    "assoc_inv": (3, lambda x, y, z: (Prod(x, Prod(y, z)), Prod(Prod(x, y), z)),
                  lambda: lambda v: Pair(Pair(v.l, v.r.l), v.r.r)),
    "leftI": (1, lambda x: (x, Prod(UNIT, x)), lambda: lambda v: Pair(U, v)),
    "leftI_inv": (1, lambda x: (Prod(UNIT, x), x), lambda: lambda v: v.r),
    "rightI": (1, lambda x: (x, Prod(x, UNIT)), lambda: lambda v: Pair(v, U)),
    "rightI_inv": (1, lambda x: (Prod(x, UNIT), x), lambda: lambda v: v.l),
    "constI": (1, lambda x: (x, UNIT), lambda: lambda v: U),
    "coproj1": (2, lambda x, y: (x, Sum(x, y)), lambda: InL),
    "coproj2": (2, lambda x, y: (y, Sum(x, y)), lambda: InR),
    "cosym": (2, lambda x, y: (Sum(x, y), Sum(y, x)),
              lambda: lambda v: InR(v.v) if isinstance(v, InL) else InL(v.v)),
    "coassoc": (3, lambda x, y, z: (Sum(Sum(x, y), z), Sum(x, Sum(y, z))),
                lambda: lambda v: (v.v if isinstance(v.v, InL) else InR(InL(v.v.v))) if isinstance(v, InL)
                else InR(v)),
    "coassoc_inv": (3, lambda x, y, z: (Sum(x, Sum(y, z)), Sum(Sum(x, y), z)),
                    lambda: lambda v: InL(v) if isinstance(v, InL) else (InL(InR(v.v.v)) if isinstance(v.v, InL) else v.v)),
    "merge": (1, lambda x: (Sum(x, x), x), lambda: lambda v: v.v),
    "distr": (3, lambda x, y, z: (Prod(x, Sum(y, z)), Sum(Prod(x, y), Prod(x, z))), lambda: _distr),
    "distr_inv": (3, lambda x, y, z: (Sum(Prod(x, y), Prod(x, z)), Prod(x, Sum(y, z))),
                  lambda: lambda v: Pair(v.v.l, InL(v.v.r) if isinstance(v, InL) else InR(v.v.r))),
    "eq": (0, lambda: (Prod(ATOMS, ATOMS), BOOL), lambda: lambda v: boolv(v.l == v.r)),
    "copy_atoms": (0, lambda: (ATOMS, Prod(ATOMS, ATOMS)), lambda: lambda v: Pair(v, v)),
    "copy_star": (1, lambda x: (Star(x), Prod(Star(x), Star(x))), lambda: lambda v: Pair(v, v)),
    "const_eps": (1, lambda x: (UNIT, Star(x)), lambda: lambda v: ListV()),
    "cons": (1, lambda x: (Prod(x, Star(x)), Star(x)), lambda: lambda v: ListV((v.l,) + v.r.items)),
    "destruct": (1, lambda x: (Star(x), Sum(Prod(x, Star(x)), UNIT)), lambda: _destruct),
    "concat": (1, lambda x: (Star(Star(x)), Star(x)), lambda: _concat),
    "reverse": (1, lambda x: (Star(x), Star(x)), lambda: lambda v: ListV(v.items[::-1])),
}

# primitives whose leading parameter is not a type
_SPECIAL = ("const", "blocks", "group")

PRIM_NAMES = tuple(_PRIMS) + _SPECIAL


def _params(p: Prim, n: int, path: str) -> tuple:
    ps = tuple(p.params)
    if not ps:
        ps = (ATOMS,) * n
    if len(ps) != n:
        raise ListTypeError(f"{p.name} takes {n} type parameters, got {len(ps)}", path)
    for x in ps:
        if not isinstance(x, SetDesc):
            raise ListTypeError(f"{p.name}: {x!r} is not a type", path)
    return ps


def _validate_group(table, path):
    from .primes import validate_group
    problems = validate_group(table)
    if problems:
        raise ListTypeError(f"group table: {problems[0]}", path)


def _prim_type(p: Prim, path: str):
    if p.name == "const":
        if len(p.params) != 1 or not isinstance(p.params[0], int) or p.params[0] < 0:
            raise ListTypeError("const needs one atom parameter", path)
        return UNIT, ATOMS
    if p.name == "blocks":
        (x,) = _params(p, 1, path)
        return Star(Sum(x, UNIT)), Star(Star(x))
    if p.name == "group":
        if not p.params:
            raise ListTypeError("group needs a Cayley table", path)
        table, *rest = p.params
        _validate_group(table, path)
        (x,) = _params(Prim("group", tuple(rest)), 1, path)
        el = Prod(finite(len(table)), x)
        return Star(el), Star(el)
    try:
        n, typing, _ = _PRIMS[p.name]
    except KeyError:
        raise ListTypeError(f"unknown primitive {p.name!r}", path) from None
    return typing(*_params(p, n, path))


def typecheck(e: ListExpr, path: str = "") -> tuple[SetDesc, SetDesc]:
    """Input and output type of ``e``."""
    if isinstance(e, Prim):
        return _prim_type(e, path or e.name)
    if isinstance(e, Compose):
        gi, go = typecheck(e.g, path + "/compose.g")
        fi, fo = typecheck(e.f, path + "/compose.f")
        if go != fi:
            raise ListTypeError(f"cannot compose: {go!r} does not match {fi!r}", path + "/compose")
        return gi, fo
    if isinstance(e, (Times, Plus)):
        tag = "times" if isinstance(e, Times) else "plus"
        fi, fo = typecheck(e.f, f"{path}/{tag}.f")
        gi, go = typecheck(e.g, f"{path}/{tag}.g")
        c = Prod if isinstance(e, Times) else Sum
        return c(fi, gi), c(fo, go)
    if isinstance(e, Map):
        fi, fo = typecheck(e.f, path + "/map")
        return Star(fi), Star(fo)
    raise ListTypeError(f"not a list expression: {e!r}", path)


def _compile(e: ListExpr) -> Callable[[Value], Value]:
    if isinstance(e, Prim):
        if e.name == "const":
            a = AtomV(e.params[0])
            return lambda v: a
        if e.name == "blocks":
            maximal = bool(e.opt("maximal", False))
            return lambda v: _blocks(v, maximal)
        if e.name == "group":
            return _group(e.params[0])
        return _PRIMS[e.name][2]()
    if isinstance(e, Compose):
        f, g = _compile(e.f), _compile(e.g)
        return lambda v: f(g(v))
    if isinstance(e, Times):
        f, g = _compile(e.f), _compile(e.g)
        return lambda v: Pair(f(v.l), g(v.r))
    if isinstance(e, Plus):
        f, g = _compile(e.f), _compile(e.g)
        return lambda v: _sum_case(v, f, g)
    if isinstance(e, Map):
        f = _compile(e.f)
        return lambda v: ListV(tuple(f(x) for x in v.items))
    raise ListTypeError(f"not a list expression: {e!r}")


def list_eval(e: ListExpr, v: Value) -> Value:
    ti, _ = typecheck(e)
    if not check(ti, v):
        raise TypeError(f"input {v!r} is not in {ti!r}")
    return _compile(e)(v)


# -- building programs -------------------------------------------------------------------------------

def p(name, *params, **opts) -> Prim:
    return Prim(name, tuple(params), tuple(sorted(opts.items())))


def seq(*fs) -> ListExpr:
    """Run ``fs`` left to right."""
    out = fs[0]
    for f in fs[1:]:
        out = Compose(f, out)
    return out


def case(f, g, cod) -> ListExpr:
    """Cases on a sum, both sides landing in ``cod``."""
    return seq(Plus(f, g), p("merge", cod))


def const_val(cod: SetDesc, v: Value) -> ListExpr:
    """1 -> cod, constantly v (v built from units, atoms, pairs and injections)."""
    if isinstance(v, UnitV):
        return p("id", UNIT)
    if isinstance(v, AtomV):
        return p("const", v.a)
    if isinstance(v, InL):
        return seq(const_val(cod.left, v.v), p("coproj1", cod.left, cod.right))
    if isinstance(v, InR):
        return seq(const_val(cod.right, v.v), p("coproj2", cod.left, cod.right))
    if isinstance(v, Pair):
        return seq(p("leftI", UNIT), Times(const_val(cod.left, v.l), const_val(cod.right, v.r)))
    if isinstance(v, ListV):
        out = p("const_eps", cod.elem)
        for x in reversed(v.items):
            out = seq(p("leftI", UNIT), Times(const_val(cod.elem, x), out), p("cons", cod.elem))
        return out
    raise TypeError(f"no constant for {v!r}")


def const_on(dom: SetDesc, cod: SetDesc, v: Value) -> ListExpr:
    return seq(p("constI", dom), const_val(cod, v))


def singleton(x: SetDesc) -> ListExpr:
    return seq(p("rightI", x), Times(p("id", x), p("const_eps", x)), p("cons", x))


def append2(x: SetDesc) -> ListExpr:
    """X* x X* -> X*."""
    s = Star(x)
    return seq(Times(p("id", s), singleton(s)), p("cons", s), p("concat", x))


def drop_last(x: SetDesc) -> ListExpr:
    s = Star(x)
    return seq(p("reverse", x), p("destruct", x), case(p("proj2", x, s), p("const_eps", x), s), p("reverse", x))


def snoc_sep(x: SetDesc) -> ListExpr:
    """X* -> (X+1)*, appending a separator."""
    xs = Sum(x, UNIT)
    return seq(Map(p("coproj1", x, UNIT)), p("reverse", xs), p("leftI", Star(xs)),
               Times(const_val(xs, InR(U)), p("id", Star(xs))), p("cons", xs), p("reverse", xs))


def join(x: SetDesc) -> ListExpr:
    """(X*)* -> (X+1)*, separator-joined: the inverse of ``blocks``."""
    xs = Sum(x, UNIT)
    return seq(Map(snoc_sep(x)), p("concat", xs), drop_last(xs))


def map_reverse(x: SetDesc = ATOMS) -> ListExpr:
    return seq(p("blocks", x), Map(p("reverse", x)), join(x))


def map_duplicate(x: SetDesc = ATOMS) -> ListExpr:
    return seq(p("blocks", x), Map(seq(p("copy_star", x), append2(x))), join(x))


def su_propagation(x: SetDesc = ATOMS) -> ListExpr:
    """Inputs x + (down + eps), outputs x + eps."""
    out = Sum(x, UNIT)  # a store, or eps; also the output alphabet
    prep_to = Sum(out, UNIT)  # (store + eps) + separator at down
    prep = case(seq(p("coproj1", x, UNIT), p("coproj1", out, UNIT)),
                case(const_on(UNIT, prep_to, InR(U)), const_on(UNIT, prep_to, InL(InR(U))), prep_to), prep_to)
    stores = case(singleton(x), p("const_eps", x), Star(x))
    last_store = seq(Map(stores), p("concat", x), p("reverse", x), p("destruct", x),
                     Plus(p("proj1", x, Star(x)), p("id", UNIT)))
    seg = seq(p("copy_star", out), Times(Map(const_on(out, out, InR(U))), seq(last_store, singleton(out))),
              append2(out))
    return seq(Map(prep), p("blocks", out), Map(seg), p("concat", out), drop_last(out))


BITS = finite(3)  # eps, black, white


def bit_propagation() -> ListExpr:
    """Each output is the last non-eps letter strictly before it (eps when there is none)."""
    eps, black, white = (enum_value(3, i) for i in range(3))
    two = Sum(UNIT, UNIT)  # eps or white, with white the separator of the inner split

    def piece(b, first):
        # a run of eps letters, then the output of the white letter (or end) closing it
        return seq(p("copy_star", UNIT), Times(Map(const_on(UNIT, BITS, b)), const_on(Star(UNIT), Star(BITS),
                                                                                     ListV((b if first else white,)))),
                   append2(BITS))

    def seg(b):
        # a black-free segment that starts in state b; output plus its final state
        nonempty = seq(Times(piece(b, True), seq(Map(piece(white, False)), p("concat", BITS))), append2(BITS))
        return seq(p("blocks", UNIT), p("destruct", Star(UNIT)),
                   case(nonempty, p("const_eps", BITS), Star(BITS)))

    prep_to = Sum(two, UNIT)
    prep = case(const_on(UNIT, prep_to, InL(InL(U))),
                case(const_on(UNIT, prep_to, InR(U)), const_on(UNIT, prep_to, InL(InR(U))), prep_to), prep_to)
    body = seq(Times(seg(eps), seq(Map(seg(black)), p("concat", BITS))), append2(BITS))
    return seq(Map(prep), p("blocks", two), p("destruct", Star(two)),
               case(body, p("const_eps", BITS), Star(BITS)), drop_last(BITS))


LIBRARY = {
    "map_reverse": map_reverse,
    "map_duplicate": map_duplicate,
    "su_propagation": su_propagation,
    "bit_propagation": bit_propagation,
}


def library_program(name: str) -> ListExpr:
    try:
        return LIBRARY[name]()
    except KeyError:
        raise KeyError(f"unknown library program {name!r}; have {sorted(LIBRARY)}") from None


def word_to_list(w) -> ListV:
    return ListV(tuple(w))


def run_word(e: ListExpr, w) -> list[Value]:
    return list(list_eval(e, word_to_list(w)).items)

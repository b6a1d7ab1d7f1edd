"""Command-line front end over the JSON machine files.

Exit codes: 0 success or a positive verdict, 1 a negative verdict, 2 usage,
3 schema or type error, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product

from . import automata, listfn, primes, semigroup, serialize, sst, transduce, twoway
from .automata import SUAutomaton
from .pofset import Value, check, enumerate_values
from .semigroup import ONE, SemigroupPresentation
from .serialize import SchemaError, value_to_json, word_to_json
from .sutree import MultiTree, SUTree, TreeError

OK, NEGATIVE, USAGE, SCHEMA, INTERNAL = 0, 1, 2, 3, 4

_USER_ERRORS = (SchemaError, TreeError, listfn.ListTypeError, primes.PipelineError, twoway.NotNormalized,
                twoway.MalformedShape)


class UserError(Exception):
    pass


class UsageError(UserError):
    pass


class Report:
    """Collects a verdict line, optional details, and the exit code."""

    def __init__(self, fmt: str):
        self.fmt = fmt

    def emit(self, headline: str, code: int = OK, **data) -> int:
        if self.fmt == "json":
            print(json.dumps({"result": headline, **data}, sort_keys=True))
        else:
            print(headline)
            for k, v in data.items():
                print(f"{k}: {v if isinstance(v, str) else json.dumps(v)}")
        return code


def _jsonable(x):
    if x is ONE:
        return "1"
    if isinstance(x, Value):
        return value_to_json(x)
    if isinstance(x, (list, tuple)) and all(isinstance(y, Value) for y in x):
        return word_to_json(x)
    if isinstance(x, MultiTree):
        return serialize.multi_to_json(x)
    if isinstance(x, SUTree):
        return serialize.tree_to_json(x)
    rep = getattr(x, "rep", None)
    if isinstance(rep, MultiTree):
        return serialize.multi_to_json(rep)
    return repr(x)


def _read_json_arg(text: str | None, input_path: str | None, what: str):
    if input_path is not None:
        text = sys.stdin.read() if input_path == "-" else open(input_path).read()
    if text is None:
        raise UsageError(f"missing {what}; give it inline or with --input")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{what} is not valid JSON: {e}") from None


def _word(args, sigma=None):
    return serialize.word_from_json(_read_json_arg(args.word, args.input, "word"), sigma, "word")


def _load(path):
    try:
        return serialize.load(path)
    except OSError as e:
        raise UserError(f"cannot read {path}: {e.strerror}") from None


# -- subcommands -------------------------------------------------------------------------------------

def cmd_run(args, out: Report) -> int:
    m = _load(args.file)
    if isinstance(m, SUAutomaton):
        ok = automata.run(m, _word(args, m.sigma))
        return out.emit("accept" if ok else "reject", OK if ok else NEGATIVE)
    if isinstance(m, twoway.TwoWayMachine):
        w = _word(args, m.sigma)
        if m.role == "acceptor":
            ok = twoway.run_acceptor(m, w)
            return out.emit("accept" if ok else "reject", OK if ok else NEGATIVE)
        res = twoway.run_transducer(m, w)
        if res is twoway.LOOP:
            return out.emit("undefined", NEGATIVE, reason="the run does not terminate")
        return out.emit("output", output=word_to_json(res))
    if isinstance(m, (listfn.Prim, listfn.Compose, listfn.Times, listfn.Plus, listfn.Map)):
        return _listfn_eval(m, args, out)
    runners = {
        transduce.MealyMachine: transduce.mealy_run,
        transduce.SemigroupTransduction: transduce.transduction_eval,
        transduce.RationalTransduction: transduce.rational_eval,
        primes.Pipeline: primes.eval_pipeline,
        sst.SSTransducer: sst.sst_run,
    }
    for cls, fn in runners.items():
        if isinstance(m, cls):
            return out.emit("output", output=word_to_json(fn(m, _word(args, m.sigma))))
    raise UserError(f"cannot run a {type(m).__name__}")


def _automaton(path) -> SUAutomaton:
    m = _load(path)
    if not isinstance(m, SUAutomaton):
        raise UserError(f"{path}: expected an su-automaton")
    return m


def cmd_empty(args, out: Report) -> int:
    a = _automaton(args.file)
    w = automata.find_word(a)
    if w is None:
        return out.emit("empty")
    return out.emit("nonempty", NEGATIVE, witness=word_to_json(w))


def _bounded_difference(run1, run2, sigma, consts, max_len):
    atoms = sorted(set(range(3)) | set(consts))
    letters = list(enumerate_values(sigma, atoms))
    for n in range(max_len + 1):
        for w in product(letters, repeat=n):
            w = list(w)
            if run1(w) != run2(w):
                return w
    return None


def cmd_equiv(args, out: Report) -> int:
    a, b = _load(args.f1), _load(args.f2)
    if isinstance(a, SUAutomaton) and isinstance(b, SUAutomaton):
        if a.sigma != b.sigma:
            raise UserError("the automata read different alphabets")
        w = automata.find_word(automata.xor_product(a, b))
        if w is None:
            return out.emit("equivalent")
        return out.emit("not equivalent", NEGATIVE, witness=word_to_json(w))
    runs = {SUAutomaton: automata.run, transduce.MealyMachine: transduce.mealy_run, sst.SSTransducer: sst.sst_run,
            primes.Pipeline: primes.eval_pipeline, transduce.SemigroupTransduction: transduce.transduction_eval,
            transduce.RationalTransduction: transduce.rational_eval}

    def runner(m):
        if isinstance(m, twoway.TwoWayMachine):
            return lambda w: (twoway.run_acceptor(m, w) if m.role == "acceptor" else twoway.run_transducer(m, w))
        for cls, fn in runs.items():
            if isinstance(m, cls):
                return lambda w: fn(m, w)
        raise UserError(f"cannot compare a {type(m).__name__}")

    ra, rb = runner(a), runner(b)
    if a.sigma != b.sigma:
        raise UserError("the machines read different alphabets")
    consts = getattr(a, "consts", frozenset()) | getattr(b, "consts", frozenset())
    w = _bounded_difference(ra, rb, a.sigma, consts, args.max_len)
    if w is not None:
        return out.emit("not equivalent", NEGATIVE, witness=word_to_json(w))
    return out.emit("equivalent", bounded=f"all words of length <= {args.max_len} over atoms "
                                          f"{sorted(set(range(3)) | set(consts))}")


def cmd_monoid(args, out: Report) -> int:
    m = _load(args.file)
    if isinstance(m, SUAutomaton):
        bm = automata.behaviour_monoid(m, limit=args.limit)
        return out.emit("behaviour monoid", orbits=len(bm), accepting=sum(bm.accepting))
    if isinstance(m, SemigroupPresentation):
        G = semigroup.full(m)
        st = semigroup.j_structure(G)
        return out.emit("semigroup", orbits=len(G.reps), j_classes=len(st.classes), height=st.height,
                        classes=[[_jsonable(G.reps[i]) for i in c] for c in st.classes])
    raise UserError("monoid needs an su-automaton or a semigroup")


def cmd_behaviour(args, out: Report) -> int:
    m = _load(args.file)
    if isinstance(m, SUAutomaton):
        t = automata.behaviour_tree(m, _word(args, m.sigma))
        return out.emit("behaviour", tree=serialize.tree_to_json(t))
    if isinstance(m, twoway.TwoWayMachine) and m.role == "acceptor":
        bt = twoway.behaviour2(m, _word(args, m.sigma))
        rows = []
        for (side, q), res in bt.table:
            r = res if isinstance(res, bool) else {"exit": res[0], "state": value_to_json(res[1])}
            rows.append({"enter": side, "state": value_to_json(q), "result": r})
        return out.emit("behaviour", table=rows)
    raise UserError("behaviour needs an su-automaton or a two-way acceptor")


def cmd_locality(args, out: Report) -> int:
    m = _load(args.file)
    if isinstance(m, transduce.MealyMachine):
        m = transduce.mealy_to_transduction(m)
    if isinstance(m, transduce.SemigroupTransduction):
        res = transduce.is_local(m, variant=args.variant, fuzz=args.fuzz, seed=args.seed)
    elif isinstance(m, transduce.RationalTransduction):
        res = transduce.is_local_rational(m)
    else:
        raise UserError("locality needs a mealy, sg-transduction or rational file")
    if res.local:
        return out.emit("local", checked=res.checked)
    return out.emit("not local", NEGATIVE, witness={k: _jsonable(v) for k, v in res.witness.items()})


def cmd_factorize(args, out: Report) -> int:
    S = _load(args.file)
    if not isinstance(S, SemigroupPresentation):
        raise UserError("factorize needs a semigroup file")
    seq = _word(args, S.carrier)
    if not seq:
        raise UserError("cannot factorize the empty sequence")
    tree = semigroup.smooth_tree(S, seq)
    problems = semigroup.validate_fact_tree(S, tree, seq)
    if problems:
        raise AssertionError("; ".join(problems))
    return out.emit("factorization", height=tree.height(), tree=serialize.fact_to_json(tree))


def cmd_pipeline(args, out: Report) -> int:
    pl = _load(args.file)
    if not isinstance(pl, primes.Pipeline):
        raise UserError("expected a pipeline file")
    if args.action == "run":
        return out.emit("output", output=word_to_json(primes.eval_pipeline(pl, _word(args, pl.sigma))))
    m = primes.compile_lp_pipeline(pl)
    return out.emit("mealy", states=serialize.desc_to_json(m.q), k=m.k, machine=serialize.to_json(m))


def cmd_shape(args, out: Report) -> int:
    m = _load(args.file)
    if not isinstance(m, twoway.TwoWayMachine) or m.role != "transducer":
        raise UserError("shape needs a two-way transducer")
    s = twoway.run_shape(m, _word(args, m.sigma))
    return out.emit("shape", shape=serialize.shape_to_json(s))


def cmd_untangle(args, out: Report) -> int:
    s = _load(args.file)
    if not isinstance(s, twoway.RunShape):
        raise UserError("untangle needs a shape file")
    return out.emit("output", output=word_to_json(twoway.untangle(s)))


def _listfn_eval(e, args, out: Report) -> int:
    dom, _ = listfn.typecheck(e)
    x = _read_json_arg(args.word, args.input, "value")
    if isinstance(x, list):  # a plain word is read as a list
        v = listfn.ListV(tuple(serialize.word_from_json(x, None, "value")))
    else:
        v = serialize.value_from_json(x, "value")
    if not check(dom, v):
        raise SchemaError(f"value is not in {dom!r}", "value")
    return out.emit("output", output=value_to_json(listfn.list_eval(e, v)))


def cmd_listfn(args, out: Report) -> int:
    e = _load(args.file)
    if not isinstance(e, (listfn.Prim, listfn.Compose, listfn.Times, listfn.Plus, listfn.Map)):
        raise UserError("expected a listfn file")
    if args.action == "typecheck":
        dom, cod = listfn.typecheck(e)
        return out.emit(f"{dom!r} -> {cod!r}", input=serialize.desc_to_json(dom), output=serialize.desc_to_json(cod))
    return _listfn_eval(e, args, out)


def cmd_validate(args, out: Report) -> int:
    m = _load(args.file)
    problems: list[str] = []
    if isinstance(m, SemigroupPresentation):
        problems = semigroup.validate_presentation(m)
    elif isinstance(m, sst.SSTransducer):
        problems = sst.validate_sst(m)
    elif isinstance(m, (listfn.Prim, listfn.Compose, listfn.Times, listfn.Plus, listfn.Map)):
        listfn.typecheck(m)
    elif isinstance(m, (transduce.SemigroupTransduction, transduce.RationalTransduction)):
        problems = semigroup.validate_presentation(m.S)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return out.emit("invalid", SCHEMA, problems=problems)
    kind = serialize.to_json(m)["type"] if not isinstance(m, twoway.RunShape) else "shape"
    return out.emit("valid", type=kind)


# -- argument parsing --------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="singleuse", description="single-use automata and transducers")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("pretty", "json"), default="pretty")
    common.add_argument("--input", help="read the word or value from this file ('-' for stdin)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, *positional, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        for arg in positional:
            if isinstance(arg, tuple):
                p.add_argument(arg[0], choices=arg[1])
            elif arg.endswith("?"):
                p.add_argument(arg[:-1], nargs="?")
            else:
                p.add_argument(arg)
        p.set_defaults(fn=fn)
        return p

    add("run", cmd_run, "file", "word?", help="run a machine on a word")
    add("empty", cmd_empty, "file", help="emptiness of an su-automaton")
    add("equiv", cmd_equiv, "f1", "f2", help="equivalence of two machines").add_argument(
        "--max-len", type=int, default=4, help="word length bound for machines without an exact procedure")
    add("monoid", cmd_monoid, "file", help="behaviour monoid or J-structure").add_argument(
        "--limit", type=int, default=10_000)
    add("behaviour", cmd_behaviour, "file", "word?", help="behaviour of a word")
    loc = add("locality", cmd_locality, "file", help="decide locality of a transduction")
    loc.add_argument("--variant", choices=("definition", "algorithm"), default="definition")
    loc.add_argument("--fuzz", type=int, default=0, help="extra random instances to test")
    add("factorize", cmd_factorize, "file", "word?", help="smooth factorization tree of a sequence")
    add("pipeline", cmd_pipeline, ("action", ("run", "compile")), "file", "word?",
        help="run or compile a pipeline of primes")
    add("shape", cmd_shape, "file", "word?", help="run shape of a two-way transducer")
    add("untangle", cmd_untangle, "file", help="output word of a run shape")
    add("listfn", cmd_listfn, ("action", ("typecheck", "eval")), "file", "word?",
        help="typecheck or evaluate a list function")
    add("validate", cmd_validate, "file", help="check a machine file")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    out = Report(args.format)
    try:
        return args.fn(args, out)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except (UserError, *_USER_ERRORS) as e:
        print(f"error: {e}", file=sys.stderr)
        return SCHEMA
    except Exception as e:  # anything else means a broken invariant
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())

"""The bundled example machines, shipped as JSON files in ``corpus/``."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from . import listfn, primes, sst, zoo
from .pofset import ATOMS, BOOL, NO, YES, AtomV, InL, finite
from .serialize import load, save
from .sutree import compile_multi
from .twoway import run_shape

Z3_TABLE = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def _is_atom_hom():
    f = compile_multi(zoo.SUP_GAMMA, BOOL, 1, lambda cs, t: YES if isinstance(cs[0], InL) else NO)
    return primes.Hom(zoo.SUP_GAMMA, BOOL, f)


BUILDERS = {
    # one-way automata
    "no_twice": zoo.no_twice,
    "no_twice_permuted": zoo.no_twice_permuted,
    "starts_with_5": zoo.starts_with,
    "reject_all": zoo.reject_all,
    "even_length": zoo.even_length,
    # two-way machines
    "reverse": zoo.reverse_transducer,
    "map_dup_two_way": zoo.map_dup_transducer,
    "silent": zoo.silent_transducer,
    "no_twice_two_way": zoo.no_twice_two_way,
    "first_equals_last": zoo.first_equals_last,
    "reject_all_two_way": zoo.reject_all_two_way,
    # semigroups
    "three_class": zoo.three_class,
    "f_cmp_semigroup": zoo.f_cmp_semigroup,
    "su_prop_semigroup": zoo.su_prop_semigroup,
    "t2_min": zoo.t2_min,
    # Mealy machines
    "bit_prop": zoo.bit_prop,
    "su_prop_mealy": zoo.su_prop_mealy,
    "p_prefix": zoo.p_prefix,
    "z2_prefix": zoo.z2_prefix,
    "relabel_bits": zoo.relabel_bits,
    "atom_copy": zoo.atom_copy,
    # semigroup and rational transductions
    "f_cmp": zoo.f_cmp,
    "su_prop": zoo.su_prop_transduction,
    "swap_first_last": zoo.swap_first_last,
    # pipelines of primes
    "map_dup_pipeline": lambda: primes.Pipeline([primes.MapDup(ATOMS)]),
    "map_rev_pipeline": lambda: primes.Pipeline([primes.MapRev(ATOMS)]),
    "su_prop_then_reverse": lambda: primes.Pipeline([primes.SUPropR(), primes.MapRev(ATOMS)]),
    "bits_then_z3": lambda: primes.Pipeline([primes.BitPropL(), primes.GroupPrefix(Z3_TABLE)]),
    "su_prop_is_atom": lambda: primes.Pipeline([primes.SUPropL(), _is_atom_hom()]),
    "bits_then_z3_with_pad": lambda: primes.Pipeline(
        [primes.ParId(primes.BitPropL(), finite(2)), primes.ParId(primes.GroupPrefix(Z3_TABLE), finite(2))]),
    # streaming string transducer
    "map_dup_sst": sst.map_dup_sst,
    # list functions
    **{name: (lambda n=name: listfn.library_program(n)) for name in listfn.LIBRARY},
    # a run shape
    "reverse_shape": lambda: run_shape(zoo.reverse_transducer(), [AtomV(a) for a in (1, 2, 3)]),
}


def corpus_dir() -> Path:
    return Path(str(resources.files("singleuse") / "corpus"))


def path(name: str) -> Path:
    return corpus_dir() / f"{name}.json"


def names() -> list[str]:
    return sorted(p.stem for p in corpus_dir().glob("*.json"))


def bundled(name: str):
    return load(path(name))


def write_corpus(directory: Path | None = None) -> list[Path]:
    """Regenerate the JSON files from the builders."""
    directory = Path(directory) if directory else corpus_dir()
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, build in BUILDERS.items():
        p = directory / f"{name}.json"
        save(build(), p)
        out.append(p)
    return out


if __name__ == "__main__":
    for p in write_corpus():
        print(p)

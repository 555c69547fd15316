"""Command line interface: ``invlat <command> ...``.

Exit codes: 0 success, 1 invalid input, 2 usage error, 3 theorem violated.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import census as census_mod
from .congruence import (BZ_KIND, I_KIND, LATTICE, CharacterizationMismatch, atoms, con0, con01,
                         congruences, is_subdirectly_irreducible, quotient)
from .constructions import (PARAMETRIC, build, catalog, direct_product,
                            horizontal_sum, i_ordinal_triple, ordinal_sum, example_counts)
from .involution import (BZLattice, InvolutionLattice, StructureError, classify, trivial_brouwer)
from .io import emit, emit_dot, format_partition, parse
from .lattice import FiniteLattice, LatticeError, narrows

KINDS = {"lattice": LATTICE, "i": I_KIND, "bz": BZ_KIND, "con0": "con0", "con01": "con01"}
FLAG_ORDER = ["i-lattice", "bounded-i", "pseudo-Kleene", "De Morgan", "Kleene",
              "paraorthomodular", "BZ", "antiortholattice", "orthomodular"]
COMBINATORS = ("osum", "hsum", "product", "triple")


class UsageError(Exception):
    pass


def _read(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse(text)


def _write(text: str, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _lattice(S) -> FiniteLattice:
    return S if isinstance(S, FiniteLattice) else S.lattice


def _as_kind(S, kind: str):
    """Coerce the parsed structure to what the congruence kind needs."""
    if kind in (I_KIND,) and isinstance(S, FiniteLattice):
        raise UsageError("this kind needs an involution in the document")
    if kind == BZ_KIND:
        if isinstance(S, FiniteLattice):
            raise UsageError("bz congruences need an involution in the document")
        if isinstance(S, InvolutionLattice):
            S = trivial_brouwer(S)
    return S


def _family(S, kind: str, base: str):
    if kind in ("con0", "con01"):
        b = KINDS[base]
        T = _as_kind(S, b)
        return (con0 if kind == "con0" else con01)(T, b)
    T = _as_kind(S, kind)
    return congruences(T, kind)


def _structure_for(S, kind, base):
    k = KINDS[base] if kind in ("con0", "con01") else kind
    return _as_kind(S, k)


# -- commands ------------------------------------------------------------------------

def cmd_validate(args):
    S = _read(args.file)
    kind = "BZ-lattice" if isinstance(S, BZLattice) else \
        "i-lattice" if isinstance(S, InvolutionLattice) else "lattice"
    print(f"OK: {kind} with {_lattice(S).n} elements")


def cmd_con(args):
    S = _read(args.file)
    kind = KINDS[args.kind]
    fam = _family(S, kind, args.base)
    if args.count_only:
        print(len(fam))
        return
    L = _lattice(S)
    print(len(fam))
    for i, th in enumerate(fam):
        print(f"{i}: {format_partition(L, th)}")


def cmd_atoms(args):
    S = _read(args.file)
    fam = _family(S, KINDS[args.kind], args.base)
    L = _lattice(S)
    at = atoms(fam)
    print(len(at))
    for th in at:
        print(format_partition(L, th))


def cmd_narrows(args):
    L = _lattice(_read(args.file))
    for a, b in narrows(L):
        print(f"{L.labels[a]} {L.labels[b]}")


def cmd_classify(args):
    S = _read(args.file)
    if isinstance(S, FiniteLattice):
        raise UsageError("classify needs an involution in the document")
    flags = classify(S)
    print(", ".join(f for f in FLAG_ORDER if f in flags))


def cmd_si(args):
    S = _read(args.file)
    fam = _family(S, KINDS[args.kind], args.base)
    print("yes" if is_subdirectly_irreducible(fam) else "no")


def cmd_quotient(args):
    S = _read(args.file)
    kind = KINDS[args.kind]
    fam = _family(S, kind, args.base)
    if not 0 <= args.by < len(fam):
        raise UsageError(f"congruence index must be in 0..{len(fam) - 1}")
    T = _structure_for(S, kind, args.base)
    _write(emit(quotient(T, fam.members[args.by])), args.output)


def _operand(text: str):
    """``name`` or ``name:p1,p2`` from the catalog, or a document path."""
    if os.path.exists(text):
        return _read(text)
    name, _, params = text.partition(":")
    ps = [int(p) for p in params.split(",")] if params else []
    return build(name, ps)


def cmd_construct(args):
    name, params = args.name, args.params
    try:
        if name in COMBINATORS:
            parts = [_operand(p) for p in params]
            if name == "triple":
                if len(parts) != 2:
                    raise UsageError("triple takes two structures: M and K")
                S = i_ordinal_triple(parts[0], parts[1])
            elif not parts:
                raise UsageError(f"{name} needs at least one structure")
            elif name == "osum":
                S = ordinal_sum(*parts)
            elif name == "hsum":
                S = horizontal_sum(*parts)
            else:
                S = parts[0]
                for P in parts[1:]:
                    S = direct_product(S, P)
        else:
            S = build(name, [int(p) for p in params])
    except ValueError as e:
        if isinstance(e, LatticeError):
            raise
        raise UsageError(str(e)) from None
    _write(emit(S), args.output)


def cmd_census(args):
    cap = args.max
    if args.n > cap:
        raise UsageError(f"n={args.n} exceeds --max {cap}")
    if cap > census_mod.HARD_CAP:
        raise UsageError(f"--max is at most {census_mod.HARD_CAP}")
    if args.verify:
        record = census_mod.VERIFIERS[args.verify](args.n, cap)
    else:
        record = census_mod.census(args.n, cap)
    text = record.to_json()
    if args.report:
        _write(text, args.report)
        print(f"n={record.n} lattices={record.lattice_class_count} "
              f"i-lattices={record.i_lattice_class_count} max={record.max_i_congruences}")
    else:
        sys.stdout.write(text)
    if args.csv:
        _write(record.histogram_csv(), args.csv)
    if args.verify:
        print(f"{args.verify}: verified at n={args.n}", file=sys.stderr)


def cmd_examples_table(args):
    rows = example_counts(tuple(args.sizes))
    print(f"{'name':<10} {'size':>4} {'|Con|':>6} {'expected':>8} {'|Con_I|':>7} {'expected':>8}  ok")
    bad = 0
    for r in rows:
        exp_c = "-" if r["expected_con"] is None else str(r["expected_con"])
        ok = r["con_i"] == r["expected_con_i"] and (r["expected_con"] in (None, r["con"]))
        bad += not ok
        print(f"{r['name']:<10} {r['size']:>4} {r['con']:>6} {exp_c:>8} {r['con_i']:>7} "
              f"{r['expected_con_i']:>8}  {'yes' if ok else 'NO'}")
    if bad:
        raise census_mod.TheoremViolated(f"{bad} example row(s) differ from the expected counts")


def cmd_dot(args):
    S = _read(args.file)
    _write(emit_dot(S, show_involution=args.show_involution), args.output)


def cmd_list(args):
    for name in sorted(catalog()):
        print(name)
    for name, (_, k) in sorted(PARAMETRIC.items()):
        print(f"{name} ({k} integer parameter{'s' if k > 1 else ''})")
    for name in COMBINATORS:
        print(f"{name} (structures: catalog names like chain:3, or document paths)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="invlat", description="Congruences of finite lattices with involution.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(sp):
        sp.add_argument("file", nargs="?", default="-", help="lattice document (default: stdin)")

    def with_kind(sp, default="lattice"):
        sp.add_argument("--kind", choices=sorted(KINDS), default=default)
        sp.add_argument("--base", choices=["lattice", "i", "bz"], default="lattice",
                        help="family filtered by con0/con01")

    sp = sub.add_parser("validate", help="check a document")
    with_file(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("con", help="list congruences")
    with_file(sp)
    with_kind(sp)
    sp.add_argument("--count-only", action="store_true")
    sp.set_defaults(func=cmd_con)

    sp = sub.add_parser("atoms", help="atoms of a congruence lattice")
    with_file(sp)
    with_kind(sp)
    sp.set_defaults(func=cmd_atoms)

    sp = sub.add_parser("narrows", help="prime intervals with meet-irreducible bottom and join-irreducible top")
    with_file(sp)
    sp.set_defaults(func=cmd_narrows)

    sp = sub.add_parser("classify", help="class membership flags")
    with_file(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("si", help="subdirect irreducibility")
    with_file(sp)
    with_kind(sp)
    sp.set_defaults(func=cmd_si)

    sp = sub.add_parser("quotient", help="quotient by a listed congruence")
    with_file(sp)
    with_kind(sp)
    sp.add_argument("--by", type=int, required=True, help="index in the `con` listing")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_quotient)

    sp = sub.add_parser("construct", help="build a named structure or combine structures")
    sp.add_argument("name")
    sp.add_argument("params", nargs="*")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("list", help="names accepted by construct")
    sp.set_defaults(func=cmd_list)

    sp = sub.add_parser("census", help="enumerate n-element lattices and i-lattices")
    sp.add_argument("n", type=int)
    sp.add_argument("--max", type=int, default=census_mod.DEFAULT_CAP)
    sp.add_argument("--report", help="write the JSON record here")
    sp.add_argument("--csv", help="write the congruence-count histogram here")
    sp.add_argument("--verify", choices=sorted(census_mod.VERIFIERS))
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("examples-table", help="example counts, computed against expected")
    sp.add_argument("--sizes", type=int, nargs="*", default=[8, 10, 12])
    sp.set_defaults(func=cmd_examples_table)

    sp = sub.add_parser("dot", help="Graphviz Hasse diagram")
    with_file(sp)
    sp.add_argument("-o", "--output")
    sp.add_argument("--show-involution", action="store_true")
    sp.set_defaults(func=cmd_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except census_mod.TheoremViolated as e:
        print(f"theorem violated: {e}", file=sys.stderr)
        return 3
    except (LatticeError, StructureError, CharacterizationMismatch, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

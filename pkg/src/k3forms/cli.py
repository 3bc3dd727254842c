"""Command-line front end: ``k3forms <verb> ...``.

Exit codes: 0 success, 1 verification or domain failure, 2 usage or I/O error.
All JSON output carries ``"schema": 1`` and writes rationals as strings.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from fractions import Fraction

from . import ellfib, graded, k3cat, suite
from .exactmath import rational_to_str
from .isometry import NotIsometric, find_isometry, DEFAULT_BUDGET
from .lattice import (
    Lattice,
    LatticeError,
    disc_group,
    elementary_divisors,
    gram_of_span,
    is_even,
    orth_complement,
    signature,
)

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return rational_to_str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(payload: dict, path: str | None = None):
    doc = {"schema": SCHEMA, **_jsonable(payload)}
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    if path:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc}") from exc
    else:
        print(text)


def _read_json(text_or_path: str):
    if os.path.exists(text_or_path):
        try:
            with open(text_or_path, encoding="utf-8") as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {text_or_path}: {exc}") from exc
    try:
        return json.loads(text_or_path)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not valid JSON or an existing file: {text_or_path!r}") from exc


_TWISTED = re.compile(r"^(.+?)\((-?\d+)\)$")


def load_lattice(source: str) -> Lattice:
    """A catalog name (optionally twisted, e.g. ``A1(2)``), a JSON file, or inline JSON."""
    source = source.strip()
    if source.startswith(("[", "{")) or os.path.exists(source):
        doc = _read_json(source)
        if isinstance(doc, dict):
            if "gram" not in doc:
                raise UsageError("lattice JSON needs a 'gram' field")
            return Lattice(doc["gram"], doc.get("label"))
        return Lattice(doc)
    m = _TWISTED.match(source)
    try:
        if m:
            return k3cat.catalog(m.group(1)).twist(int(m.group(2)))
        return k3cat.catalog(source)
    except LatticeError as exc:
        raise UsageError(str(exc)) from exc


def parse_params(text: str) -> ellfib.FamilyParams:
    text = text.strip()
    try:
        if text.startswith(("[", "{")) or os.path.exists(text):
            doc = _read_json(text)
            values = doc["a"] if isinstance(doc, dict) else doc
        else:
            values = [v for v in re.split(r"[,\s]+", text) if v]
        return ellfib.FamilyParams.of([str(v) for v in values])
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        raise UsageError(f"bad parameters {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# verbs


def cmd_verify(args) -> int:
    only = None
    if args.only:
        only = [x for part in args.only for x in part.split(",") if x]
    tamper = None
    if args.tamper:
        try:
            name, i, j, delta = args.tamper.split(":")
            base = k3cat.catalog(name)
            G = base.matrix()
            i, j, delta = int(i), int(j), int(delta)
            G[i][j] += delta
            if i != j:
                G[j][i] += delta
            tamper = (name, Lattice(G, base.label))
        except (ValueError, IndexError, LatticeError) as exc:
            raise UsageError(f"bad --tamper value {args.tamper!r}: {exc}") from exc
    try:
        if tamper:
            with k3cat.override_catalog(*tamper):
                results = suite.run_checks(args.seed, only)
        else:
            results = suite.run_checks(args.seed, only)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    summary = suite.summarize(results)
    for r in results:
        print(f"[{r['status'].upper():4}] {r['id']:<26} {r['elapsed_ms']:>7} ms  {r['detail']}", file=sys.stderr)
    print(f"{summary['pass']} passed, {summary['fail']} failed", file=sys.stderr)
    report = {"seed": args.seed, "checks": results, "summary": summary}
    if args.json:
        _emit(report, args.json)
    return EXIT_OK if summary["fail"] == 0 else EXIT_FAIL


def lattice_info(L: Lattice) -> dict:
    sig = signature(L)
    info = {"label": L.label, "rank": L.rank, "signature": list(sig), "det": L.det, "even": is_even(L)}
    if L.det != 0:
        dg = disc_group(L)
        info["disc"] = elementary_divisors(L)
        info["invariant_factors"] = list(dg.invariant_factors)
        info["qvalues"] = list(dg.qvalues)
    return info


def cmd_lattice(args) -> int:
    if args.subverb == "info":
        L = load_lattice(args.gram or args.name or args.file or _missing("--name, --gram or --file"))
        _emit(lattice_info(L), args.out)
    elif args.subverb == "dump":
        L = load_lattice(args.name)
        _emit({"label": L.label or args.name, "gram": L.matrix()}, args.out)
    elif args.subverb == "complement":
        basis = k3cat.default_basis()
        if args.vectors:
            vecs = _read_json(args.vectors)
            span = basis.span(vecs)
        else:
            span = k3cat.embed_M0(basis)
        comp = orth_complement(span)
        _emit({"basis": [list(v) for v in comp.basis], "gram": gram_of_span(comp)}, args.out)
    elif args.subverb == "isometry":
        left, right = load_lattice(args.left), load_lattice(args.right)
        try:
            P = find_isometry(left.matrix(), right.matrix(), args.budget)
        except NotIsometric as exc:
            _emit({"result": "not isometric", "reason": str(exc)}, args.out)
            return EXIT_FAIL
        if P is None:
            _emit({"result": "unknown", "reason": "search budget exhausted"}, args.out)
            return EXIT_FAIL
        _emit({"result": "isometric", "P": P}, args.out)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.subverb == "list":
        _emit({"names": list(k3cat.CATALOG_NAMES)}, args.out)
        return EXIT_OK
    L = load_lattice(args.name)
    _emit({"label": L.label or args.name, "gram": L.matrix()}, args.out)
    return EXIT_OK


def _fiber_payload(a) -> dict:
    config = ellfib.classify_all(a)
    payload = {"a": a.to_strings(), **config.to_json()}
    try:
        r = ellfib.degeneration_resultant(a)
    except ValueError:
        r = None
    payload["r"] = r
    payload["d84"] = ellfib.weight84_discriminant(a) if r else None
    return payload


def cmd_fibers(args) -> int:
    if args.subverb == "sample":
        a = ellfib.degenerate_sample(args.kind, args.seed)
    else:
        a = parse_params(args.params or _missing("--params"))
    try:
        payload = _fiber_payload(a)
    except ellfib.NotK3Error as exc:
        _emit({"a": a.to_strings(), "error": "not a K3 surface", "reason": str(exc)}, args.out)
        return EXIT_FAIL
    if args.subverb == "sample":
        payload["kind"] = args.kind
    _emit(payload, args.out)
    return EXIT_OK


def cmd_graded(args) -> int:
    if args.subverb == "hilbert":
        systems = {"a": None, "u": graded.U_SYSTEM, "t": graded.T_SYSTEM}
        ws = systems.get(args.system)
        if ws is None:
            raise UsageError("hilbert counts are available for the u and t systems")
        _emit({"system": args.system, "k": args.k, "count": graded.hilbert_count(ws, args.k)}, args.out)
        return EXIT_OK
    a = parse_params(args.params or _missing("--params"))
    if args.subverb == "humbert":
        _emit({"a": a.to_strings(), "humbert": graded.humbert_M(a), "weight": 24}, args.out)
        return EXIT_OK
    try:
        if a.a0 != 0:
            payload = {"chart": "u", "names": list(graded.U_SYSTEM.names), "values": list(graded.canonical_u(a))}
        else:
            payload = {"chart": "t", "names": list(graded.T_SYSTEM.names), "values": list(graded.canonical_t(a))}
    except ValueError as exc:
        _emit({"a": a.to_strings(), "error": str(exc)}, args.out)
        return EXIT_FAIL
    _emit({"a": a.to_strings(), **payload}, args.out)
    return EXIT_OK


def _missing(what):
    raise UsageError(f"missing {what}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3forms", description="Exact lattice, fibration and weight computations for the K3 family.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    verbs = p.add_subparsers(dest="verb", required=True)

    v = verbs.add_parser("verify", help="run the verification suite")
    v.add_argument("target", choices=["all"])
    v.add_argument("--only", action="append", help=f"check id(s) to run; one of {', '.join(suite.CHECK_IDS)}")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", help="write the report to this path")
    v.add_argument("--tamper", help="negative control: NAME:i:j:delta perturbs one catalog Gram entry")
    v.set_defaults(func=cmd_verify)

    lat = verbs.add_parser("lattice", help="lattice operations")
    lat.add_argument("subverb", choices=["info", "complement", "isometry", "dump"])
    lat.add_argument("--name")
    lat.add_argument("--gram", help="inline JSON Gram matrix")
    lat.add_argument("--file", help="lattice JSON file")
    lat.add_argument("--vectors", help="JSON list of K3 coordinate vectors (complement)")
    lat.add_argument("--left")
    lat.add_argument("--right")
    lat.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    lat.add_argument("--out")
    lat.set_defaults(func=cmd_lattice)

    cat = verbs.add_parser("catalog", help="catalog lattices")
    cat.add_argument("subverb", choices=["dump", "list"])
    cat.add_argument("--name", default="A0")
    cat.add_argument("--out")
    cat.set_defaults(func=cmd_catalog)

    fib = verbs.add_parser("fibers", help="singular fibers of the Weierstrass family")
    fib.add_argument("subverb", choices=["classify", "sample"])
    fib.add_argument("--params", help="a0,a2,a4,a6,a8,a10,a14 or JSON {\"a\": [...]}")
    fib.add_argument("--kind", choices=ellfib.SAMPLE_KINDS, default="type-I2")
    fib.add_argument("--seed", type=int, default=0)
    fib.add_argument("--out")
    fib.set_defaults(func=cmd_fibers)

    gr = verbs.add_parser("graded", help="weighted normal forms and counts")
    gr.add_argument("subverb", choices=["canonical", "humbert", "hilbert"])
    gr.add_argument("--params")
    gr.add_argument("--system", choices=["a", "u", "t"], default="u")
    gr.add_argument("--k", type=int, default=0)
    gr.add_argument("--out")
    gr.set_defaults(func=cmd_graded)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

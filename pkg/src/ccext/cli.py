"""Command-line front end: ``ccext <command> ...``.

Exit status is 0 on success, 1 when a validation or invariant check fails,
2 for usage and parse errors (including ambiguous selectors) and 3 when a
size cap or search budget is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import config
from .catalog import Catalog, CatalogRecord, digest
from .cyclic_auto import (
    AutoTriple,
    classify,
    compare_reference_table,
    epf_from_triple,
    multiplicative_order,
    presentation,
    table_relations,
)
from .epf import enumerate_epfs, epf_from_json, epf_to_json, validate_epf
from .errors import (
    AmbiguousSelector,
    BudgetExceeded,
    CapExceeded,
    CcextError,
    InvalidTable,
    NotCoprime,
    NotMultiple,
)
from .extension import build_extension, extension_to_json, extract_pair, to_cayley, verify_structure
from .groups import FiniteGroup, cyclic_group, dihedral_group, generating_set, group_from_json, group_to_json
from .skewmorph import SkewMorphism, enumerate_skew, skew_to_json
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument helpers

def parse_group(spec: str) -> FiniteGroup:
    """``cyclic:<k>``, ``dihedral:<k>`` or ``file:<path>`` (a Cayley-table JSON file)."""
    kind, sep, arg = spec.partition(":")
    if not sep or not arg:
        raise UsageError(f"bad group spec {spec!r}; expected cyclic:<k>, dihedral:<k> or file:<path>")
    if kind in ("cyclic", "dihedral"):
        try:
            k = int(arg)
        except ValueError:
            raise UsageError(f"bad group order in {spec!r}") from None
        if k < 1:
            raise UsageError(f"group order must be positive in {spec!r}")
        if k * (2 if kind == "dihedral" else 1) > config.order_cap():
            raise CapExceeded("group order", k, config.order_cap())
        return cyclic_group(k) if kind == "cyclic" else dihedral_group(k)
    if kind == "file":
        try:
            G = group_from_json(Path(arg).read_text(encoding="utf-8"))
        except (OSError, ValueError, KeyError, InvalidTable) as exc:
            raise UsageError(f"cannot load group from {arg}: {exc}") from None
        # keep the label usable for rebuilding the group from catalog records
        return FiniteGroup(G.mul, G.inv, spec, G.sampled)
    raise UsageError(f"unknown group kind {kind!r}")


def int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def select_skew(skews: Sequence[SkewMorphism], selector: str) -> SkewMorphism:
    """By enumeration index, by ``perm:i,j,...`` or by a digest prefix."""
    if selector.startswith("perm:"):
        perm = tuple(int_list(selector[5:]))
        hits = [s for s in skews if s.perm == perm]
    elif selector.isdigit():
        i = int(selector)
        if i >= len(skews):
            raise UsageError(f"skew index {i} out of range (0..{len(skews) - 1})")
        return skews[i]
    else:
        hits = [s for s in skews if digest(skew_to_json(s)).startswith(selector.lower())]
    if not hits:
        raise UsageError(f"no skew-morphism matches {selector!r}")
    if len(hits) > 1:
        raise AmbiguousSelector(f"{selector!r} matches {len(hits)} skew-morphisms")
    return hits[0]


def emit(lines: Sequence[str], out: Optional[str]) -> None:
    text = "\n".join(lines) + ("\n" if lines else "")
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _append(path: Optional[str], records: Sequence[CatalogRecord]) -> None:
    if path:
        written = Catalog(path).append(records)
        print(f"catalog: {written} new of {len(records)} records", file=sys.stderr)


# --------------------------------------------------------------------------
# commands

def cmd_skew_enumerate(args) -> int:
    G = parse_group(args.group)
    skews = enumerate_skew(G)
    records = [CatalogRecord.make("skew", skew_to_json(s)) for s in skews]
    if args.count:
        emit([str(len(skews))], None)
    else:
        emit([r.to_line() for r in records], None)
    _append(args.catalog, records)
    return EXIT_OK


def cmd_epf_enumerate(args) -> int:
    G = parse_group(args.group)
    sm = select_skew(enumerate_skew(G), args.skew)
    if args.n % sm.m:
        raise UsageError(f"n = {args.n} is not a multiple of |phi| = {sm.m}")
    epfs = enumerate_epfs(sm, args.n, budget=args.budget)
    records = [CatalogRecord.make("epf", epf_to_json(e)) for e in epfs]
    if args.count:
        emit([str(len(epfs))], None)
    else:
        emit([r.to_line() for r in records], None)
    _append(args.catalog, records)
    return EXIT_OK


def _parse_triple(text: str) -> AutoTriple:
    vals = int_list(text)
    if len(vals) != 5:
        raise UsageError("--triple expects k,n,r,s,t")
    k, n, r, s, t = vals
    if k < 1 or n < 1:
        raise UsageError("k and n must be positive")
    m = multiplicative_order(r, k)
    if n % m:
        raise UsageError(f"ord(r) = {m} does not divide n = {n}")
    q = n // m
    return AutoTriple(k, n, (r - 1) % k + 1, m, s % q, t % q)


def _generic_relations(epf) -> list[str]:
    # c x = phi(x) c^Pi(x) on a generating set, elements named by index
    A, sm = epf.group, epf.skew
    rels = [f"|A|={A.order}", f"c^{epf.n}=1"]
    for g in generating_set(A):
        rels.append(f"c·x{g}=x{sm.perm[g]}·c^{epf.values[g]}")
    return rels


def cmd_build(args) -> int:
    triple = None
    if args.triple:
        triple = _parse_triple(args.triple)
        if not triple.is_valid():
            print(f"triple {triple} violates conditions {triple.conditions()}", file=sys.stderr)
            return EXIT_FAIL
        epf = epf_from_triple(triple)
    elif args.epf:
        try:
            raw = json.loads(Path(args.epf).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {args.epf}: {exc}") from None
        if "kind" in raw:
            raw = raw["payload"]
        G = parse_group(args.group) if args.group else parse_group(raw["skew"]["group"])
        epf = epf_from_json(raw, G)
    else:
        if not (args.group and args.skew and args.n and args.pi):
            raise UsageError("build needs --triple, --epf, or all of --group/--skew/--n/--pi")
        G = parse_group(args.group)
        sm = select_skew(enumerate_skew(G), args.skew)
        epf = validate_epf(sm, args.n, int_list(args.pi))
    ext = build_extension(epf)
    if args.emit == "cayley":
        G = to_cayley(ext)
        emit([json.dumps(group_to_json(G), separators=(",", ":"))], args.out)
        return EXIT_OK
    if args.emit == "presentation":
        if triple is not None:
            lines = [presentation(triple).relations,
                     "⟨a,c | " + ", ".join(table_relations(triple, epf)) + "⟩"]
        else:
            lines = ["⟨x,c | " + ", ".join(_generic_relations(epf)) + "⟩"]
        emit(lines, args.out)
        return EXIT_OK
    report = verify_structure(ext)
    payload = {"extension": extension_to_json(ext), "checks": report}
    emit([json.dumps(payload, ensure_ascii=False, indent=2, default=str)], args.out)
    return EXIT_OK if all(c["pass"] for c in report.values()) else EXIT_FAIL


def render_table(records) -> list[str]:
    rows = [("(r,s,t)", "Π(x) (mod n)", "φ", "relations")]
    for rec in records:
        tr = rec.triple
        rows.append((f"({tr.r},{tr.s},{tr.t})", rec.to_json()["Pi_formula"],
                     f"x↦{tr.r}x", ", ".join(rec.table_relations)))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    out = []
    for i, row in enumerate(rows):
        cells = [row[j].ljust(widths[j]) for j in range(3)] + [row[3]]
        out.append("  ".join(cells).rstrip())
        if i == 0:
            out.append("  ".join("-" * w for w in widths) + "  " + "-" * len(row[3]))
    return out


def _reference_table_notes() -> list[str]:
    notes = []
    for row in compare_reference_table():
        for mm in row["mismatches"]:
            r, s, t = row["rst"]
            notes.append(f"note: published row ({r},{s},{t}) prints {mm['printed']} "
                         f"(holds: {str(mm['printed_holds']).lower()}); computed {mm['computed']} "
                         f"(holds: {str(mm['computed_holds']).lower()})")
    return notes


def cmd_classify(args) -> int:
    if args.k < 1 or args.n < 1:
        raise UsageError("k and n must be positive")
    if args.r is not None and args.k > 1:
        m = multiplicative_order(args.r, args.k)
        if args.n % m:
            raise UsageError(f"ord({args.r}) = {m} does not divide n = {args.n}")
    r = None if args.all_r else args.r
    want_classes = args.classes or args.k * args.n <= config.order_cap()
    records = classify(args.k, args.n, r=r, dedupe=args.dedupe, classes=want_classes)
    if args.table:
        lines = render_table(records)
        if (args.k, args.n) == (8, 8) and any(rec.triple.r == 3 for rec in records):
            lines += _reference_table_notes()
    elif args.classes:
        groups: dict[int, list] = {}
        for rec in records:
            groups.setdefault(rec.class_id, []).append([rec.triple.r, rec.triple.s, rec.triple.t])
        lines = [json.dumps({"class_id": cid, "members": mem}, separators=(",", ":"))
                 for cid, mem in sorted(groups.items())]
    else:
        lines = [json.dumps(rec.to_json(), ensure_ascii=False, separators=(",", ":")) for rec in records]
    emit(lines, None)
    if args.catalog:
        cat: list[CatalogRecord] = []
        by_class: dict[int, list[str]] = {}
        for rec in records:
            payload = rec.to_json()
            payload.pop("class_id")
            cr = CatalogRecord.make("triple", payload)
            cat.append(cr)
            by_class.setdefault(rec.class_id, []).append(cr.digest)
        if want_classes:
            for members in by_class.values():
                cat.append(CatalogRecord.make("class", {"k": args.k, "n": args.n,
                                                        "representative": members[0],
                                                        "members": sorted(members)}))
        _append(args.catalog, cat)
    return EXIT_OK


def cmd_extract(args) -> int:
    G = parse_group(args.group)
    members = int_list(args.subgroup)
    if any(not 0 <= x < G.order for x in members) or not 0 <= args.c < G.order:
        raise UsageError("element index out of range")
    res = extract_pair(G, members, args.c)
    payload = {"subgroup": list(res.subgroup), "core_index": res.core_index, "epf": epf_to_json(res.epf)}
    emit([json.dumps(payload, separators=(",", ":"))], None)
    return EXIT_OK


def _suite_lines(name: str, probes: int, seed: int) -> tuple[bool, list[str]]:
    rep = run_suite(name, probes=probes, seed=seed)
    return rep.passed, rep.lines()


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_suite_lines, names, [args.budget] * len(names), [args.seed] * len(names)))
    else:
        results = [_suite_lines(n, args.budget, args.seed) for n in names]
    ok = True
    for passed, lines in results:
        ok &= passed
        emit(lines, None)
    print("all invariants hold" if ok else "invariant failures found")
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ccext", description="Cyclic complementary extensions of finite groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    skew = sub.add_parser("skew", help="skew-morphism commands")
    skew_sub = skew.add_subparsers(dest="action", required=True, parser_class=_Parser)
    se = skew_sub.add_parser("enumerate", help="list every skew-morphism of a group")
    se.add_argument("--group", required=True)
    se.add_argument("--count", action="store_true")
    se.add_argument("--catalog")
    se.set_defaults(func=cmd_skew_enumerate)

    epf = sub.add_parser("epf", help="extended power function commands")
    epf_sub = epf.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ee = epf_sub.add_parser("enumerate", help="list extended power functions of one skew-morphism")
    ee.add_argument("--group", required=True)
    ee.add_argument("--skew", required=True, help="index, digest prefix or perm:i,j,...")
    ee.add_argument("--n", type=int, required=True)
    ee.add_argument("--count", action="store_true")
    ee.add_argument("--budget", type=int, default=config.EPF_BUDGET)
    ee.add_argument("--catalog")
    ee.set_defaults(func=cmd_epf_enumerate)

    b = sub.add_parser("build", help="construct an extension")
    b.add_argument("--triple", help="k,n,r,s,t")
    b.add_argument("--epf", help="JSON file holding an epf record")
    b.add_argument("--group")
    b.add_argument("--skew")
    b.add_argument("--n", type=int)
    b.add_argument("--pi", help="comma-separated Pi values in element order")
    b.add_argument("--emit", choices=("cayley", "presentation", "report"), default="report")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("classify", help="classify extensions of Z_k by Z_n for automorphisms x -> rx")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    rg = c.add_mutually_exclusive_group()
    rg.add_argument("--r", type=int)
    rg.add_argument("--all-r", action="store_true")
    c.add_argument("--dedupe", action=argparse.BooleanOptionalAction, default=True)
    c.add_argument("--classes", action="store_true")
    c.add_argument("--table", action="store_true")
    c.add_argument("--catalog")
    c.set_defaults(func=cmd_classify)

    x = sub.add_parser("extract", help="read (phi, Pi) off an exact product G = A<c>")
    x.add_argument("--group", required=True)
    x.add_argument("--subgroup", required=True, help="comma-separated element indices of A")
    x.add_argument("--c", type=int, required=True)
    x.set_defaults(func=cmd_extract)

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("--suite", choices=("all",) + SUITES, default="all")
    v.add_argument("--budget", type=int, default=10**4, help="randomized probes per suite")
    v.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, AmbiguousSelector, NotCoprime, NotMultiple) as exc:
        print(f"ccext: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, BudgetExceeded) as exc:
        print(f"ccext: limit: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CcextError as exc:
        print(f"ccext: failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

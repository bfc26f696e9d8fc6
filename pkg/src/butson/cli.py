"""Command-line interface: ``butson search|invariants|equiv|family|catalog``.

Exit status: 0 success, 1 inconsistency detected, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .algebra import is_hadamard
from .equivalence import act_class, act_identity, are_equivalent, canonical_form, flags_string, form_digest
from .families import (
    FamilyError,
    bundled_family_names,
    load_bundled,
    members,
    parametrize_blocks,
    parametrize_spl1,
    read_family,
    verify_family,
    write_family,
)
from .io import ParseError, read_matrix, write_matrix

EXIT_OK, EXIT_INCONSISTENT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _sizes(text: str | None):
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad --minors value {text!r}") from None


def _load_family(spec: str):
    path = Path(spec)
    if path.exists():
        return read_family(path)
    try:
        return load_bundled(spec)
    except KeyError:
        raise UsageError(f"{spec}: neither a family file nor a bundled family ({', '.join(bundled_family_names())})") from None


# --------------------------------------------------------------------------

def cmd_search(args) -> int:
    from .search import classify, double_count_check

    out = Path(args.out or f"bh{args.q}_{args.n}")
    out.mkdir(parents=True, exist_ok=True)
    journal = Path(args.resume) if args.resume else out / "journal.jsonl"
    if not args.resume and journal.exists():
        journal.unlink()
    t0 = time.time()
    reports = classify(
        args.q, args.n, jobs=args.jobs, frontier=args.frontier, level_limit=args.level_limit, journal=journal,
        keep_reps="final",
    )
    ok, problems = double_count_check(reports)
    final = reports[-1]
    complete = final.m == args.n
    files = []
    for old in out.glob("*.bh"):
        old.unlink()
    for node in final.classReps:
        name = form_digest(node.canonical) + ".bh"
        write_matrix(out / name, node.matrix, comment=f"canonical {form_digest(node.canonical)}\nautOrder {node.autOrder}")
        files.append(name)
    report = {
        "q": args.q,
        "n": args.n,
        "levelLimit": final.m,
        "complete": complete,
        "classes": len(final.classReps),
        "files": files,
        "levels": [r.to_dict() for r in reports],
        "doubleCount": {"consistent": ok, "problems": problems},
        "seconds": round(time.time() - t0, 3),
    }
    if complete and args.q and final.classReps:
        report["actClasses"] = len({act_identity(x.matrix) for x in final.classReps})
    (out / "report.json").write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    summary = f"BH({args.q},{args.n}) level {final.m}: {len(final.classReps)} classes"
    if "actClasses" in report:
        summary += f", {report['actClasses']} ACT classes"
    print(summary)
    print("double count: " + ("consistent" if ok else "INCONSISTENT"))
    for p in problems:
        print("  " + p, file=sys.stderr)
    return EXIT_OK if ok else EXIT_INCONSISTENT


def cmd_invariants(args) -> int:
    from .invariants import profile

    M = read_matrix(args.file)
    if M.m != M.n:
        raise UsageError(f"{args.file}: invariants need a square matrix, got {M.m}x{M.n}")
    if not is_hadamard(M):
        print(f"{args.file}: not a Hadamard matrix", file=sys.stderr)
        return EXIT_INCONSISTENT
    try:
        p = profile(M, _sizes(args.minors))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(p.to_json())
    return EXIT_OK


def cmd_equiv(args) -> int:
    A, B = read_matrix(args.a), read_matrix(args.b)
    if (A.q, A.m, A.n) != (B.q, B.m, B.n):
        raise UsageError(f"dimension mismatch: BH({A.q},{A.m},{A.n}) vs BH({B.q},{B.m},{B.n})")
    eq = are_equivalent(A, B)
    out = {"equivalent": eq}
    if A.m == A.n:
        out["actEquivalent"] = bool(act_class(A)[1] & {canonical_form(B)})
    print(json.dumps(out))
    return EXIT_OK


def cmd_family_verify(args) -> int:
    names = args.families or bundled_family_names()
    bad = 0
    for spec in names:
        F = _load_family(spec)
        ok = verify_family(F)
        bad += not ok
        print(f"{F.name}\t{F.n}x{F.n}\t{F.k} params\t{'ok' if ok else 'FAIL'}")
    return EXIT_OK if not bad else EXIT_INCONSISTENT


def cmd_family_members(args) -> int:
    from .catalog import load_reference

    F = _load_family(args.family)
    res = members(F, args.r, cap=args.cap)
    ref = {}
    if args.r == 4 and F.n in (10, 12):
        for row in load_reference(F.n):
            ref[min(act_class(row.matrix())[1])] = row.act_class
    act_ids = {a: t + 1 for t, a in enumerate(sorted(res.act_classes))}
    rows = []
    for cf in sorted(res.matrices):
        a = act_identity(res.matrices[cf])
        rows.append(
            {
                "canonical": form_digest(cf),
                "assignment": list(res.assignments[cf]),
                "actClass": act_ids[a],
                "referenceClass": ref.get(a),
            }
        )
    if args.json:
        print(json.dumps({"family": F.name, "r": args.r, "evaluations": res.evaluations, "classes": len(rows), "actClasses": len(act_ids), "members": rows}, indent=2))
    else:
        print(f"{F.name}: {res.evaluations} evaluations, {len(rows)} classes, {len(act_ids)} ACT classes")
        for r in rows:
            extra = f"\tref {r['referenceClass']}" if r["referenceClass"] is not None else ""
            print(f"{r['canonical']}\tact {r['actClass']}\tat {','.join(map(str, r['assignment']))}{extra}")
    return EXIT_OK


def cmd_family_parametrize(args) -> int:
    M = read_matrix(args.file)
    if M.m != M.n:
        raise UsageError("parametrize needs a square matrix")
    if not is_hadamard(M):
        print(f"{args.file}: not a Hadamard matrix", file=sys.stderr)
        return EXIT_INCONSISTENT
    name = Path(args.file).stem
    found = []
    if args.method in ("spl1", "both"):
        found += parametrize_spl1(M, name)
    if args.method in ("blocks", "both"):
        found += parametrize_blocks(M, name)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for F in found:
            write_family(out / f"{F.name}.fam", F)
    for F in found:
        print(f"{F.name}\t{F.k} params\t{'ok' if verify_family(F) else 'FAIL'}")
    print(f"{len(found)} families")
    return EXIT_OK


def cmd_catalog(args) -> int:
    from .catalog import build_catalog
    from .families import load_all_bundled

    d = Path(args.dir)
    if not d.is_dir():
        raise UsageError(f"{d}: not a directory")
    mats = [(p.name, read_matrix(p)) for p in sorted(d.glob("*.bh"))]
    fams = None
    if args.match_families:
        fams = load_all_bundled()
        for p in sorted(d.glob("*.fam")):
            F = read_family(p)
            fams[F.name] = F
    try:
        cat = build_catalog(mats, fams, _sizes(args.minors), {"directory": str(d), "version": __version__})
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INCONSISTENT
    text = cat.table()
    if args.coverage:
        text += "\n" + cat.coverage_table()
    print(text, end="")
    if args.json:
        Path(args.json).write_text(cat.to_json() + "\n", encoding="utf-8")
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="butson", description="Butson Hadamard classification and invariants")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="classify BH(q,n) by weak canonical augmentation")
    s.add_argument("q", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--frontier", type=int, default=3)
    s.add_argument("--resume", metavar="PATH")
    s.add_argument("--level-limit", type=int)
    s.add_argument("--out", metavar="DIR")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("invariants", help="invariant profile of a matrix file as JSON")
    s.add_argument("file")
    s.add_argument("--minors", metavar="K1,K2")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("equiv", help="test two matrix files for equivalence")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_equiv)

    f = sub.add_parser("family", help="parametric families")
    fsub = f.add_subparsers(dest="family_command", required=True)
    s = fsub.add_parser("verify")
    s.add_argument("families", nargs="*", help="family files or bundled names (default: all bundled)")
    s.set_defaults(func=cmd_family_verify)
    s = fsub.add_parser("members")
    s.add_argument("family")
    s.add_argument("--r", type=int, default=4)
    s.add_argument("--cap", type=int, default=10**8)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_family_members)
    s = fsub.add_parser("parametrize")
    s.add_argument("file")
    s.add_argument("--method", choices=("spl1", "blocks", "both"), default="both")
    s.add_argument("--out", metavar="DIR")
    s.set_defaults(func=cmd_family_parametrize)

    s = sub.add_parser("catalog", help="tabulate a directory of matrix files")
    s.add_argument("dir")
    s.add_argument("--match-families", action="store_true")
    s.add_argument("--coverage", action="store_true", help="append the family coverage relation")
    s.add_argument("--minors", metavar="K1,K2")
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ParseError, FamilyError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

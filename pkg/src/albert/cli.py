"""Command line driver.

    albert verify [SUITE ...]        run verification suites
    albert spectral ELEMENT_FILE     resolve one element into idempotents
    albert fermions --family FAM     emit the particle slot tables
    albert suites                    list available suites

Exit codes: 0 all checks passed, 1 at least one check failed,
2 usage or input error.  Reports are deterministic for a fixed spec;
only the "timings" sections vary between runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import report as rpt
from .jordan import AlgebraSC, Elem, euclidean_check, spectral_resolution
from .exceptional import fermion_table
from .rationals import parse_rat
from .suites import SUITES, resolve_algebra, run_suite

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="albert",
        description="Exact verification engine for nonassociative structures.",
    )
    p.add_argument("--version", action="version", version=rpt.ENGINE)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("names", nargs="*", metavar="SUITE",
                   help="suites to run (default: all)")
    v.add_argument("--suite", action="append", default=[], metavar="SUITE",
                   help="additional suite to run (repeatable)")
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tolerance", type=float, default=None,
                   help="override per-check float tolerances")
    v.add_argument("--json", metavar="PATH", help="write the JSON report here")
    v.add_argument("--algebra", metavar="SPEC",
                   help="catalog name or structure-constant JSON file")

    s = sub.add_parser("spectral", help="spectral resolution of one element")
    s.add_argument("element", metavar="ELEMENT_FILE",
                   help="JSON file with 'algebra' and 'coords'")
    s.add_argument("--tolerance", type=float, default=1e-9)
    s.add_argument("--json", metavar="PATH")

    f = sub.add_parser("fermions", help="particle slot tables")
    f.add_argument("--family", choices=("up", "down", "both"), default="both")
    f.add_argument("--json", metavar="PATH")

    sub.add_parser("suites", help="list available suites")
    return p


def _write_json(path: str, doc: dict) -> None:
    Path(path).write_text(rpt.dumps(doc), encoding="utf-8")


def _thread_cap() -> int:
    raw = os.environ.get("ALBERT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def cmd_verify(ns) -> int:
    names = list(ns.names) + list(ns.suite)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(
            "unknown suite(s) %s; choices: %s"
            % (", ".join(unknown), ", ".join(SUITES))
        )
    if not names:
        names = list(SUITES)
    # canonical order, duplicates collapsed
    names = [n for n in SUITES if n in set(names)]
    algebra = resolve_algebra(ns.algebra)
    if algebra is not None:
        bad = [n for n in names if not SUITES[n].accepts_algebra]
        if bad:
            raise UsageError(
                "--algebra is not supported by suite(s): %s" % ", ".join(bad)
            )

    def run_one(name):
        t0 = time.perf_counter()
        checks = run_suite(name, ns.trials, ns.seed, ns.tolerance, algebra)
        spec = {
            "suite": name,
            "trials": ns.trials,
            "seed": ns.seed,
            "tolerance": ns.tolerance,
            "algebra": ns.algebra,
        }
        return rpt.Report(name, spec, checks, elapsed_s=time.perf_counter() - t0)

    cap = _thread_cap()
    if cap > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=cap) as pool:
            reports = list(pool.map(run_one, names))
    else:
        reports = [run_one(n) for n in names]
    reports.sort(key=lambda r: r.suite)

    total = sum(len(r.checks) for r in reports)
    failures = sum(1 for r in reports for c in r.checks if not c.ok)
    doc = rpt.document(
        "verify",
        {
            "reports": [r.to_json() for r in reports],
            "summary": {
                "suites": len(reports),
                "checks": total,
                "failed": failures,
                "ok": failures == 0,
            },
        },
    )
    for r in reports:
        print("suite %s: %s" % (r.suite, "ok" if r.ok else "FAILED"))
        for c in r.checks:
            print(rpt.render_check_lines(c))
    print(
        "%d suite(s), %d check(s), %d failure(s) in %.1fs"
        % (
            len(reports),
            total,
            failures,
            sum(r.elapsed_s or 0.0 for r in reports),
        )
    )
    if ns.json:
        _write_json(ns.json, doc)
    return 0 if failures == 0 else 1


def _load_element(path: str):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError("cannot read element file %s: %s" % (path, exc)) from exc
    if not isinstance(data, dict) or "algebra" not in data or "coords" not in data:
        raise UsageError("element file needs 'algebra' and 'coords' entries")
    ref = data["algebra"]
    try:
        if isinstance(ref, dict):
            a = AlgebraSC.from_json(ref)
        else:
            a = resolve_algebra(str(ref))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    coords = data["coords"]
    if len(coords) != a.dim:
        raise UsageError(
            "element has %d coordinates, algebra %s has dimension %d"
            % (len(coords), a.name, a.dim)
        )
    try:
        vals = [parse_rat(c) if isinstance(c, str) else Fraction(c) for c in coords]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError("bad coordinate: %s" % exc) from exc
    return a, Elem.from_coords(a, vals)


def cmd_spectral(ns) -> int:
    a, x = _load_element(ns.element)
    if not euclidean_check(a).ok:
        raise UsageError(
            "algebra %s is not Euclidean; spectral resolutions need a "
            "positive definite trace form" % a.name
        )
    t0 = time.perf_counter()
    r = spectral_resolution(a, x)
    res = r.residuals()
    ok = (
        max(res["idempotency"], res["orthogonality"], res["unit_sum"]) <= ns.tolerance
        and res["unit_sum_exact_zero"]
        and res["reconstruction"] == 0.0
    )
    doc = rpt.document(
        "spectral",
        {
            "input": {"element": ns.element, "algebra": a.name,
                      "tolerance": ns.tolerance},
            "terms": r.card,
            "resolution": r.to_json(),
            "residuals": res,
            "ok": ok,
            "timings": {"elapsed_s": time.perf_counter() - t0},
        },
    )
    print("algebra %s, %d spectral term(s)" % (a.name, r.card))
    for key in ("idempotency", "orthogonality", "unit_sum"):
        print("  residual %-12s %g" % (key, res[key]))
    print("  unit partition exact: %s" % res["unit_sum_exact_zero"])
    print("  reconstruction residual: %g" % res["reconstruction"])
    print("PASS" if ok else "FAIL")
    if ns.json:
        _write_json(ns.json, doc)
    return 0 if ok else 1


def cmd_fermions(ns) -> int:
    families = ("up", "down") if ns.family == "both" else (ns.family,)
    tables = {fam: fermion_table(fam) for fam in families}
    counts = {
        fam: sum(len(s["algebra_coords"]) for s in t["slots"])
        for fam, t in tables.items()
    }
    doc = rpt.document(
        "fermions",
        {
            "families": tables,
            "counts": dict(counts, total=sum(counts.values())),
        },
    )
    for fam, t in tables.items():
        print("family %s (%d coordinates)" % (fam, counts[fam]))
        for s in t["slots"]:
            print(
                "  %-8s %-8s algebra=%s module=%s"
                % (s["label"], s["kind"], s["algebra_coords"], s["module_coords"]),
            )
    print("total coordinates: %d" % sum(counts.values()))
    if ns.json:
        _write_json(ns.json, doc)
    return 0 if all(c == 27 for c in counts.values()) else 1


def cmd_suites(_ns) -> int:
    for name, sd in SUITES.items():
        flag = " [--algebra]" if sd.accepts_algebra else ""
        print("%-18s %s%s" % (name, sd.summary, flag))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    handlers = {
        "verify": cmd_verify,
        "spectral": cmd_spectral,
        "fermions": cmd_fermions,
        "suites": cmd_suites,
    }
    try:
        return handlers[ns.command](ns)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

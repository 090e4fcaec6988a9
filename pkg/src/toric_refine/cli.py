"""Command line front end.

Exit codes: 0 verified, 2 verification failure, 3 invalid input (usage
errors included), 4 engine error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import fixtures
from .errors import InputError, ToricRefineError
from .fuzz import campaign
from .jobs import (
    canonical_json,
    load_job,
    phi_dump,
    realize,
    report_for_job,
    table_rows,
    tables_json,
    to_csv,
    to_markdown,
)
from .obstruction import compute_tables
from . import __version__

OUT_ENV = "TORIC_REFINE_OUTPUT_DIR"
OK, VERIFY_FAIL, INPUT_FAIL, ENGINE_FAIL = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_FAIL, f"{self.prog}: error: {message}\n")


def _emit(text: str, stem: str) -> None:
    out_dir = os.environ.get(OUT_ENV)
    if out_dir:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        target = path / stem
        target.write_text(text, encoding="utf-8")
        print(str(target))
    else:
        sys.stdout.write(text)


def _stem(path: str) -> str:
    return Path(path).stem


def cmd_resolve(args) -> int:
    job = load_job(args.job)
    ref, info = realize(job)
    out = {"resolution": info, "refinement": ref.to_json() if ref is not None else None}
    _emit(canonical_json(out), f"{_stem(args.job)}.refinement.json")
    return OK if ref is not None else VERIFY_FAIL


def cmd_verify(args) -> int:
    job = load_job(args.job)
    report = report_for_job(job, timing=args.timing)
    _emit(canonical_json(report), f"{_stem(args.job)}.report.json")
    return OK if report["passed"] else VERIFY_FAIL


def _fixture_report(name: str, schedule: str, timing: bool) -> dict:
    t0 = time.perf_counter()
    result = fixtures.check(name, schedule)
    ref, tables = result["refinement"], result["tables"]
    report = {
        "engine": {"name": "toric_refine", "version": __version__},
        "fixture": name,
        "schedule_mode": result["schedule_mode"],
        "schedule": result["schedule"],
        "stages": result["stages"],
        "passed": result["passed"],
        "refinement": ref.to_json(),
        "coords": {x: list(ref.coord_tuple(x)) for x in ref.vertices},
        "tables": tables_json(ref, tables),
        "phi": phi_dump(ref, tables),
    }
    if timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 6)
    return report


def cmd_fixture(args) -> int:
    report = _fixture_report(args.name, args.schedule, args.timing)
    _emit(canonical_json(report), f"fixture-{args.name}.json")
    for s in report["stages"]:
        print(f"{'PASS' if s['passed'] else 'FAIL'} {args.name} {s['name']}", file=sys.stderr)
    return OK if report["passed"] else VERIFY_FAIL


def cmd_fuzz(args) -> int:
    if args.count < 1:
        raise InputError("--count must be at least 1")
    rep = campaign(args.seed, args.count, jobs=args.jobs)
    if not args.full:
        rep = {k: v for k, v in rep.items() if k != "cases"}
    _emit(canonical_json(rep), f"fuzz-{args.seed}-{args.count}.json")
    print(f"{rep['passed']}/{rep['count']} cases passed", file=sys.stderr)
    return OK if rep["failed"] == 0 else VERIFY_FAIL


def cmd_export_matrix(args) -> int:
    if args.source in fixtures.NAMES:
        fx = fixtures.load(args.source)
        result = fixtures.check(args.source, args.schedule)
        ref, tables = result["refinement"], result["tables"]
        names = fixtures.wall_keys(fx, ref)
        exp = fx["expected"]
        rows = [ref.vertex_at(dict(zip(fx["complex"]["vertices"], p))) for p in exp.get("rows", exp["vertices"])]
        cols = [(c, names[c]) for c in exp.get("columns", list(names))]
        cols = [(c, k) for c, k in cols if k in tables.I]
        stem = f"matrix-{args.source}"
        row_name = lambda x: fixtures.coord_str(ref.coord_tuple(x))  # noqa: E731
    else:
        job = load_job(args.source)
        ref, _ = realize(job)
        if ref is None:
            raise InputError(f"{args.source}: resolution did not reach a regular fan")
        tables = compute_tables(ref)
        rows, cols = None, None
        stem = f"{_stem(args.source)}.matrix"
        row_name = str
    row_ids, col_names, body = table_rows(ref, tables, rows, cols)
    if args.format == "csv":
        _emit(to_csv(row_ids, col_names, body, row_name), stem + ".csv")
    else:
        _emit(to_markdown(row_ids, col_names, body, row_name), stem + ".md")
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toric-refine", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("resolve", help="resolve a job and print the refinement")
    s.add_argument("job")
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("verify", help="resolve or import, then verify the wall identity and key formula")
    s.add_argument("job")
    s.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte stability)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("fixture", help="check one of the built-in worked examples")
    s.add_argument("name", choices=fixtures.NAMES)
    s.add_argument("--schedule", choices=("printed", "figure"), default="printed",
                   help="a2 only: printed blow-up order or the order reproducing the drawn figure")
    s.add_argument("--timing", action="store_true")
    s.set_defaults(func=cmd_fixture)

    s = sub.add_parser("fuzz", help="seeded random verification campaign")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--full", action="store_true", help="include every case summary in the report")
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("export-matrix", help="export the intersection table")
    s.add_argument("source", help="a job file, or a fixture name (a1, a2)")
    s.add_argument("--format", choices=("csv", "md"), required=True)
    s.add_argument("--schedule", choices=("printed", "figure"), default="printed")
    s.set_defaults(func=cmd_export_matrix)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ToricRefineError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # engine bug; keep the contract on exit codes
        print(f"engine error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return ENGINE_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""Job specifications, refinement realisation and report assembly."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from . import __version__
from .chow import SymbolicOneCycle, phi_refined, render, verify_key_formula
from .complex import DualComplex, complex_from_json
from .errors import InputError
from .obstruction import ObstructionTables, compute_tables, verify_wall_identity
from .refinement import Refinement, from_state, import_triangulation
from .resolution import check_terminal, initial_state, resolve_default, run_schedule

STAGES = ("terminal", "wall-identity", "key-formula")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def input_hash(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode("utf-8")).hexdigest()


@dataclass
class JobSpec:
    complex: DualComplex
    r: int
    schedule: Optional[list] = None
    refinement: Optional[dict] = None
    commands: list = field(default_factory=lambda: ["wall-identity", "key-formula"])
    seed: Optional[int] = None
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def mode(self) -> str:
        if self.refinement is not None:
            return "import"
        return "schedule" if self.schedule is not None else "default"


def parse_job(data: Any) -> JobSpec:
    if not isinstance(data, dict):
        raise InputError("job: top level must be a JSON object")
    for k in ("complex", "r"):
        if k not in data:
            raise InputError(f"job: missing required key {k!r}")
    C = complex_from_json(data["complex"])
    r = data["r"]
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise InputError(f"job.r: expected a positive integer, got {r!r}")
    schedule = data.get("schedule")
    if schedule == "default":
        schedule = None
    refinement = data.get("refinement")
    if schedule is not None and refinement is not None:
        raise InputError("job: give at most one of 'schedule' and 'refinement'")
    if schedule is not None and not isinstance(schedule, list):
        raise InputError("job.schedule: expected a list of component labels or coordinates")
    commands = data.get("commands", ["wall-identity", "key-formula"])
    unknown = [c for c in commands if c not in STAGES]
    if unknown:
        raise InputError(f"job.commands: unknown stages {unknown}; known: {list(STAGES)}")
    seed = data.get("seed")
    if seed is not None and (not isinstance(seed, int) or not 0 <= seed < 2 ** 64):
        raise InputError("job.seed: expected a 64-bit non-negative integer")
    return JobSpec(C, r, schedule, refinement, list(commands), seed, data)


def load_job(path: str) -> JobSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_job(data)


def realize(job: JobSpec) -> tuple:
    """Build the refinement for ``job``. Returns ``(refinement, resolution info)``."""
    if job.mode == "import":
        ref_data = job.refinement
        try:
            ref = import_triangulation(job.complex, job.r, ref_data["vertices"], ref_data["facets"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"job.refinement: expected 'vertices' and 'facets' ({exc})") from exc
        return ref, {"mode": "import"}
    state = initial_state(job.complex, job.r)
    if job.mode == "schedule":
        final = run_schedule(state, job.schedule, audit=job.complex.dim <= 2)
        used = [h["label"] for h in final.history]
    else:
        final, used = resolve_default(state, audit=job.complex.dim <= 2)
    term = check_terminal(final)
    info = {
        "mode": job.mode,
        "schedule": used,
        "terminal": {"ok": term.ok, "offending": term.offending},
        "flags": final.flags,
        "audit": {
            "steps": len(final.audit_log),
            "lattice_ok": all(a["lattice_ok"] for a in final.audit_log),
            "support_ok": all(a["support_ok"] is not False for a in final.audit_log),
        },
    }
    return from_state(final) if term.ok else None, info


def wall_name(ref: Refinement, key) -> str:
    return "{" + "; ".join(key) + "}"


def tables_json(ref: Refinement, tables: ObstructionTables) -> dict:
    return {
        "d": {x: {v: tables.d[(x, v)] for v in ref.base.vertices} for x in ref.vertices},
        "I": {wall_name(ref, k): dict(col) for k, col in tables.I.items()},
    }


def verify(ref: Refinement, tables: ObstructionTables, commands) -> list:
    stages = []
    if "terminal" in commands:
        stages.append({"name": "terminal", "passed": True})
    if "wall-identity" in commands:
        rep = verify_wall_identity(ref, tables)
        stages.append({"name": "wall-identity", "passed": rep.passed, "detail": rep.to_json()})
    if "key-formula" in commands:
        rep = verify_key_formula(ref, tables)
        detail = rep.to_json()
        for entry, e in zip(detail["vertices"], rep.entries):
            entry["lhs_text"] = render(e["lhs"], ref)
            entry["rhs_text"] = render(e["rhs"], ref)
        stages.append({"name": "key-formula", "passed": rep.passed, "detail": detail})
    return stages


def phi_dump(ref: Refinement, tables: ObstructionTables) -> dict:
    cycle = SymbolicOneCycle.generic(ref)
    out = {}
    for x in ref.vertices:
        e = phi_refined(ref, tables, cycle, x)
        out[x] = {"text": render(e, ref), "terms": e.to_json()["terms"]}
    return out


def report_for_job(job: JobSpec, *, timing: bool = False) -> dict:
    t0 = time.perf_counter()
    ref, info = realize(job)
    report = {
        "engine": {"name": "toric_refine", "version": __version__},
        "input_sha256": input_hash(job.raw),
        "resolution": info,
    }
    if ref is None:
        report["stages"] = [{"name": "terminal", "passed": False, "detail": info["terminal"]}]
        report["passed"] = False
        return report
    tables = compute_tables(ref)
    report["refinement"] = ref.to_json()
    report["coords"] = {x: list(ref.coord_tuple(x)) for x in ref.vertices}
    report["tables"] = tables_json(ref, tables)
    report["stages"] = verify(ref, tables, job.commands)
    report["phi"] = phi_dump(ref, tables)
    report["passed"] = all(s["passed"] for s in report["stages"])
    if timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 6)
    return report


# ---- matrix export -------------------------------------------------------

def table_rows(ref: Refinement, tables: ObstructionTables, row_ids=None, columns=None):
    """``(row labels, column labels, matrix)``; unnamed walls follow named ones."""
    row_ids = list(row_ids) if row_ids else sorted(ref.vertices)
    named = list(columns or [])
    seen = {k for _, k in named}
    cols = named + [(wall_name(ref, w.key), w.key) for w in tables.walls if w.key not in seen]
    body = [[tables.I.get(k, {}).get(x, 0) for _, k in cols] for x in row_ids]
    return row_ids, [c for c, _ in cols], body


def to_csv(rows, cols, body, row_name=str) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["vertex"] + cols)
    for x, line in zip(rows, body):
        w.writerow([row_name(x)] + line)
    return buf.getvalue()


def to_markdown(rows, cols, body, row_name=str) -> str:
    out = ["| vertex | " + " | ".join(cols) + " |", "|---" * (len(cols) + 1) + "|"]
    for x, line in zip(rows, body):
        out.append(f"| {row_name(x)} | " + " | ".join(str(v) for v in line) + " |")
    return "\n".join(out) + "\n"

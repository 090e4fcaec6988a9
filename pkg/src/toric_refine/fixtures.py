"""Golden fixtures from the two worked examples and the checks run against them."""

from __future__ import annotations

import json
import re
from collections import Counter
from importlib import resources
from typing import Any, Optional

from .chow import (
    PUSHED,
    REFINED,
    CycleExpression,
    RestrictedOneCycle,
    SymbolicOneCycle,
    WallClass,
    phi_refined,
    render,
    verify_key_formula,
)
from .complex import complex_from_json
from .obstruction import ObstructionTables, compute_tables, verify_wall_identity
from .refinement import Refinement, from_state, import_triangulation
from .resolution import initial_state, resolve_default, run_schedule

NAMES = ("a1", "a2")
_TERM = re.compile(r"^([+-])(\d*)(gamma|alpha'?)_(.+)$")


def load(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {NAMES}")
    text = resources.files(__package__).joinpath("fixtures").joinpath(f"{name}.json").read_text("utf-8")
    return json.loads(text)


def coord_str(t) -> str:
    return "(" + ",".join(str(k) for k in t) + ")"


def _coords(fx: dict, t) -> dict:
    return dict(zip(fx["complex"]["vertices"], t))


def _parse_coord_str(s: str) -> tuple:
    return tuple(int(x) for x in s.strip("()").split(","))


def wall_keys(fx: dict, ref: Refinement) -> dict:
    """Fixture wall name -> sorted id tuple (whether or not it is a wall of ``ref``)."""
    out = {}
    for name, pts in fx["expected"]["walls"].items():
        out[name] = tuple(sorted(ref.vertex_at(_coords(fx, p)) for p in pts))
    return out


def parse_expression(fx: dict, ref: Refinement, terms, ambient: str, level: str) -> CycleExpression:
    names = wall_keys(fx, ref)
    acc: Counter = Counter()
    for t in terms:
        m = _TERM.match(t)
        if not m:
            raise ValueError(f"bad fixture term {t!r}")
        sign, mag, kind, body = m.groups()
        coef = (-1 if sign == "-" else 1) * (int(mag) if mag else 1)
        if kind == "gamma":
            owner, edge = body.split("|")
            acc[RestrictedOneCycle(owner, tuple(edge), level)] += coef
        else:
            wall = "tau" + kind[len("alpha"):] + "_" + body
            acc[WallClass(names[wall], level)] += coef
    return CycleExpression(ambient, level, acc)


def build(fx: dict, schedule: str = "printed"):
    """Run the fixture's resolution. ``schedule`` is 'printed', 'figure' or 'default'."""
    C = complex_from_json(fx["complex"])
    state = initial_state(C, fx["r"])
    if schedule == "default" or fx["schedule"] == "default":
        final, used = resolve_default(state, audit=True)
    else:
        entries = fx["schedule"] if schedule == "printed" else fx["figure_schedule"]
        final = run_schedule(state, entries, audit=True)
        used = [h["label"] for h in final.history]
    return final, from_state(final), used


def figure_refinement(fx: dict) -> Refinement:
    """The drawn triangulation, imported directly (second example only)."""
    C = complex_from_json(fx["complex"])
    verts, ids = [], {}
    for p in fx["expected"]["vertices"]:
        vid = coord_str(p)
        ids[tuple(p)] = vid
        coords = {v: c for v, c in _coords(fx, p).items() if c}
        verts.append({"id": vid, "carrier": sorted(coords), "coords": coords})
    facets = [[ids[tuple(p)] for p in f] for f in fx["expected"]["figure_facets"]]
    return import_triangulation(C, fx["r"], verts, facets)


def matrix(ref: Refinement, tables: ObstructionTables, rows, keys) -> list:
    return [[tables.I.get(k, {}).get(vid, 0) for k in keys] for vid in rows]


def fixture_matrix(fx: dict, ref: Refinement, tables: ObstructionTables) -> list:
    names = wall_keys(fx, ref)
    rows = [ref.vertex_at(_coords(fx, p)) for p in fx["expected"]["rows"]]
    return matrix(ref, tables, rows, [names[c] for c in fx["expected"]["columns"]])


def _stage(name: str, passed: bool, detail: Any = None) -> dict:
    out = {"name": name, "passed": bool(passed)}
    if detail is not None:
        out["detail"] = detail
    return out


def check(name: str, schedule: str = "printed", ref: Optional[Refinement] = None) -> dict:
    """Every comparison against the fixture. Returns stages plus the objects built."""
    fx = load(name)
    exp = fx["expected"]
    stages = []
    used = None
    state = None
    if ref is None:
        state, ref, used = build(fx, schedule)
    tables = compute_tables(ref)
    coords = {vid: ref.coord_tuple(vid) for vid in ref.vertices}

    got_pts = sorted(coords.values())
    want_pts = sorted(tuple(p) for p in exp["vertices"])
    stages.append(_stage("vertices", got_pts == want_pts, {"count": len(got_pts)}))

    if state is not None:
        audit = state.audit_log
        stages.append(_stage(
            "blowup_audit",
            all(a["lattice_ok"] and a["support_ok"] is not False for a in audit),
            {"steps_checked": len(audit)},
        ))

    n = ref.base.dim
    unimodular_count = sum(1 for f in ref.facets if len(f) == n + 1)
    stages.append(_stage("facets", unimodular_count == fx["r"] ** n * sum(
        1 for f in ref.base.facets if len(f) == n + 1), {"count": len(ref.facets)}))

    if "figure_facets" in exp:
        want = {frozenset(tuple(p) for p in f) for f in exp["figure_facets"]}
        got = {frozenset(coords[x] for x in f) for f in ref.facets}
        stages.append(_stage("figure_triangulation", got == want, {
            "missing": sorted(sorted(coord_str(p) for p in f) for f in want - got),
            "extra": sorted(sorted(coord_str(p) for p in f) for f in got - want),
        }))

    names = wall_keys(fx, ref)
    got_walls = {w.key for w in tables.walls}
    want_walls = set(names.values())
    stages.append(_stage("relative_walls", got_walls == want_walls, {
        "count": len(got_walls),
        "missing": sorted(n_ for n_, k in names.items() if k not in got_walls),
    }))

    if "matrix" in exp:
        got = fixture_matrix(fx, ref, tables)
        diffs = [
            {"row": coord_str(exp["rows"][i]), "column": exp["columns"][j], "expected": exp["matrix"][i][j], "got": got[i][j]}
            for i in range(len(got)) for j in range(len(got[i])) if got[i][j] != exp["matrix"][i][j]
        ]
        stages.append(_stage("intersection_matrix", not diffs, {"mismatches": diffs}))
    for wname, col in exp.get("intersection_columns", {}).items():
        key = names[wname]
        want = {ref.vertex_at(_coords(fx, _parse_coord_str(p))): b for p, b in col.items()}
        stages.append(_stage(f"intersection_column {wname}", tables.I.get(key) == want))

    bad_d = []
    for v, weights in exp["key_weights"].items():
        want = {ref.vertex_at(_coords(fx, _parse_coord_str(p))): w for p, w in weights.items()}
        got = {x: fx["r"] - tables.d[(x, v)] for x in ref.vertices if tables.d[(x, v)] < fx["r"]}
        if got != want:
            bad_d.append(v)
    stages.append(_stage("distance_weights", not bad_d, {"mismatched_vertices": bad_d}))

    cycle = SymbolicOneCycle.generic(ref)
    alpha_all = dict(cycle.alpha)
    for key in names.values():
        alpha_all.setdefault(key, 1)
    cycle = SymbolicOneCycle(cycle.gamma, alpha_all)
    bad_phi = []
    for p, terms in exp["phi"].items():
        vid = ref.vertex_at(_coords(fx, _parse_coord_str(p)))
        want = parse_expression(fx, ref, terms, vid, REFINED)
        got = phi_refined(ref, tables, cycle, vid)
        if got != want:
            bad_phi.append({"vertex": p, "expected": render(want, ref), "got": render(got, ref)})
    stages.append(_stage("phi_lines", not bad_phi, {"lines": len(exp["phi"]), "mismatches": bad_phi}))

    wall = verify_wall_identity(ref, tables)
    stages.append(_stage("wall_identity", wall.passed, wall.to_json()))

    key = verify_key_formula(ref, tables)
    bad_lhs = []
    for v, terms in exp["key_lhs"].items():
        want = parse_expression(fx, ref, terms, v, PUSHED)
        e = key.entry(v)
        if not (e["passed"] and e["lhs"] == want and e["rhs"] == want):
            bad_lhs.append(v)
    stages.append(_stage("key_formula", key.passed and not bad_lhs, {"mismatched_displays": bad_lhs}))

    return {
        "fixture": name,
        "schedule_mode": schedule if fx["schedule"] != "default" else "default",
        "schedule": used,
        "stages": stages,
        "passed": all(s["passed"] for s in stages),
        "refinement": ref,
        "tables": tables,
    }

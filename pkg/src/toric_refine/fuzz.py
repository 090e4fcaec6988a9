"""Seeded random verification campaigns."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from itertools import combinations

from .chow import verify_key_formula
from .complex import build_complex
from .errors import ToricRefineError
from .obstruction import compute_tables, verify_wall_identity
from .refinement import from_state
from .resolution import check_terminal, initial_state, resolve_default

MAX_VERTICES = 8
MAX_R = 6


def random_case(seed: int) -> dict:
    """Random complex (at most 8 vertices, dimension at most 2) and index r."""
    rng = random.Random(seed)
    nv = rng.randint(1, MAX_VERTICES)
    verts = [str(i) for i in range(1, nv + 1)]
    top = min(rng.choices([0, 1, 2], weights=[1, 2, 5])[0], nv - 1)
    pool = [c for k in range(1, top + 2) for c in combinations(verts, k)]
    biggest = [c for c in pool if len(c) == top + 1]
    count = rng.randint(1, min(len(pool), 6))
    facets = {rng.choice(biggest)}
    while len(facets) < count:
        facets.add(rng.choice(biggest if rng.random() < 0.7 else pool))
    return {
        "seed": seed,
        "complex": {"vertices": verts, "facets": [list(f) for f in sorted(facets)]},
        "r": rng.randint(1, MAX_R),
    }


def run_case(case: dict, *, audit: bool = True) -> dict:
    """Resolve with the greedy schedule and run every check on the result."""
    out = {"seed": case["seed"], "r": case["r"], "complex": case["complex"]}
    try:
        C = build_complex(case["complex"]["vertices"], case["complex"]["facets"])
        state, schedule = resolve_default(initial_state(C, case["r"]), audit=audit)
        out["schedule_length"] = len(schedule)
        out["terminal"] = check_terminal(state).ok
        out["audit_ok"] = all(a["lattice_ok"] and a["support_ok"] is not False for a in state.audit_log)
        out["flags"] = len(state.flags)
        ref = from_state(state)
        out["refined_vertices"] = len(ref.vertices)
        out["edge_rays_ok"] = all(
            sum(1 for x in ref.vertices if ref.support(x) == e) == case["r"] - 1 for e in C.edges
        )
        tables = compute_tables(ref)
        out["walls"] = len(tables.walls)
        wall = verify_wall_identity(ref, tables)
        key = verify_key_formula(ref, tables)
        out["wall_identity"] = wall.passed
        out["wall_pairs_checked"] = wall.checked
        out["key_formula"] = key.passed
        out["key_residual_terms"] = sum(len(e["residual"].terms) for e in key.entries)
        out["passed"] = all(
            [out["terminal"], out["audit_ok"], out["edge_rays_ok"], wall.passed, key.passed]
        )
    except ToricRefineError as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
        out["passed"] = False
    return out


def case_seeds(seed: int, count: int) -> list:
    rng = random.Random(seed)
    return [rng.getrandbits(63) for _ in range(count)]


def campaign(seed: int, count: int, *, jobs: int = 1, audit: bool = True) -> dict:
    if count < 1:
        raise ValueError("count must be at least 1")
    cases = [random_case(s) for s in case_seeds(seed, count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(partial(run_case, audit=audit), cases, chunksize=8))
    else:
        results = [run_case(c, audit=audit) for c in cases]
    failures = [r for r in results if not r["passed"]]
    return {
        "seed": seed,
        "count": count,
        "passed": len(results) - len(failures),
        "failed": len(failures),
        "failures": [{"seed": r["seed"], "error": r.get("error"), "case": r} for r in failures],
        "cases": results,
    }

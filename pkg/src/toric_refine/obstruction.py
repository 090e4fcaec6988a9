"""Distance and intersection functions of a refinement, and the wall identity."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .complex import sorted_simplex
from .lattice import combine, wall_relation
from .refinement import Refinement, RelativeWall


@dataclass(frozen=True)
class ObstructionTables:
    r: int
    walls: tuple  # RelativeWall, canonical order
    d: dict  # (refined id, base vertex) -> int
    I: dict  # wall key -> {refined id: nonzero int}

    def distance(self, vtilde: str, v: str) -> int:
        return self.d[(vtilde, v)]

    def intersection(self, wall, vtilde: str) -> int:
        key = wall.key if isinstance(wall, RelativeWall) else tuple(sorted(wall))
        return self.I[key].get(vtilde, 0)

    @cached_property
    def by_vertex(self) -> dict:
        """refined id -> [(wall key, I value), ...] over the nonzero entries."""
        out: dict = {}
        for key, col in self.I.items():
            for x, b in col.items():
                out.setdefault(x, []).append((key, b))
        return out

    def wall(self, key) -> RelativeWall:
        key = tuple(sorted(key))
        for w in self.walls:
            if w.key == key:
                return w
        raise KeyError(key)


def distance_table(ref: Refinement) -> dict:
    """``d(v~, v) = r - c_v(v~)`` for every refined and base vertex."""
    return {
        (vid, v): ref.r - ref.coord(vid, v)
        for vid in ref.vertices
        for v in ref.base.vertices
    }


def wall_rays(ref: Refinement, w: RelativeWall) -> tuple:
    """Ordered ids ``v'_0, shared..., v'_{d+1}`` and their lattice vectors over ``w.base``."""
    order = (w.opposite[0],) + w.shared + (w.opposite[1],)
    sigma = sorted_simplex(w.base)
    rays = [(1,) + tuple(ref.coord(x, u) for u in sigma[1:]) for x in order]
    return order, rays


def intersection_table(ref: Refinement) -> dict:
    table = {}
    for w in ref.relative_walls:
        order, rays = wall_rays(ref, w)
        rel = wall_relation(rays, range(1, len(order) - 1))
        table[w.key] = {x: b for x, b in zip(order, rel.coefficients) if b}
    return table


def compute_tables(ref: Refinement) -> ObstructionTables:
    return ObstructionTables(ref.r, tuple(ref.relative_walls), distance_table(ref), intersection_table(ref))


@dataclass
class WallIdentityReport:
    checked: int
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "violations": self.violations}


def verify_wall_identity(ref: Refinement, tables: ObstructionTables) -> WallIdentityReport:
    """Check ``sum_v~ (r - d(v~, v)) I_tau(v~) = 0`` for all base vertices and walls."""
    report = WallIdentityReport(0)
    for w in tables.walls:
        column = tables.I[w.key]
        for v in ref.base.vertices:
            total = sum((tables.r - tables.d[(x, v)]) * b for x, b in column.items())
            report.checked += 1
            if total:
                report.violations.append({"vertex": v, "wall": list(w.key), "sum": total})
    return report


def column_is_lattice_relation(ref: Refinement, tables: ObstructionTables, w: RelativeWall) -> bool:
    """Re-assert the wall relation through the table: sum I * vector == 0."""
    sigma = sorted_simplex(w.base)
    ids = sorted(tables.I[w.key])
    vecs = [(1,) + tuple(ref.coord(x, u) for u in sigma[1:]) for x in ids]
    return not any(combine([tables.I[w.key][x] for x in ids], vecs))

"""Local toric models after base change and their blow-up subdivisions.

Each maximal simplex ``sigma`` of the base complex (vertices ``v_0 < ... < v_n``)
carries the cone over ``r * Delta^n``. Points of the slice are integer
barycentric tuples ``(c_0, ..., c_n)`` summing to ``r``; as lattice vectors they
are ``(1, c_1, ..., c_n)``.

A cone of the family is stored symmetrically. It has corners ``(c_i, r_i)``
with ``sum(c_i) + r_i = r`` and an active index set ``J``; its generators are
``c_i + r_i * delta_j`` for ``j`` in ``J``. In the basis of the local model
this is ``e_i = c_i + r_i * delta_{j0}`` and ``f_j = delta_j - delta_{j0}``
for the least ``j0`` in ``J``.

Blowing up the component whose ray is ``P = c_a + r_a * delta_b`` inserts
the ray ``c_a + delta_b`` with multiplicity ``r_a - 1`` and splits the cone
into ``(E + new, J - {b})`` and ``(E - a + new, J)``. The case ``b = j0``
is the re-indexed form of the ``y_0`` variant. If either piece drops rank,
the center was already Cartier in this chart and nothing happens.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Any, Iterable, Mapping, Sequence, Union

from . import geometry
from .complex import DualComplex, sorted_simplex
from .errors import (
    CenterNotPresent,
    ConsistencyViolation,
    InputError,
    NoProgress,
    UnknownComponent,
)
from .lattice import determinant, rank

PointKey = tuple  # tuple[tuple[str, int], ...], sorted by vertex, zero counts dropped
Bary = tuple  # tuple[int, ...] aligned with a carrier


def point_key(carrier: Sequence[str], bary: Sequence[int]) -> PointKey:
    return tuple((v, c) for v, c in zip(carrier, bary) if c)


def bary_in(carrier: Sequence[str], key: PointKey):
    """Barycentric tuple of ``key`` over ``carrier``, or None if it lies elsewhere."""
    pos = {v: i for i, v in enumerate(carrier)}
    out = [0] * len(carrier)
    for v, c in key:
        if v not in pos:
            return None
        out[pos[v]] = c
    return tuple(out)


def slice_vector(bary: Sequence[int]) -> tuple:
    """Lattice vector ``(1, c_1, ..., c_n)`` of a slice point."""
    return (1,) + tuple(bary[1:])


def exceptional_label(key: PointKey) -> str:
    return "E:" + ",".join(v for v, _ in key) + ":" + ",".join(str(c) for _, c in key)


def _delta(n1: int, j: int) -> Bary:
    return tuple(int(k == j) for k in range(n1))


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _scale(k, v):
    return tuple(k * a for a in v)


@dataclass(frozen=True)
class ConeFamilyRecord:
    carrier: tuple
    corners: tuple  # ((c_i, r_i), ...)
    active: tuple  # sorted indices J

    @property
    def n(self) -> int:
        return len(self.carrier) - 1

    @cached_property
    def r(self) -> int:
        c, ri = self.corners[0]
        return sum(c) + ri

    @cached_property
    def generators(self) -> tuple:
        n1 = len(self.carrier)
        pts = set()
        for c, ri in self.corners:
            for j in self.active:
                pts.add(_add(c, _scale(ri, _delta(n1, j))))
        return tuple(sorted(pts))

    @cached_property
    def generator_keys(self) -> frozenset:
        return frozenset(point_key(self.carrier, g) for g in self.generators)

    @cached_property
    def rank(self) -> int:
        return rank([slice_vector(g) for g in self.generators])

    @cached_property
    def is_regular(self) -> bool:
        gens = self.generators
        if len(gens) != len(self.carrier):
            return False
        return abs(determinant([slice_vector(g) for g in gens])) == 1

    @property
    def e_rays(self) -> list:
        """``(slice vector of e_i, r_i)`` in the local-model basis."""
        j0 = self.active[0]
        n1 = len(self.carrier)
        return [
            (slice_vector(_add(c, _scale(ri, _delta(n1, j0)))), ri) for c, ri in self.corners
        ]

    @property
    def f_dirs(self) -> list:
        j0 = self.active[0]
        n1 = len(self.carrier)
        out = []
        for j in self.active[1:]:
            d = tuple(a - b for a, b in zip(_delta(n1, j), _delta(n1, j0)))
            out.append((0,) + d[1:])
        return out

    def locate(self, bary: Bary) -> list:
        """All ``(i, j)`` with ``c_i + r_i * delta_j == bary``."""
        n1 = len(self.carrier)
        return [
            (i, j)
            for i, (c, ri) in enumerate(self.corners)
            for j in self.active
            if _add(c, _scale(ri, _delta(n1, j))) == tuple(bary)
        ]

    def slice_points(self) -> list:
        return [tuple(g[1:]) for g in self.generators]


def sigma_family(carrier: Sequence[str], r: int) -> ConeFamilyRecord:
    """The unsubdivided cone over ``r * Delta^n``."""
    n1 = len(carrier)
    return ConeFamilyRecord(tuple(carrier), (((0,) * n1, r),), tuple(range(n1)))


def sigma_dual_generators(n: int, r: int) -> list:
    """Generators of the dual cone of the one-corner family, in dual coordinates.

    The order is ``e_1*, f_1*, ..., f_n*, r e_1* - f_1* - ... - f_n*``.
    """
    out = [tuple(int(k == i) for k in range(n + 1)) for i in range(n + 1)]
    out.append((r,) + (-1,) * n)
    return out


SPLIT, DEGENERATE, REGULAR, ZERO_MULT = "split", "degenerate", "regular", "zero-multiplicity"


@lru_cache(maxsize=200_000)
def _split(rec: ConeFamilyRecord, bary: Bary):
    hits = rec.locate(bary)
    if not hits:
        raise CenterNotPresent(f"{bary!r} is not a generator of the cone {rec.generators!r}")
    live = [(a, b) for a, b in hits if rec.corners[a][1] >= 1]
    if not live:
        return (rec,), ZERO_MULT
    assert len(live) == 1, f"center {bary!r} located ambiguously in {rec!r}"
    if rec.is_regular:
        return (rec,), REGULAR
    a, b = live[0]
    ca, ra = rec.corners[a]
    new = (_add(ca, _delta(len(rec.carrier), b)), ra - 1)
    first = ConeFamilyRecord(
        rec.carrier, rec.corners + (new,), tuple(j for j in rec.active if j != b)
    )
    second = ConeFamilyRecord(
        rec.carrier, tuple(e for i, e in enumerate(rec.corners) if i != a) + (new,), rec.active
    )
    full = len(rec.carrier)
    if first.rank < full or second.rank < full:
        return (rec,), DEGENERATE
    return (first, second), SPLIT


def blowup_subdivide(
    cone: ConeFamilyRecord,
    center: Union[str, PointKey, Bary],
    labels: Mapping[str, PointKey] | None = None,
) -> list:
    """Subdivide ``cone`` by the blow-up of the component with ray ``center``.

    ``center`` is a label (resolved through ``labels``; without ``labels`` an
    original vertex name is accepted), a global point key, or a barycentric
    tuple over the cone's carrier. Returns one record when
    the blow-up is trivial in this chart, two otherwise.
    """
    if isinstance(center, str) and labels is None and center in cone.carrier:
        center = tuple(cone.r if v == center else 0 for v in cone.carrier)
    bary = _resolve_center(cone.carrier, center, labels)
    pieces, _ = _split(cone, bary)
    return list(pieces)


def _resolve_center(carrier, center, labels) -> Bary:
    if isinstance(center, str):
        if labels is None or center not in labels:
            raise UnknownComponent(f"no component labelled {center!r}")
        center = labels[center]
    if center and isinstance(center[0], tuple):
        bary = bary_in(carrier, center)
        if bary is None:
            raise CenterNotPresent(f"{center!r} does not lie over carrier {carrier!r}")
        return bary
    return tuple(center)


@dataclass
class TerminalReport:
    ok: bool
    offending: list

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class LocalFanState:
    """Per-carrier cone lists plus the global component registry."""

    base: DualComplex
    r: int
    cones: dict  # carrier tuple -> list[ConeFamilyRecord]
    labels: dict  # PointKey -> label
    history: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    audit_log: list = field(default_factory=list)

    @cached_property
    def by_label(self) -> dict:
        return {lab: key for key, lab in self.labels.items()}

    @cached_property
    def _shared_faces(self) -> dict:
        out: dict = {c: [] for c in self.cones}
        for a, b in combinations(sorted(self.cones), 2):
            face = tuple(v for v in a if v in set(b))
            if len(face) >= 2:
                out[a].append((b, face))
                out[b].append((a, face))
        return out

    @cached_property
    def _carriers_of_vertex(self) -> dict:
        out: dict = {}
        for c in self.cones:
            for v in c:
                out.setdefault(v, []).append(c)
        return out

    def copy(self) -> "LocalFanState":
        new = LocalFanState(
            self.base,
            self.r,
            {c: list(recs) for c, recs in self.cones.items()},
            dict(self.labels),
            list(self.history),
            copy.deepcopy(self.flags),
            list(self.audit_log),
        )
        return new

    def records(self):
        for c in sorted(self.cones):
            for rec in self.cones[c]:
                yield c, rec

    def label_of(self, carrier, bary) -> str:
        return self.labels[point_key(carrier, bary)]

    def resolve(self, entry: Any) -> PointKey:
        """Turn a schedule entry (label, coordinate map or coordinate list) into a key."""
        if isinstance(entry, str):
            if entry not in self.by_label:
                raise UnknownComponent(f"no component labelled {entry!r} exists yet")
            return self.by_label[entry]
        if isinstance(entry, Mapping):
            key = tuple(sorted((str(v), int(c)) for v, c in entry.items() if int(c)))
        elif isinstance(entry, (list, tuple)) and len(entry) == len(self.base.vertices):
            key = tuple((v, int(c)) for v, c in zip(self.base.vertices, entry) if int(c))
        else:
            raise InputError(f"cannot interpret schedule entry {entry!r}")
        if key not in self.labels:
            raise UnknownComponent(f"no component at {dict(key)!r} exists yet")
        return key

    def _register(self, key: PointKey) -> str:
        if key in self.labels:
            return self.labels[key]
        lab = exceptional_label(key)
        taken = set(self.labels.values())
        while lab in taken:
            lab += "'"
        self.labels[key] = lab
        self.by_label[lab] = key
        return lab

    def apply(self, entry: Any, *, audit: bool = False) -> str:
        """Blow up one component in every chart containing its ray."""
        key = self.resolve(entry)
        label = self.labels[key]
        support = [v for v, _ in key]
        carriers = [c for c in self._carriers_of_vertex.get(support[0], []) if set(support) <= set(c)]
        touched = []
        splits = 0
        for carrier in carriers:
            bary = bary_in(carrier, key)
            new_list = []
            changed = False
            for rec in self.cones[carrier]:
                if key not in rec.generator_keys:
                    new_list.append(rec)
                    continue
                pieces, status = _split(rec, bary)
                if status == ZERO_MULT:
                    self.flags.append(
                        {"step": len(self.history), "label": label, "carrier": list(carrier),
                         "reason": "center reached only through a multiplicity-zero corner"}
                    )
                if status == SPLIT:
                    changed = True
                    splits += 1
                    if audit:
                        self.audit_log.append(audit_split(rec, pieces))
                    for piece in pieces:
                        for g in piece.generators:
                            self._register(point_key(carrier, g))
                new_list.extend(pieces)
            if changed:
                self.cones[carrier] = new_list
                touched.append(carrier)
        self.history.append({"label": label, "splits": splits})
        self._check_consistency(touched)
        return label

    def face_cells(self, carrier, face) -> set:
        idx = tuple(i for i, v in enumerate(carrier) if v in set(face))
        out = set()
        for rec in self.cones[carrier]:
            cell = _face_cell(rec, idx)
            if cell is not None:
                out.add(cell)
        return out

    def _check_consistency(self, touched: Iterable) -> None:
        seen = set()
        for a in touched:
            for b, face in self._shared_faces[a]:
                pair = (min(a, b), max(a, b))
                if pair in seen:
                    continue
                seen.add(pair)
                if self.face_cells(a, face) != self.face_cells(b, face):
                    raise ConsistencyViolation(
                        f"subdivisions of shared face {list(face)} disagree between "
                        f"carriers {list(a)} and {list(b)}"
                    )


@lru_cache(maxsize=200_000)
def _face_cell(rec: ConeFamilyRecord, idx: tuple):
    outside = [i for i in range(len(rec.carrier)) if i not in idx]
    pts = [g for g in rec.generators if all(g[i] == 0 for i in outside)]
    if len(pts) < len(idx) or rank([slice_vector(g) for g in pts]) < len(idx):
        return None
    return frozenset(point_key(rec.carrier, g) for g in pts)


def audit_split(rec: ConeFamilyRecord, pieces) -> dict:
    """Check one subdivision step: lattice/slice property and exact tiling."""
    r = rec.r
    lattice_ok = all(
        all(isinstance(x, int) and x >= 0 for x in g) and sum(g) == r
        for p in pieces
        for g in p.generators
    )
    if rec.n <= 2:
        support_ok = geometry.tiles(
            rec.slice_points(), [p.slice_points() for p in pieces], rec.n
        )
    else:
        support_ok = None
    return {
        "carrier": list(rec.carrier),
        "lattice_ok": lattice_ok,
        "support_ok": support_ok,
    }


def initial_state(C: DualComplex, r: int) -> LocalFanState:
    if not isinstance(r, int) or r < 1:
        raise InputError(f"ramification index must be a positive integer, got {r!r}")
    cones = {}
    for f in C.facets:
        carrier = sorted_simplex(f)
        cones[carrier] = [sigma_family(carrier, r)]
    labels = {((v, r),): v for v in C.vertices}
    return LocalFanState(C, r, cones, labels)


def run_schedule(state: LocalFanState, schedule: Iterable[Any], *, audit: bool = False) -> LocalFanState:
    """Apply the schedule to a copy of ``state`` and return the copy."""
    out = state.copy()
    for entry in schedule:
        out.apply(entry, audit=audit)
    return out


def check_terminal(state: LocalFanState) -> TerminalReport:
    offending = []
    for carrier, rec in state.records():
        if not rec.is_regular:
            offending.append(
                {
                    "carrier": list(carrier),
                    "generators": [state.label_of(carrier, g) for g in rec.generators],
                }
            )
    return TerminalReport(not offending, offending)


MAX_STEPS = 100_000


def resolve_default(state: LocalFanState, *, audit: bool = False) -> tuple:
    """Greedy resolution. Returns ``(terminal_state, schedule)``."""
    s = state.copy()
    schedule = []
    for _ in range(MAX_STEPS):
        best = None
        pending = False
        for carrier, rec in s.records():
            if rec.is_regular:
                continue
            pending = True
            for g in rec.generators:
                lab = s.labels[point_key(carrier, g)]
                if best is not None and lab >= best:
                    continue
                if _split(rec, g)[1] == SPLIT:
                    best = lab
        if not pending:
            return s, schedule
        if best is None:
            raise NoProgress("no component properly subdivides any remaining non-regular cone")
        s.apply(best, audit=audit)
        schedule.append(best)
    raise NoProgress(f"greedy resolution did not finish within {MAX_STEPS} steps")


def default_schedule(state: LocalFanState) -> list:
    return resolve_default(state)[1]

"""Refinements psi: C~ -> C realised as unimodular triangulations of r * Delta^n."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Any, Iterable, Mapping

from .complex import DualComplex, adjacent_vertices, complex_from_json, sorted_simplex
from .errors import InputError, NotTerminal, UnknownSimplex, UnknownVertex, ValidationFailure
from .lattice import determinant
from .resolution import LocalFanState, check_terminal, point_key


@dataclass(frozen=True)
class RefinedVertex:
    id: str
    carrier: frozenset
    coords: tuple  # ((base vertex, count), ...) sorted, zeros dropped

    def c(self, v: str) -> int:
        for u, k in self.coords:
            if u == v:
                return k
        return 0

    @property
    def support(self) -> frozenset:
        return frozenset(u for u, _ in self.coords)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "carrier": sorted(self.carrier),
            "coords": {u: k for u, k in self.coords},
        }


@dataclass(frozen=True)
class RelativeWall:
    wall: frozenset
    flanking: tuple  # two refined facets of psi*(base), lexicographically ordered
    base: frozenset  # sigma with tau a wall of psi*(sigma)
    psi_tau: frozenset
    anchor: str
    opposite: tuple  # (v'_0, v'_{d+1})
    shared: tuple  # sorted ids of tau

    @property
    def key(self) -> tuple:
        return tuple(sorted(self.wall))


def _slice(v: RefinedVertex, sigma: tuple) -> tuple:
    return (1,) + tuple(v.c(u) for u in sigma[1:])


class Refinement:
    """Validated refinement of a base complex.

    Construct through :func:`import_triangulation` or :func:`from_state`;
    both run the full validation and raise :class:`ValidationFailure` with
    every violated invariant.
    """

    def __init__(self, base: DualComplex, r: int, vertices: Iterable[RefinedVertex], facets: Iterable[Iterable[str]]):
        self.base = base
        self.r = r
        self.vertices = {v.id: v for v in sorted(vertices, key=lambda x: x.id)}
        self.facets = tuple(sorted({frozenset(f) for f in facets}, key=sorted_simplex))
        problems = self._validate()
        if problems:
            raise ValidationFailure(problems)

    # ---- basic queries -------------------------------------------------

    def support(self, vid: str) -> frozenset:
        return self.vertices[vid].support

    def coord(self, vid: str, v: str) -> int:
        return self.vertices[vid].c(v)

    @cached_property
    def point_index(self) -> dict:
        return {v.coords: v.id for v in self.vertices.values()}

    def vertex_at(self, coords: Mapping[str, int]) -> str:
        key = tuple(sorted((str(u), int(k)) for u, k in coords.items() if int(k)))
        if key not in self.point_index:
            raise UnknownVertex(f"no refined vertex at {dict(key)!r}")
        return self.point_index[key]

    def vertex_of(self, v: str) -> str:
        """The unique refined vertex over the base vertex ``v``."""
        return self.vertex_at({v: self.r})

    @cached_property
    def _facets_of_vertex(self) -> dict:
        out: dict = {vid: [] for vid in self.vertices}
        for f in self.facets:
            for vid in f:
                out[vid].append(f)
        return out

    def is_simplex(self, s: Iterable[str]) -> bool:
        s = frozenset(s)
        if not s or not s <= self.vertices.keys():
            return False
        first = next(iter(s))
        return any(s <= f for f in self._facets_of_vertex[first])

    def psi(self, s: Iterable[str]) -> frozenset:
        s = frozenset(s)
        if not self.is_simplex(s):
            raise UnknownSimplex(f"{sorted(s)} is not a simplex of the refinement")
        out = frozenset().union(*(self.support(x) for x in s))
        return out

    @cached_property
    def neighbors(self) -> dict:
        out: dict = {vid: set() for vid in self.vertices}
        for f in self.facets:
            for a, b in combinations(f, 2):
                out[a].add(b)
                out[b].add(a)
        return {k: frozenset(v) for k, v in out.items()}

    def relative_adjacent(self, vid: str) -> frozenset:
        if vid not in self.vertices:
            raise UnknownVertex(f"{vid!r} is not a refined vertex")
        sup = self.support(vid)
        if len(sup) == 1:
            return adjacent_vertices(self.base, next(iter(sup)))
        return frozenset()

    def psi_star_cells(self, sigma: Iterable[str]) -> set:
        """Top-dimensional simplices of psi*(sigma)."""
        sigma = frozenset(sigma)
        d = len(sigma)
        out = set()
        for f in self.facets:
            inner = frozenset(x for x in f if self.support(x) <= sigma)
            if len(inner) == d:
                out.add(inner)
        return out

    def psi_star(self, sigma: Iterable[str]) -> set:
        """All simplices of the preimage of the closed simplex ``sigma``."""
        sigma = frozenset(sigma)
        out = set()
        for f in self.facets:
            inner = sorted(x for x in f if self.support(x) <= sigma)
            for k in range(1, len(inner) + 1):
                out.update(frozenset(c) for c in combinations(inner, k))
        return out

    @cached_property
    def edge_neighbor(self) -> dict:
        """For each ordered base edge ``(v, w)``: the refined vertex on it next to psi*(v)."""
        out = {}
        for e in self.base.edges:
            for v in e:
                (w,) = e - {v}
                pv = self.vertex_of(v)
                hits = [x for x in self.neighbors[pv] if self.support(x) <= e]
                out[(v, w)] = hits
        return out

    @cached_property
    def relative_walls(self) -> list:
        walls: dict = {}
        for f in self.base.simplices:
            if len(f) < 2:
                continue
            cells = self.psi_star_cells(f)
            faces: dict = {}
            for cell in cells:
                for x in cell:
                    faces.setdefault(cell - {x}, []).append(cell)
            for tau, flank in faces.items():
                if len(flank) != 2:
                    continue
                a, b = sorted(flank, key=sorted_simplex)
                (oa,) = a - tau
                (ob,) = b - tau
                psi_tau = frozenset().union(*(self.support(x) for x in tau))
                walls[tau] = RelativeWall(
                    wall=tau,
                    flanking=(a, b),
                    base=f,
                    psi_tau=psi_tau,
                    anchor=min(tau),
                    opposite=(oa, ob),
                    shared=tuple(sorted(tau)),
                )
        return sorted(walls.values(), key=lambda w: w.key)

    # ---- validation ----------------------------------------------------

    def _validate(self) -> list:
        C, r = self.base, self.r
        bad: list = []
        if not isinstance(r, int) or r < 1:
            return [f"ramification index must be a positive integer, got {r!r}"]
        seen_points: dict = {}
        for v in self.vertices.values():
            if not C.is_simplex(v.carrier):
                bad.append(f"vertex {v.id}: carrier {sorted(v.carrier)} is not a simplex of the base")
            for u, k in v.coords:
                if u not in C.vertices:
                    bad.append(f"vertex {v.id}: coordinate on unknown base vertex {u!r}")
                if not isinstance(k, int) or k < 0:
                    bad.append(f"vertex {v.id}: coordinate {k!r} is not a non-negative integer")
            if sum(k for _, k in v.coords) != r:
                bad.append(f"vertex {v.id}: coordinates sum to {sum(k for _, k in v.coords)}, not {r}")
            if not v.support <= v.carrier:
                bad.append(f"vertex {v.id}: coordinates not supported on its carrier")
            if v.coords in seen_points:
                bad.append(f"vertices {seen_points[v.coords]} and {v.id} sit at the same point")
            seen_points[v.coords] = v.id
        for u in C.vertices:
            if ((u, r),) not in seen_points:
                bad.append(f"no refined vertex over base vertex {u!r}")
        if bad:
            return bad

        used = set()
        cells_over: dict = {}
        for f in self.facets:
            unknown = f - self.vertices.keys()
            if unknown:
                bad.append(f"facet {sorted(f)} uses unknown vertices {sorted(unknown)}")
                continue
            used |= f
            sigma = frozenset().union(*(self.support(x) for x in f))
            if sigma not in C.facets:
                bad.append(f"facet {sorted(f)} does not lie over a maximal base simplex")
                continue
            if len(f) != len(sigma):
                bad.append(f"facet {sorted(f)} has {len(f)} vertices over a {len(sigma) - 1}-simplex")
                continue
            cells_over.setdefault(sigma, []).append(f)
        for vid in self.vertices:
            if vid not in used:
                bad.append(f"vertex {vid} lies in no facet")
        if bad:
            return bad

        for sigma in C.facets:
            st = sorted_simplex(sigma)
            n = len(st) - 1
            cells = cells_over.get(sigma, [])
            if len(cells) != r ** n:
                bad.append(f"over {list(st)}: {len(cells)} cells, expected {r ** n}")
            incid: dict = {}
            for cell in cells:
                ordered = sorted(cell)
                vecs = [_slice(self.vertices[x], st) for x in ordered]
                det = determinant(vecs)
                if abs(det) != 1:
                    bad.append(f"cell {ordered} over {list(st)} is not unimodular (det {det})")
                    continue
                for k, x in enumerate(ordered):
                    face = tuple(ordered[:k] + ordered[k + 1:])
                    sign = determinant([_slice(self.vertices[y], st) for y in face] + [vecs[k]])
                    incid.setdefault(face, []).append((x, sign))
            for face, inc in incid.items():
                on_boundary = any(all(self.coord(y, u) == 0 for y in face) for u in st)
                if on_boundary:
                    if len(inc) != 1:
                        bad.append(f"boundary face {list(face)} over {list(st)} lies in {len(inc)} cells")
                elif len(inc) != 2:
                    bad.append(f"interior face {list(face)} over {list(st)} lies in {len(inc)} cells")
                elif (inc[0][1] > 0) == (inc[1][1] > 0):
                    bad.append(f"cells on face {list(face)} over {list(st)} overlap")
        if bad:
            return bad

        for a, b in combinations(C.facets, 2):
            face = a & b
            if len(face) < 2:
                continue
            ca = {frozenset(x for x in f if self.support(x) <= face) for f in cells_over[a]}
            cb = {frozenset(x for x in f if self.support(x) <= face) for f in cells_over[b]}
            ca = {s for s in ca if len(s) == len(face)}
            cb = {s for s in cb if len(s) == len(face)}
            if ca != cb:
                bad.append(f"induced subdivisions of shared face {sorted(face)} disagree")
        if bad:
            return bad

        for (v, w), hits in self.edge_neighbor.items():
            if len(hits) != 1:
                bad.append(f"edge ({v},{w}): {len(hits)} refined neighbours of the vertex over {v}")
        return bad

    # ---- serialisation -------------------------------------------------

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "r": self.r,
            "vertices": [v.to_json() for v in self.vertices.values()],
            "facets": [sorted(f) for f in self.facets],
        }

    def coord_tuple(self, vid: str) -> tuple:
        """Coordinates in base-vertex order, as printed in the worked examples."""
        return tuple(self.coord(vid, u) for u in self.base.vertices)


def _vertex_from_json(item: Mapping[str, Any]) -> RefinedVertex:
    try:
        coords = tuple(sorted((str(u), k) for u, k in item["coords"].items() if k != 0))
        carrier = frozenset(str(u) for u in item.get("carrier", [u for u, _ in coords]))
        return RefinedVertex(str(item["id"]), carrier, coords)
    except (KeyError, AttributeError, TypeError) as exc:
        raise InputError(f"malformed refined vertex {item!r}: {exc}") from exc


def import_triangulation(C: DualComplex, r: int, vertices: Iterable[Any], facets: Iterable[Iterable[Any]]) -> Refinement:
    verts = [v if isinstance(v, RefinedVertex) else _vertex_from_json(v) for v in vertices]
    ids = [v.id for v in verts]
    if len(set(ids)) != len(ids):
        raise ValidationFailure(["duplicate refined vertex ids"])
    return Refinement(C, r, verts, [[str(x) for x in f] for f in facets])


def refinement_from_json(data: Mapping[str, Any]) -> Refinement:
    try:
        C = complex_from_json(data["base"])
        return import_triangulation(C, data["r"], data["vertices"], data["facets"])
    except KeyError as exc:
        raise InputError(f"refinement JSON is missing {exc}") from exc


def from_state(state: LocalFanState) -> Refinement:
    report = check_terminal(state)
    if not report.ok:
        raise NotTerminal(f"{len(report.offending)} cones are not regular yet")
    verts = [RefinedVertex(lab, frozenset(u for u, _ in key), key) for key, lab in state.labels.items()]
    facets = []
    for carrier, rec in state.records():
        facets.append([state.labels[point_key(carrier, g)] for g in rec.generators])
    return Refinement(state.base, state.r, verts, facets)


def psi(ref: Refinement, s: Iterable[str]) -> frozenset:
    return ref.psi(s)


def relative_walls(ref: Refinement) -> list:
    return ref.relative_walls


def relative_adjacent(ref: Refinement, vtilde: str) -> frozenset:
    return ref.relative_adjacent(vtilde)

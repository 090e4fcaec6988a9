"""Abstract simplicial complexes standing in for dual complexes of special fibres."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Iterable, Mapping

from .errors import EmptyFacet, InputError, UnknownVertex

Simplex = frozenset  # frozenset[str]


def sorted_simplex(s: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(s))


@dataclass(frozen=True)
class DualComplex:
    """Finite abstract simplicial complex with string vertex labels.

    Build instances with :func:`build_complex`; the constructor trusts its
    arguments. ``facets`` holds only maximal simplices, sorted canonically.
    """

    vertices: tuple[str, ...]
    facets: tuple[frozenset, ...]
    _simplices: frozenset = field(repr=False, compare=False)

    @property
    def simplices(self) -> frozenset:
        return self._simplices

    @cached_property
    def dim(self) -> int:
        return max(len(f) for f in self.facets) - 1

    def simplex_dim(self, s: Iterable[str]) -> int:
        return len(frozenset(s)) - 1

    def is_simplex(self, s: Iterable[str]) -> bool:
        return frozenset(s) in self._simplices

    def skeleton(self, k: int) -> list[frozenset]:
        """The ``k``-simplices, sorted."""
        out = [s for s in self._simplices if len(s) == k + 1]
        return sorted(out, key=sorted_simplex)

    @cached_property
    def edges(self) -> list[frozenset]:
        return self.skeleton(1)

    def facets_containing(self, s: Iterable[str]) -> list[frozenset]:
        s = frozenset(s)
        return [f for f in self.facets if s <= f]

    def to_json(self) -> dict[str, Any]:
        return {
            "vertices": list(self.vertices),
            "facets": [list(sorted_simplex(f)) for f in self.facets],
        }


def build_complex(vertices: Iterable[Any], facets: Iterable[Iterable[Any]]) -> DualComplex:
    """Close ``facets`` under faces and drop the non-maximal ones.

    Labels are coerced to ``str``. A vertex that no facet mentions becomes
    an isolated 0-simplex so that every vertex lies in some facet.
    """
    verts = sorted({str(v) for v in vertices})
    vset = set(verts)
    raw = []
    for f in facets:
        fs = frozenset(str(v) for v in f)
        if not fs:
            raise EmptyFacet("facets must be non-empty")
        unknown = fs - vset
        if unknown:
            raise UnknownVertex(f"facet {sorted(fs)} uses unknown vertices {sorted(unknown)}")
        raw.append(fs)
    covered = set().union(*raw) if raw else set()
    raw.extend(frozenset([v]) for v in verts if v not in covered)
    if not raw:
        raise EmptyFacet("a complex needs at least one facet")
    uniq = set(raw)
    maximal = [f for f in uniq if not any(f < g for g in uniq)]
    maximal.sort(key=lambda f: (len(f), sorted_simplex(f)))
    simplices = set()
    for f in maximal:
        items = sorted_simplex(f)
        for k in range(1, len(items) + 1):
            simplices.update(frozenset(c) for c in combinations(items, k))
    return DualComplex(tuple(verts), tuple(maximal), frozenset(simplices))


def complex_from_json(data: Mapping[str, Any]) -> DualComplex:
    try:
        return build_complex(data["vertices"], data["facets"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"complex JSON needs 'vertices' and 'facets' lists: {exc}") from exc


def adjacent_vertices(C: DualComplex, v: Any) -> frozenset:
    """Vertices sharing an edge with ``v``."""
    v = str(v)
    if v not in C.vertices:
        raise UnknownVertex(f"{v!r} is not a vertex of the complex")
    return frozenset(w for e in C.edges if v in e for w in e if w != v)


def walls(C: DualComplex) -> frozenset:
    """Codimension-one faces shared by two top-dimensional simplices."""
    n = C.dim
    top = [f for f in C.facets if len(f) == n + 1]
    out = set()
    for a, b in combinations(top, 2):
        s = a & b
        if len(s) == n and n >= 1:
            out.add(s)
    return frozenset(out)

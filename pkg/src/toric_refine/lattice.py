"""Exact integer linear algebra on small lattices.

Vectors are plain tuples of Python ints. Nothing here touches floats; the
two workhorses are a fraction-free determinant and a unimodular column
reduction that yields ranks, lattice indices and integer kernels at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    AmbiguousRelation,
    NoRelation,
    NormalizationFailure,
    NotSimplicial,
    ZeroVector,
)

Vector = tuple[int, ...]


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vector:
    """Divide ``v`` by the gcd of its entries.

    >>> primitive((2, -4, 6))
    (1, -2, 3)
    """
    g = content(v)
    if g == 0:
        raise ZeroVector(f"zero vector {tuple(v)!r} has no primitive generator")
    return tuple(x // g for x in v)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def combine(coeffs: Sequence[int], vectors: Sequence[Sequence[int]]) -> Vector:
    """Integer linear combination ``sum(coeffs[i] * vectors[i])``."""
    if not vectors:
        return ()
    out = [0] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        if c:
            for k, x in enumerate(v):
                out[k] += c * x
    return tuple(out)


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    if any(len(r) != n for r in m):
        raise ValueError("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class _ColumnForm:
    reduced: list[list[int]]
    transform: list[list[int]]  # columns of the unimodular change of basis
    pivots: list[int]  # pivot value for each row that gained one, in row order
    rank: int


def _column_reduce(rows: Sequence[Sequence[int]], ncols: int) -> _ColumnForm:
    """Lower-echelon form of ``rows`` under unimodular column operations.

    Returns ``A U = H`` with ``H`` in column echelon form. Columns of ``U``
    beyond the rank form a basis of the integer kernel of ``A`` (as a map on
    column vectors), and the absolute pivots multiply to the index of the
    row lattice inside its saturation.
    """
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # u[i][j]: row i, column j

    def swap(c1: int, c2: int) -> None:
        if c1 == c2:
            return
        for row in a:
            row[c1], row[c2] = row[c2], row[c1]
        for row in u:
            row[c1], row[c2] = row[c2], row[c1]

    def axpy(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src
        for row in a:
            row[dst] -= q * row[src]
        for row in u:
            row[dst] -= q * row[src]

    p = 0
    pivots: list[int] = []
    for i in range(len(a)):
        if p == ncols:
            break
        row = a[i]
        while True:
            nz = [j for j in range(p, ncols) if row[j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(row[j]))
            swap(p, j0)
            if len(nz) == 1:
                break
            for j in range(p + 1, ncols):
                if row[j]:
                    axpy(j, p, row[j] // row[p])
        if row[p]:
            pivots.append(row[p])
            p += 1
    return _ColumnForm(a, u, pivots, p)


def rank(rows: Sequence[Sequence[int]]) -> int:
    rows = [r for r in rows]
    if not rows:
        return 0
    return _column_reduce(rows, len(rows[0])).rank


def cone_multiplicity(generators: Sequence[Sequence[int]]) -> int:
    """Index of the span of ``generators`` in the lattice points of its linear hull.

    >>> cone_multiplicity([(1, 0), (1, 4)])
    4
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        return 1
    form = _column_reduce(gens, len(gens[0]))
    if form.rank != len(gens):
        raise NotSimplicial(f"generators {gens!r} are linearly dependent")
    index = 1
    for x in form.pivots:
        index *= abs(x)
    return index


def is_regular(generators: Sequence[Sequence[int]]) -> bool:
    """True iff the generators are independent and extend to a lattice basis."""
    try:
        return cone_multiplicity(generators) == 1
    except NotSimplicial:
        return False


def integer_kernel(vectors: Sequence[Sequence[int]]) -> list[Vector]:
    """Lattice basis of ``{b : sum b_i vectors[i] = 0}``, each vector primitive."""
    vecs = [tuple(v) for v in vectors]
    k = len(vecs)
    if k == 0:
        return []
    m = len(vecs[0])
    cols = [[vecs[j][i] for j in range(k)] for i in range(m)]
    form = _column_reduce(cols, k)
    basis = []
    for j in range(form.rank, k):
        basis.append(primitive(tuple(form.transform[i][j] for i in range(k))))
    return basis


@dataclass(frozen=True)
class WallRelation:
    coefficients: Vector

    def __iter__(self):
        return iter(self.coefficients)

    def __getitem__(self, i: int) -> int:
        return self.coefficients[i]

    def __len__(self) -> int:
        return len(self.coefficients)


def wall_relation(rays: Sequence[Sequence[int]], shared: Iterable[int]) -> WallRelation:
    """Primitive dependence among the rays of two cones meeting in a wall.

    ``shared`` indexes the rays on the wall itself; the other two rays are
    the ones opposite the wall and receive coefficient +1.

    >>> wall_relation([(1, 3), (1, 2), (1, 1)], [1]).coefficients
    (1, -2, 1)
    """
    rays = [tuple(x) for x in rays]
    shared = set(shared)
    ends = [i for i in range(len(rays)) if i not in shared]
    if len(ends) != 2:
        raise ValueError(f"expected exactly two non-shared rays, got {len(ends)}")
    kernel = integer_kernel(rays)
    if not kernel:
        raise NoRelation(f"rays {rays!r} are linearly independent")
    if len(kernel) > 1:
        raise AmbiguousRelation(f"rays {rays!r} have a {len(kernel)}-dimensional relation space")
    b = kernel[0]
    if b[ends[0]] < 0:
        b = tuple(-x for x in b)
    if b[ends[0]] != 1 or b[ends[1]] != 1:
        raise NormalizationFailure(
            f"relation {b!r} cannot be scaled to +1 on both rays opposite the wall"
        )
    assert not any(combine(b, rays)), "kernel vector does not annihilate the rays"
    return WallRelation(b)

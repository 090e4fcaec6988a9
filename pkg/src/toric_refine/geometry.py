"""Exact polytope bookkeeping on the slice, for slice dimension at most 2.

Used to audit blow-up steps: pieces must tile the cone they replace. Points
are integer tuples of slice coordinates (the dropped-first-barycentric form).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Point = tuple


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points: Sequence[Point]) -> list[Point]:
    """Counter-clockwise convex hull (monotone chain), collinear points dropped."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def area2(poly: Sequence[Point]):
    """Twice the signed area of a polygon given in order."""
    s = 0
    for i in range(len(poly)):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % len(poly)]
        s += x1 * y2 - x2 * y1
    return s


def clip(subject: Sequence[Point], clipper: Sequence[Point]) -> list[Point]:
    """Sutherland-Hodgman intersection of two convex CCW polygons, exact."""
    out = [tuple(Fraction(x) for x in p) for p in subject]
    m = len(clipper)
    for i in range(m):
        a, b = clipper[i], clipper[(i + 1) % m]
        src, out = out, []
        if not src:
            break
        for j in range(len(src)):
            p, q = src[j], src[(j + 1) % len(src)]
            sp, sq = _cross(a, b, p), _cross(a, b, q)
            if sp >= 0:
                out.append(p)
            if (sp > 0 > sq) or (sp < 0 < sq):
                t = Fraction(sp) / (sp - sq)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def volume(points: Sequence[Point], dim: int):
    """Normalized volume (dim! times Euclidean) of the convex hull."""
    if dim == 0:
        return 1
    if dim == 1:
        xs = [p[0] for p in points]
        return max(xs) - min(xs)
    if dim == 2:
        return area2(hull_2d(points))
    raise NotImplementedError("slice audits support dimension <= 2")


def contains(points: Sequence[Point], q: Point, dim: int) -> bool:
    if dim == 0:
        return True
    if dim == 1:
        xs = [p[0] for p in points]
        return min(xs) <= q[0] <= max(xs)
    hull = hull_2d(points)
    if len(hull) < 3:
        return False
    return all(_cross(hull[i], hull[(i + 1) % len(hull)], q) >= 0 for i in range(len(hull)))


def overlap(a: Sequence[Point], b: Sequence[Point], dim: int):
    """Normalized volume of the intersection of two convex hulls."""
    if dim == 0:
        return 1
    if dim == 1:
        lo = max(min(p[0] for p in a), min(p[0] for p in b))
        hi = min(max(p[0] for p in a), max(p[0] for p in b))
        return max(0, hi - lo)
    if dim == 2:
        inter = clip(hull_2d(a), hull_2d(b))
        return abs(area2(inter)) if len(inter) >= 3 else 0
    raise NotImplementedError("slice audits support dimension <= 2")


def tiles(whole: Sequence[Point], pieces: Sequence[Sequence[Point]], dim: int) -> bool:
    """True iff ``pieces`` cover ``whole`` with pairwise disjoint interiors."""
    if dim > 2:
        raise NotImplementedError("slice audits support dimension <= 2")
    if dim == 0:
        return len(pieces) == 1
    for piece in pieces:
        if not all(contains(whole, q, dim) for q in piece):
            return False
    if sum(volume(p, dim) for p in pieces) != volume(whole, dim):
        return False
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            if overlap(pieces[i], pieces[j], dim) != 0:
                return False
    return True

"""Formal cycle bookkeeping for the obstruction maps.

Cycle classes are opaque generators of a free abelian group. The only
relations used are the ones the key formula needs: restrictions commute
with proper pushforward, pulled-back one-cycles push forward to zero, and
zero-cycle classes push forward with degree one.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from .complex import DualComplex, adjacent_vertices
from .errors import IllegalAmbient, UnknownVertex
from .obstruction import ObstructionTables
from .refinement import Refinement

REFINED, PUSHED = "refined", "pushed"


@dataclass(frozen=True)
class RestrictedOneCycle:
    """gamma_owner restricted to the double intersection over ``edge``."""

    owner: str
    edge: tuple
    level: str = REFINED

    def __post_init__(self):
        if self.owner not in self.edge or len(self.edge) != 2:
            raise ValueError(f"owner {self.owner!r} must be an endpoint of edge {self.edge!r}")
        object.__setattr__(self, "edge", tuple(sorted(self.edge)))

    @property
    def sort_key(self):
        return (0, self.owner, self.edge)

    def to_json(self):
        return {"kind": "gamma", "owner": self.owner, "edge": list(self.edge), "level": self.level}


@dataclass(frozen=True)
class WallClass:
    """The zero-cycle class attached to a relative wall."""

    wall: tuple
    level: str = REFINED

    def __post_init__(self):
        object.__setattr__(self, "wall", tuple(sorted(self.wall)))

    @property
    def sort_key(self):
        return (1, "", self.wall)

    def to_json(self):
        return {"kind": "wall", "wall": list(self.wall), "level": self.level}


class CycleExpression:
    """Integer combination of generators living on one component."""

    __slots__ = ("ambient", "level", "_terms")

    def __init__(self, ambient: str, level: str, terms: Optional[Mapping] = None):
        self.ambient = ambient
        self.level = level
        self._terms = {g: c for g, c in (terms or {}).items() if c}

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda gc: gc[0].sort_key)

    def coefficient(self, gen) -> int:
        return self._terms.get(gen, 0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "CycleExpression"):
        if (self.ambient, self.level) != (other.ambient, other.level):
            raise ValueError(
                f"cannot add classes on {self.level}:{self.ambient} and {other.level}:{other.ambient}"
            )

    def __add__(self, other: "CycleExpression") -> "CycleExpression":
        self._check(other)
        out = Counter(self._terms)
        out.update(other._terms)
        return CycleExpression(self.ambient, self.level, out)

    def __neg__(self) -> "CycleExpression":
        return CycleExpression(self.ambient, self.level, {g: -c for g, c in self._terms.items()})

    def __sub__(self, other: "CycleExpression") -> "CycleExpression":
        return self + (-other)

    def __mul__(self, k: int) -> "CycleExpression":
        if not isinstance(k, int):
            return NotImplemented
        return CycleExpression(self.ambient, self.level, {g: k * c for g, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycleExpression):
            return NotImplemented
        return (self.ambient, self.level, self._terms) == (other.ambient, other.level, other._terms)

    __hash__ = None

    def wall_part(self) -> "CycleExpression":
        return CycleExpression(
            self.ambient, self.level, {g: c for g, c in self._terms.items() if isinstance(g, WallClass)}
        )

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "level": self.level,
            "terms": [dict(g.to_json(), coef=c) for g, c in self.items()],
        }

    def __repr__(self) -> str:
        return f"CycleExpression({self.level}:{self.ambient}, {dict(self.items())!r})"


@dataclass(frozen=True)
class SymbolicOneCycle:
    gamma: frozenset
    alpha: Mapping = field(default_factory=dict)  # wall key -> multiplicity
    level: str = REFINED

    @classmethod
    def generic(cls, ref: Refinement) -> "SymbolicOneCycle":
        return cls(frozenset(ref.base.vertices), {w.key: 1 for w in ref.relative_walls})

    def pushed(self) -> "SymbolicOneCycle":
        # q_* kills every pulled-back wall class
        return SymbolicOneCycle(self.gamma, {}, PUSHED)


def phi_base(C: DualComplex, cycle: SymbolicOneCycle, v: str) -> CycleExpression:
    v = str(v)
    terms: Counter = Counter()
    for w in adjacent_vertices(C, v):
        e = (v, w)
        if w in cycle.gamma:
            terms[RestrictedOneCycle(w, e, PUSHED)] += 1
        if v in cycle.gamma:
            terms[RestrictedOneCycle(v, e, PUSHED)] -= 1
    return CycleExpression(v, PUSHED, terms)


def phi_refined(ref: Refinement, tables: ObstructionTables, cycle: SymbolicOneCycle, vtilde: str) -> CycleExpression:
    if vtilde not in ref.vertices:
        raise UnknownVertex(f"{vtilde!r} is not a refined vertex")
    terms: Counter = Counter()
    sup = ref.support(vtilde)
    if len(sup) == 1:
        (u,) = sup
        if u in cycle.gamma:
            for v in ref.relative_adjacent(vtilde):
                terms[RestrictedOneCycle(u, (u, v))] -= 1
    for (v, w), hits in ref.edge_neighbor.items():
        if hits[0] == vtilde and v in cycle.gamma:
            terms[RestrictedOneCycle(v, (v, w))] += 1
    for key, b in tables.by_vertex.get(vtilde, ()):
        m = cycle.alpha.get(key, 0)
        if m:
            terms[WallClass(key)] += m * b
    return CycleExpression(vtilde, REFINED, terms)


def pushforward(expr: CycleExpression, target: str, ref: Refinement) -> CycleExpression:
    """Push a refined-level class on ``expr.ambient`` into the base component ``target``."""
    if expr.level != REFINED:
        raise ValueError("only refined-level classes can be pushed forward")
    if ref.coord(expr.ambient, target) == 0:
        raise IllegalAmbient(
            f"component {expr.ambient} does not map into component {target} (distance {ref.r})"
        )
    return CycleExpression(target, PUSHED, {replace(g, level=PUSHED): c for g, c in expr._terms.items()})


@dataclass
class KeyFormulaReport:
    entries: list

    @property
    def passed(self) -> bool:
        return all(e["passed"] for e in self.entries)

    def entry(self, v: str) -> dict:
        for e in self.entries:
            if e["vertex"] == v:
                return e
        raise KeyError(v)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "vertices": [
                {
                    "vertex": e["vertex"],
                    "passed": e["passed"],
                    "lhs": e["lhs"].to_json(),
                    "rhs": e["rhs"].to_json(),
                    "residual": e["residual"].to_json(),
                }
                for e in self.entries
            ],
        }


def verify_key_formula(
    ref: Refinement, tables: ObstructionTables, cycle: Optional[SymbolicOneCycle] = None
) -> KeyFormulaReport:
    cycle = cycle or SymbolicOneCycle.generic(ref)
    phis = {x: phi_refined(ref, tables, cycle, x) for x in ref.vertices}
    lower = cycle.pushed()
    entries = []
    for v in ref.base.vertices:
        lhs = phi_base(ref.base, lower, v)
        rhs = CycleExpression(v, PUSHED)
        for x, phi in phis.items():
            weight = tables.r - tables.d[(x, v)]
            if weight:
                rhs = rhs + weight * pushforward(phi, v, ref)
        residual = rhs.wall_part()
        entries.append(
            {"vertex": v, "lhs": lhs, "rhs": rhs, "residual": residual,
             "passed": residual.is_zero and rhs == lhs}
        )
    return KeyFormulaReport(entries)


# ---- rendering -----------------------------------------------------------

def _coord_str(ref: Refinement, vid: str) -> str:
    return "(" + ",".join(str(k) for k in ref.coord_tuple(vid)) + ")"


def render_generator(g, ref: Optional[Refinement] = None) -> str:
    short = all(len(x) == 1 for x in (g.edge if isinstance(g, RestrictedOneCycle) else ()))
    if isinstance(g, RestrictedOneCycle):
        e = "".join(g.edge) if short else ",".join(g.edge)
        body = f"γ{g.owner}|{e}" if short else f"γ[{g.owner}]|{{{e}}}"
        return f"(q*{body})" if g.level == PUSHED else body
    if ref is not None:
        psi_tau = frozenset().union(*(ref.support(x) for x in g.wall))
        primes = "′" * max(0, len(psi_tau) - 2)
        inner = "-".join(_coord_str(ref, x) for x in g.wall)
    else:
        primes, inner = "", "-".join(g.wall)
    body = f"α{primes}[{inner}]"
    return f"q*{body}" if g.level == PUSHED else body


def render(expr: CycleExpression, ref: Optional[Refinement] = None) -> str:
    if expr.is_zero:
        return "0"
    parts = []
    for g, c in expr.items():
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sign} {mag}{render_generator(g, ref)}")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]

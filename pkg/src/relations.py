"""Defining relations of the quantized coordinate and differential operator algebras.

Relations are produced in matrix form with :func:`leg_chain` and expanded
immediately into scalar components. Leg 1 always carries the later edge
``f`` and leg 2 the earlier edge ``e`` of a pair, and differential
generators ``d(e)`` behave exactly like coordinate generators of the
reversed edge.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Sequence

from .freealg import (
    AlgMatrix,
    GenId,
    GenKind,
    NCPoly,
    build_r_matrix,
    generator_matrix,
    generator_rank,
    leg_chain,
    omega,
    r_inverse,
)
from .linalg import SparseEchelon
from .quiver import Edge, Quiver

logger = logging.getLogger(__name__)


class UnsupportedError(ValueError):
    """A documented refusal: the requested construction is out of scope."""


class IncidenceError(ValueError):
    """An edge pair outside the incidence table."""


class AlgebraKind(str, Enum):
    OQ = "Oq"
    DQ = "Dq"


class Incidence(str, Enum):
    """Rows of the distinct-edge table for e < f (leg 1 = f, leg 2 = e)."""

    DISJOINT = "disjoint"
    PARALLEL = "parallel"
    ANTIPARALLEL = "antiparallel"
    HEAD_TO_TAIL = "e->v->f"
    TAIL_TO_HEAD = "e<-v<-f"
    HEADS = "e->v<-f"
    TAILS = "e<-v->f"
    INTO_LOOP_F = "e->v, f loop"
    OUT_OF_LOOP_F = "e<-v, f loop"
    INTO_LOOP_E = "f->v, e loop"
    OUT_OF_LOOP_E = "f<-v, e loop"
    TWO_LOOPS = "e, f loops"


@dataclass(frozen=True)
class InverseSpec:
    element: NCPoly
    symbol: GenId

    def unit_relations(self) -> list[NCPoly]:
        inv = NCPoly.gen(self.symbol)
        return [self.element * inv - NCPoly.one(), inv * self.element - NCPoly.one()]


@dataclass(frozen=True)
class Presentation:
    """Generators and defining relations of an algebra over Q(q).

    ``labels[i]`` names the group relation ``relations[i]`` came from.
    Unit relations of adjoined inverses are kept apart in ``inverses``.
    """

    quiver: Quiver
    kind: AlgebraKind
    generators: tuple[GenId, ...]
    relations: tuple[NCPoly, ...]
    labels: tuple[str, ...] = ()
    inverses: tuple[InverseSpec, ...] = ()
    _rank: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_rank", generator_rank(self.generators))

    @property
    def rank(self) -> dict[GenId, int]:
        return self._rank

    def unit_relations(self) -> list[NCPoly]:
        return [r for spec in self.inverses for r in spec.unit_relations()]

    def all_relations(self) -> list[NCPoly]:
        return list(self.relations) + self.unit_relations()

    def inverse_symbol(self, tag: str) -> GenId:
        for spec in self.inverses:
            if spec.symbol.tag == tag:
                return spec.symbol
        raise KeyError(f"no inverse tagged {tag!r}")

    def specialize(self, q0) -> Presentation:
        """Relations evaluated at q = q0. Relations that vanish there are dropped."""
        if self.inverses:
            raise UnsupportedError("cannot specialize a localized presentation")
        labels = self.labels or ("",) * len(self.relations)
        kept = [(r.specialize(q0), label) for r, label in zip(self.relations, labels)]
        kept = [(r, label) for r, label in kept if not r.is_zero()]
        return replace(
            self,
            relations=tuple(r for r, _ in kept),
            labels=tuple(label for _, label in kept) if self.labels else (),
        )

    def max_relation_degree(self) -> int:
        return max((r.degree() for r in self.all_relations()), default=0)

    def groups(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for label in self.labels:
            counts[label] = counts.get(label, 0) + 1
        return counts


# ---------------------------------------------------------------------------
# Matrix building blocks
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def r_alg(n: int) -> AlgMatrix:
    return build_r_matrix(n).as_alg()


@lru_cache(maxsize=None)
def r_inv_alg(n: int) -> AlgMatrix:
    return r_inverse(build_r_matrix(n)).as_alg()


def _edge(q: Quiver, e: str | Edge) -> Edge:
    return e if isinstance(e, Edge) else q.edge(e)


def a_matrix(q: Quiver, e: Edge) -> AlgMatrix:
    return generator_matrix(e.id, GenKind.A, q.dim(e.src), q.dim(e.tgt))


def d_matrix(q: Quiver, e: Edge) -> AlgMatrix:
    return generator_matrix(e.id, GenKind.D, q.dim(e.tgt), q.dim(e.src))


def _components(m: AlgMatrix) -> list[NCPoly]:
    return [value for _, _, value in m.components()]


def _rows_at(poly: NCPoly, q0) -> dict:
    return {w: c.evaluate(q0) for w, c in poly.items() if c.evaluate(q0)}


def independent_components(components: Sequence[NCPoly]) -> list[NCPoly]:
    """Greedy independent subset, preferring components independent at q=1.

    The result spans the same space as ``components`` over Q(q) and keeps
    the original order.
    """
    at_one = SparseEchelon()
    generic = SparseEchelon()
    chosen: set[int] = set()
    for i, poly in enumerate(components):
        row = _rows_at(poly, 1)
        if row and at_one.add(row):
            generic.add(dict(poly.items()))
            chosen.add(i)
    for i, poly in enumerate(components):
        if i not in chosen and poly and generic.add(dict(poly.items())):
            chosen.add(i)
    return [components[i] for i in sorted(chosen)]


# ---------------------------------------------------------------------------
# Same-edge relations
# ---------------------------------------------------------------------------


def _same_edge_matrix(q: Quiver, e: Edge, x: AlgMatrix) -> AlgMatrix:
    """Coordinate-type relation for x living on the (effective) edge e."""
    v, w = q.dim(e.src), q.dim(e.tgt)
    if e.is_loop:
        lhs = leg_chain([(r_alg(v), (2, 1)), (x, (1,)), (r_alg(v), (1, 2)), (x, (2,))])
        rhs = leg_chain([(x, (2,)), (r_alg(v), (2, 1)), (x, (1,)), (r_alg(v), (1, 2))])
    else:
        lhs = leg_chain([(r_alg(v), (1, 2)), (x, (2,)), (x, (1,))])
        rhs = leg_chain([(x, (1,)), (x, (2,)), (r_alg(w), (2, 1))])
    return lhs - rhs


def oq_edge_relations(q: Quiver, e: str | Edge) -> list[NCPoly]:
    """Relations among the a(e)^i_j of one edge."""
    e = _edge(q, e)
    return independent_components(_components(_same_edge_matrix(q, e, a_matrix(q, e))))


def _reversed(e: Edge) -> Edge:
    return Edge(e.id, e.tgt, e.src)


def weyl_cross_matrix(q: Quiver, e: Edge) -> AlgMatrix:
    """Cross relation between a(e) and d(e) in matrix form."""
    a, d = a_matrix(q, e), d_matrix(q, e)
    v = q.dim(e.src)
    if e.is_loop:
        lhs = leg_chain([(r_alg(v), (2, 1)), (d, (1,)), (r_alg(v), (1, 2)), (a, (2,))])
        rhs = leg_chain([(a, (2,)), (r_alg(v), (2, 1)), (d, (1,)), (r_inv_alg(v), (2, 1))])
        return lhs - rhs
    w = q.dim(e.tgt)
    lhs = leg_chain([(d, (2,)), (r_inv_alg(v), (1, 2)), (a, (1,))])
    rhs = leg_chain([(a, (1,)), (r_alg(w), (1, 2)), (d, (2,))])
    return lhs - rhs - omega(v, w)


def dq_edge_relations(q: Quiver, e: str | Edge) -> list[NCPoly]:
    """a-a, d-d and a-d relations of one edge, in that order."""
    e = _edge(q, e)
    aa = independent_components(_components(_same_edge_matrix(q, e, a_matrix(q, e))))
    dd = independent_components(_components(_same_edge_matrix(q, _reversed(e), d_matrix(q, e))))
    ad = independent_components(_components(weyl_cross_matrix(q, e)))
    return aa + dd + ad


# ---------------------------------------------------------------------------
# Distinct-edge relations
# ---------------------------------------------------------------------------


def classify_incidence(e: Edge, f: Edge) -> tuple[Incidence, str | None]:
    """Table row and shared vertex for effective edges e < f."""
    if e.id == f.id and (e.src, e.tgt) == (f.src, f.tgt):
        raise IncidenceError(f"edge {e.id!r} paired with itself")
    shared = {e.src, e.tgt} & {f.src, f.tgt}
    if not shared:
        return Incidence.DISJOINT, None
    if e.is_loop and f.is_loop:
        return Incidence.TWO_LOOPS, e.src
    if f.is_loop:
        v = f.src
        if e.tgt == v:
            return Incidence.INTO_LOOP_F, v
        return Incidence.OUT_OF_LOOP_F, v
    if e.is_loop:
        v = e.src
        if f.tgt == v:
            return Incidence.INTO_LOOP_E, v
        return Incidence.OUT_OF_LOOP_E, v
    if e.src == f.src and e.tgt == f.tgt:
        return Incidence.PARALLEL, None
    if e.src == f.tgt and e.tgt == f.src:
        return Incidence.ANTIPARALLEL, None
    if e.tgt == f.src:
        return Incidence.HEAD_TO_TAIL, e.tgt
    if e.src == f.tgt:
        return Incidence.TAIL_TO_HEAD, e.src
    if e.tgt == f.tgt:
        return Incidence.HEADS, e.tgt
    if e.src == f.src:
        return Incidence.TAILS, e.src
    raise IncidenceError(f"unsupported incidence between {e.id!r} and {f.id!r}")  # pragma: no cover


def incidence_matrix(q: Quiver, e: Edge, xe: AlgMatrix, f: Edge, xf: AlgMatrix) -> AlgMatrix:
    """LHS - RHS of the table row for the pair (e, f), e < f."""
    row, v = classify_incidence(e, f)
    F, E = (xf, (1,)), (xe, (2,))

    def R(vertex: str):
        return (r_alg(q.dim(vertex)), (1, 2))

    def Rinv(vertex: str):
        return (r_inv_alg(q.dim(vertex)), (1, 2))

    if row is Incidence.DISJOINT:
        lhs, rhs = [F, E], [E, F]
    elif row is Incidence.PARALLEL:
        lhs, rhs = [F, E], [R(e.src), E, F, R(e.tgt)]
    elif row is Incidence.ANTIPARALLEL:
        lhs, rhs = [F, R(e.src), E], [E, Rinv(e.tgt), F]
    elif row is Incidence.HEAD_TO_TAIL:
        lhs, rhs = [F, E], [E, Rinv(v), F]
    elif row is Incidence.TAIL_TO_HEAD:
        lhs, rhs = [F, R(v), E], [E, F]
    elif row is Incidence.HEADS:
        lhs, rhs = [F, E], [E, F, R(v)]
    elif row is Incidence.TAILS:
        lhs, rhs = [F, E], [R(v), E, F]
    elif row is Incidence.INTO_LOOP_F:
        lhs, rhs = [F, E], [E, Rinv(v), F, R(v)]
    elif row is Incidence.OUT_OF_LOOP_F:
        lhs, rhs = [F, R(v), E], [R(v), E, F]
    elif row is Incidence.INTO_LOOP_E:
        lhs, rhs = [F, R(v), E], [E, F, R(v)]
    elif row is Incidence.OUT_OF_LOOP_E:
        lhs, rhs = [F, E], [R(v), E, Rinv(v), F]
    else:
        lhs, rhs = [F, R(v), E, Rinv(v)], [R(v), E, Rinv(v), F]
    return leg_chain(lhs) - leg_chain(rhs)


def _kind_pairs(q: Quiver, e: Edge, f: Edge, kind: AlgebraKind):
    """(effective e, matrix, effective f, matrix) for every generator-kind pair."""
    sides_e = [(e, a_matrix(q, e))]
    sides_f = [(f, a_matrix(q, f))]
    if kind is AlgebraKind.DQ:
        sides_e.append((_reversed(e), d_matrix(q, e)))
        sides_f.append((_reversed(f), d_matrix(q, f)))
    for ee, xe in sides_e:
        for ff, xf in sides_f:
            yield ee, xe, ff, xf


def cross_edge_relations(
    q: Quiver, e: str | Edge, f: str | Edge, kind: AlgebraKind = AlgebraKind.OQ
) -> list[NCPoly]:
    """Relations between generators of distinct edges e < f.

    For ``Dq`` all four pairs (a(e), a(f)), (a(e), d(f)), (d(e), a(f)) and
    (d(e), d(f)) are produced, with d treated as a on the reversed edge.
    """
    e, f = _edge(q, e), _edge(q, f)
    if q.edge_index(e.id) >= q.edge_index(f.id):
        raise IncidenceError(f"expected {e.id!r} < {f.id!r} in edge order")
    out: list[NCPoly] = []
    for ee, xe, ff, xf in _kind_pairs(q, e, f, kind):
        out.extend(independent_components(_components(incidence_matrix(q, ee, xe, ff, xf))))
    return out


# ---------------------------------------------------------------------------
# Whole presentations
# ---------------------------------------------------------------------------


def presentation_generators(q: Quiver, kind: AlgebraKind) -> list[GenId]:
    """All a-generators in edge order, then all d-generators."""
    gens = [
        GenId.a(e.id, i, j)
        for e in q.edges
        for i in range(1, q.dim(e.src) + 1)
        for j in range(1, q.dim(e.tgt) + 1)
    ]
    if kind is AlgebraKind.DQ:
        gens += [
            GenId.d(e.id, k, l)
            for e in q.edges
            for k in range(1, q.dim(e.tgt) + 1)
            for l in range(1, q.dim(e.src) + 1)
        ]
    return gens


def full_presentation(q: Quiver, kind: AlgebraKind | str = AlgebraKind.OQ) -> Presentation:
    """Every edge relation plus cross relations for every pair e < f."""
    kind = AlgebraKind(kind)
    relations: list[NCPoly] = []
    labels: list[str] = []

    def push(label: str, polys: list[NCPoly]):
        relations.extend(polys)
        labels.extend([label] * len(polys))

    for e in q.edges:
        a = a_matrix(q, e)
        push(f"a-a {e.id}", independent_components(_components(_same_edge_matrix(q, e, a))))
        if kind is AlgebraKind.DQ:
            d = d_matrix(q, e)
            push(f"d-d {e.id}", independent_components(_components(_same_edge_matrix(q, _reversed(e), d))))
            push(f"a-d {e.id}", independent_components(_components(weyl_cross_matrix(q, e))))
    for i, e in enumerate(q.edges):
        for f in q.edges[i + 1:]:
            push(f"cross {e.id},{f.id}", cross_edge_relations(q, e, f, kind))
    logger.debug("%s presentation: %d relations", kind.value, len(relations))
    return Presentation(q, kind, tuple(presentation_generators(q, kind)), tuple(relations), tuple(labels))


def _scalar_target(target: NCPoly | AlgMatrix) -> NCPoly:
    if isinstance(target, NCPoly):
        return target
    if target.rows != 1 or target.cols != 1:
        raise UnsupportedError(f"matrix inverses are not supported, target is {target.rows}x{target.cols}")
    return target.entry(tuple(1 for _ in target.row_dims), tuple(1 for _ in target.col_dims))


def adjoin_inverses(
    p: Presentation, targets: Sequence[NCPoly | AlgMatrix], tags: Sequence[str] | None = None
) -> Presentation:
    """Adjoin a formal two-sided inverse for each scalar target element.

    Each target contributes ``target*inv - 1`` and ``inv*target - 1``. A
    1x1 matrix target stands for its single entry.

    Raises:
        UnsupportedError: For a zero target, a matrix target larger than
            1x1, or a target of degree above 2.
    """
    tags = list(tags) if tags is not None else [f"g{len(p.inverses) + i + 1}" for i in range(len(targets))]
    if len(tags) != len(targets):
        raise ValueError("one tag per target is required")
    existing = {spec.symbol.tag for spec in p.inverses}
    specs = list(p.inverses)
    for target, tag in zip(map(_scalar_target, targets), tags):
        if target.is_zero():
            raise UnsupportedError("cannot invert zero")
        if target.degree() > 2:
            raise UnsupportedError(f"inverse of a degree {target.degree()} element is not supported")
        if tag in existing:
            raise ValueError(f"inverse tag {tag!r} already used")
        existing.add(tag)
        specs.append(InverseSpec(target, GenId.inv(tag)))
    base = [g for g in p.generators if g.kind is not GenKind.INV]
    inverse_gens = sorted((s.symbol for s in specs), key=lambda g: g.tag)
    return Presentation(
        p.quiver, p.kind, tuple(base + inverse_gens), p.relations, p.labels, tuple(specs)
    )


def render_relation(poly: NCPoly, p: Presentation | None = None, pretty: bool = True) -> str:
    return poly.render(p.rank if p is not None else None, pretty=pretty)

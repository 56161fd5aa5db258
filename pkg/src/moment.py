"""Quantum moment maps: edge maps, vertex maps, characters and moment ideals.

Matrix conventions follow :mod:`src.freealg`. For a non-loop edge e the
moment map at its head is ``M = I + t(q - q^-1) D A`` and the one at its
tail is the inverse of ``Mbar = I + t(q - q^-1) A D``; the inverse is only
available as an adjoined symbol when the tail has dimension one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping

from .coeff import LaurentQ, RatQ
from .freealg import (
    AlgMatrix,
    GenId,
    GenKind,
    NCPoly,
    alg_matmul,
    generator_matrix,
    leg_chain,
)
from .models import CheckReport
from .quiver import Edge, Quiver
from .relations import (
    AlgebraKind,
    Presentation,
    UnsupportedError,
    a_matrix,
    adjoin_inverses,
    d_matrix,
    full_presentation,
    r_alg,
    r_inv_alg,
)

logger = logging.getLogger(__name__)

RHO = GenId.param("rho")


class MomentSide(str, Enum):
    BETA = "beta"
    ALPHA_BAR = "alpha_bar"
    ALPHA = "alpha"
    LOOP = "loop"
    VERTEX = "vertex"


@dataclass(frozen=True)
class MomentMatrix:
    """Square matrix whose (i, j) entry is the image of l^i_j."""

    vertex: str
    matrix: AlgMatrix
    side: MomentSide
    edge: str | None = None

    @property
    def dim(self) -> int:
        return self.matrix.row_dims[0]

    def entry(self, i: int, j: int) -> NCPoly:
        return self.matrix.entry(i, j)

    def to_schema(self, rank: Mapping[GenId, int] | None = None) -> dict:
        return {
            "vertex": self.vertex,
            "side": self.side.value,
            "edge": self.edge,
            "dim": self.dim,
            "entries": [
                {"row": i, "col": j, "poly": self.entry(i, j).to_schema(rank)}
                for i in range(1, self.dim + 1)
                for j in range(1, self.dim + 1)
            ],
        }


@dataclass(frozen=True)
class CharacterSpec:
    """Trace character values xi_v, one per vertex."""

    values: Mapping[str, Any]

    def __post_init__(self):
        for v, xi in self.values.items():
            if not xi:
                raise ValueError(f"character value at {v!r} must be nonzero")

    @classmethod
    def uniform(cls, q: Quiver, value: Any = 1) -> CharacterSpec:
        return cls({v: value for v in q.vertex_ids})

    def at(self, vertex_id: str):
        try:
            return self.values[vertex_id]
        except KeyError:
            raise ValueError(f"no character value for vertex {vertex_id!r}") from None


# ---------------------------------------------------------------------------
# Inverse symbols
# ---------------------------------------------------------------------------


def alpha_bar_tag(edge_id: str) -> str:
    return f"gbar[{edge_id}]"


def beta_tag(edge_id: str) -> str:
    return f"g[{edge_id}]"


def loop_a_tag(edge_id: str) -> str:
    return f"a[{edge_id}]"


def loop_d_tag(edge_id: str) -> str:
    return f"d[{edge_id}]"


def _edge(q: Quiver, e: str | Edge) -> Edge:
    return e if isinstance(e, Edge) else q.edge(e)


def _scale(t) -> RatQ:
    return RatQ.coerce(t) * LaurentQ.q_minus_q_inv()


# ---------------------------------------------------------------------------
# Edge and vertex moment maps
# ---------------------------------------------------------------------------


def edge_moment_beta(q: Quiver, e: str | Edge, t=1) -> MomentMatrix:
    """M = I + t(q - q^-1) D A at the head of e."""
    e = _edge(q, e)
    if e.is_loop:
        raise UnsupportedError(f"edge {e.id!r} is a loop; use edge_moment_loop")
    n = q.dim(e.tgt)
    da = alg_matmul(d_matrix(q, e), a_matrix(q, e))
    return MomentMatrix(e.tgt, AlgMatrix.identity((n,)) + da.scale(_scale(t)), MomentSide.BETA, e.id)


def edge_moment_alpha_bar(q: Quiver, e: str | Edge, t=1) -> MomentMatrix:
    """Mbar = I + t(q - q^-1) A D at the tail of e."""
    e = _edge(q, e)
    if e.is_loop:
        raise UnsupportedError(f"edge {e.id!r} is a loop; use edge_moment_loop")
    n = q.dim(e.src)
    ad = alg_matmul(a_matrix(q, e), d_matrix(q, e))
    return MomentMatrix(e.src, AlgMatrix.identity((n,)) + ad.scale(_scale(t)), MomentSide.ALPHA_BAR, e.id)


def edge_moment_alpha(q: Quiver, e: str | Edge, t=1) -> MomentMatrix:
    """The tail moment map, the inverse of Mbar, as an adjoined symbol."""
    e = _edge(q, e)
    if e.is_loop:
        raise UnsupportedError(f"edge {e.id!r} is a loop; use edge_moment_loop")
    n = q.dim(e.src)
    if not RatQ.coerce(t):
        return MomentMatrix(e.src, AlgMatrix.identity((n,)), MomentSide.ALPHA, e.id)
    if n != 1:
        raise UnsupportedError("inverse of the tail moment matrix requires d=1; unsupported")
    inv = NCPoly.gen(GenId.inv(alpha_bar_tag(e.id)))
    return MomentMatrix(e.src, AlgMatrix((1,), (1,), {((1,), (1,)): inv}), MomentSide.ALPHA, e.id)


def edge_moment_loop(q: Quiver, e: str | Edge) -> MomentMatrix:
    """l |-> d a^-1 d^-1 a for a loop at a one-dimensional vertex."""
    e = _edge(q, e)
    if not e.is_loop:
        raise UnsupportedError(f"edge {e.id!r} is not a loop")
    if q.dim(e.src) != 1:
        raise UnsupportedError("loop moment map requires matrix inverses; unsupported")
    word = (
        GenId.d(e.id, 1, 1),
        GenId.inv(loop_a_tag(e.id)),
        GenId.inv(loop_d_tag(e.id)),
        GenId.a(e.id, 1, 1),
    )
    return MomentMatrix(e.src, AlgMatrix((1,), (1,), {((1,), (1,)): NCPoly.word(word)}), MomentSide.LOOP, e.id)


def edge_moment_at(q: Quiver, e: Edge, v: str, t=1) -> MomentMatrix:
    if e.is_loop:
        return edge_moment_loop(q, e)
    if e.tgt == v:
        return edge_moment_beta(q, e, t)
    return edge_moment_alpha(q, e, t)


def vertex_moment(q: Quiver, v: str, t=1) -> MomentMatrix:
    """Ordered product of the edge moment matrices over the edges at v.

    Raises:
        UnsupportedError: If an incident edge has no supported moment map.
    """
    n = q.dim(v)
    acc = AlgMatrix.identity((n,))
    for e in q.incident_edges(v):
        acc = alg_matmul(acc, edge_moment_at(q, e, v, t).matrix)
    return MomentMatrix(v, acc, MomentSide.VERTEX)


def inverse_targets(q: Quiver, t=1) -> tuple[list[NCPoly], list[str]]:
    """Elements vertex moment maps need inverted, with their tags."""
    targets, tags = [], []
    for e in q.edges:
        if e.is_loop:
            if q.dim(e.src) == 1:
                targets += [NCPoly.gen(GenId.a(e.id, 1, 1)), NCPoly.gen(GenId.d(e.id, 1, 1))]
                tags += [loop_a_tag(e.id), loop_d_tag(e.id)]
        elif q.dim(e.src) == 1 and RatQ.coerce(t):
            targets.append(edge_moment_alpha_bar(q, e, t).entry(1, 1))
            tags.append(alpha_bar_tag(e.id))
    return targets, tags


def localized_presentation(q: Quiver, t=1) -> Presentation:
    """D_q presentation with the inverses vertex moment maps use adjoined."""
    p = full_presentation(q, AlgebraKind.DQ)
    targets, tags = inverse_targets(q, t)
    if not targets:
        return p
    logger.debug("adjoining %d inverses: %s", len(tags), ", ".join(tags))
    return adjoin_inverses(p, targets, tags)


def moment_ideal_generators(q: Quiver, ch: CharacterSpec, t=1) -> list[NCPoly]:
    """mu_v(l^i_j) - xi_v delta^i_j for every vertex, row-major."""
    out: list[NCPoly] = []
    for v in q.vertex_ids:
        m = vertex_moment(q, v, t)
        xi = ch.at(v)
        for i in range(1, m.dim + 1):
            for j in range(1, m.dim + 1):
                entry = m.entry(i, j)
                out.append(entry - xi if i == j else entry)
    return out


# ---------------------------------------------------------------------------
# Reflection equation
# ---------------------------------------------------------------------------


def reflection_defect(m: AlgMatrix) -> AlgMatrix:
    """M_2 R_21 M_1 R_12 - R_21 M_1 R_12 M_2."""
    r = r_alg(m.row_dims[0])
    lhs = leg_chain([(m, (2,)), (r, (2, 1)), (m, (1,)), (r, (1, 2))])
    rhs = leg_chain([(r, (2, 1)), (m, (1,)), (r, (1, 2)), (m, (2,))])
    return lhs - rhs


def reflection_defect_bar(m: AlgMatrix) -> AlgMatrix:
    """Mbar_2 R_12^-1 Mbar_1 R_21^-1 - R_12^-1 Mbar_1 R_21^-1 Mbar_2."""
    rinv = r_inv_alg(m.row_dims[0])
    lhs = leg_chain([(m, (2,)), (rinv, (1, 2)), (m, (1,)), (rinv, (2, 1))])
    rhs = leg_chain([(rinv, (1, 2)), (m, (1,)), (rinv, (2, 1)), (m, (2,))])
    return lhs - rhs


def character_check(n: int, rho=None) -> CheckReport:
    """Substitute l^i_j = rho delta^i_j into the reflection equation.

    With ``rho=None`` rho is a central symbol, so the check holds
    identically in rho and q.
    """
    if n < 1:
        raise ValueError(f"dimension must be at least 1, got {n}")
    params = {"N": n, "rho": "symbolic" if rho is None else str(rho)}
    value = NCPoly.gen(RHO) if rho is None else NCPoly.const(rho)
    images = {
        GenId.l(i, j): (value if i == j else NCPoly.zero())
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    }
    defect = reflection_defect(generator_matrix("", GenKind.L, n, n))
    symbolic = len(defect.components())
    for row, col, entry in defect.components():
        image = entry.substitute(images)
        if image:
            return CheckReport.failed("character", params, {
                "row": list(row), "col": list(col), "image": str(image),
            })
    return CheckReport.passed("character", params, {"components": symbolic})


def scalar_value(value) -> RatQ:
    if isinstance(value, str):
        return RatQ.parse(value)
    if isinstance(value, float):
        raise TypeError("floating point scalars are not allowed")
    return RatQ.coerce(Fraction(value) if not isinstance(value, (RatQ, LaurentQ)) else value)

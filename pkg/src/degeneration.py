"""Classical (q = 1) and quasi-classical (q = e^h, t = h) limits.

Commutative images live in one sympy polynomial ring over QQ whose
variables are the classical generators ``a[e]^i_j``, ``d[e]^k_l`` and the
formal parameters ``L_v``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import sympy
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from .coeff import HbarSeries, LaurentQ, RatQ, hbar_substitute, lambda_ring
from .freealg import AlgMatrix, GenId, GenKind, NCPoly, alg_matmul
from .models import CheckReport
from .moment import CharacterSpec
from .quiver import Quiver
from .relations import Presentation, UnsupportedError, a_matrix, d_matrix

logger = logging.getLogger(__name__)

HBAR_SCALE = 2


@dataclass(frozen=True)
class ClassicalRing:
    ring: PolyRing
    gens: dict[GenId, PolyElement]
    lam: dict[str, PolyElement]

    def convert(self, element: PolyElement) -> PolyElement:
        """Move an element of a parameter ring L_v into this ring."""
        if not element:
            return self.ring.zero
        return self.ring.from_expr(element.as_expr())


def classical_ring(q: Quiver) -> ClassicalRing:
    keys: list[GenId] = []
    for e in q.edges:
        shapes = ((GenKind.A, q.dim(e.src), q.dim(e.tgt)), (GenKind.D, q.dim(e.tgt), q.dim(e.src)))
        for kind, rows, cols in shapes:
            keys += [GenId(e.id, kind, i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)]
    symbols = [sympy.Symbol(g.render()) for g in keys]
    symbols += [sympy.Symbol(f"L_{v}") for v in q.vertex_ids]
    R, *gens = ring(symbols, QQ)
    lam = dict(zip(q.vertex_ids, gens[len(keys):]))
    return ClassicalRing(R, dict(zip(keys, gens[: len(keys)])), lam)


def commutative_image(
    poly: NCPoly, cr: ClassicalRing, coeff: Callable[[object], PolyElement]
) -> PolyElement:
    """Image of poly in the commutative ring, coefficients mapped by ``coeff``."""
    out = cr.ring.zero
    for word, c in poly.items():
        term = coeff(c)
        if not term:
            continue
        for g in word:
            try:
                term = term * cr.gens[g]
            except KeyError:
                raise UnsupportedError(f"generator {g} has no classical counterpart") from None
        out = out + term
    return out


def _at_one(cr: ClassicalRing) -> Callable[[object], PolyElement]:
    def coeff(c) -> PolyElement:
        value = RatQ.coerce(c).evaluate(1)
        return cr.ring.ground_new(QQ(value.numerator, value.denominator))
    return coeff


def _hbar_coefficient(cr: ClassicalRing, k: int) -> Callable[[HbarSeries], PolyElement]:
    return lambda c: cr.convert(c.coefficient(k))


# ---------------------------------------------------------------------------
# q = 1
# ---------------------------------------------------------------------------


def classical_bracket(u: GenId, v: GenId) -> int:
    """Classical value of u v - v u: Weyl pairing on one non-loop edge, else 0."""
    if u.edge != v.edge or {u.kind, v.kind} != {GenKind.A, GenKind.D}:
        return 0
    if u.kind is GenKind.D:
        return -classical_bracket(v, u)
    # [a^k_l, d^i_j] = -delta^i_l delta^k_j
    return -int(v.upper == u.lower and u.upper == v.lower)


def classical_limit_check(p: Presentation) -> CheckReport:
    """Every relation at q = 1 is a commutator plus its classical constant."""
    params = {"quiver": p.quiver.name, "kind": p.kind.value, "relations": len(p.relations)}
    loops = {e.id for e in p.quiver.edges if e.is_loop}
    cr = classical_ring(p.quiver)
    weyl = 0
    for n, relation in enumerate(p.relations):
        label = p.labels[n] if n < len(p.labels) else str(n)
        r1 = relation.at_one()

        def fail(reason: str) -> CheckReport:
            return CheckReport.failed("classical_limit", params, {
                "relation": n, "group": label, "reason": reason, "at_q_1": r1.render(p.rank),
            })

        if r1.degree() > 2:
            return fail("degree above 2")
        if r1.homogeneous_component(1):
            return fail("linear part does not vanish")
        quadratic = r1.homogeneous_component(2)
        if commutative_image(quadratic, cr, _at_one(cr)):
            return fail("quadratic part is not a sum of commutators")
        expected = Fraction(0)
        for (u, v), c in quadratic.items():
            if p.rank[u] < p.rank[v] and u.edge not in loops:
                expected -= Fraction(RatQ.coerce(c).evaluate(1)) * classical_bracket(u, v)
        constant = RatQ.coerce(r1.constant_term()).evaluate(1)
        if constant != expected:
            return fail(f"constant term {constant} differs from the classical value {expected}")
        weyl += bool(constant)
    return CheckReport.passed("classical_limit", params, {
        "commutators": len(p.relations) - weyl, "weyl": weyl,
    })


# ---------------------------------------------------------------------------
# Classical moment map
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassicalMomentExpr:
    """Entries sum_beta d a - sum_alpha a d at one vertex, commutatively."""

    vertex: str
    entries: tuple[tuple[PolyElement, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> PolyElement:
        return self.entries[i - 1][j - 1]

    def render(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.entries]


def classical_moment_expr(q: Quiver, v: str, cr: ClassicalRing | None = None) -> ClassicalMomentExpr:
    cr = cr or classical_ring(q)
    n = q.dim(v)
    grid = [[cr.ring.zero for _ in range(n)] for _ in range(n)]
    for e in q.incident_edges(v):
        a = lambda i, j: cr.gens[GenId.a(e.id, i, j)]  # noqa: E731
        d = lambda i, j: cr.gens[GenId.d(e.id, i, j)]  # noqa: E731
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                acc = grid[i - 1][j - 1]
                if e.tgt == v:
                    acc += sum((d(i, k) * a(k, j) for k in range(1, q.dim(e.src) + 1)), cr.ring.zero)
                if e.src == v:
                    acc -= sum((a(i, k) * d(k, j) for k in range(1, q.dim(e.tgt) + 1)), cr.ring.zero)
                grid[i - 1][j - 1] = acc
    return ClassicalMomentExpr(v, tuple(tuple(row) for row in grid))


# ---------------------------------------------------------------------------
# q = e^h
# ---------------------------------------------------------------------------


def _series_poly(poly: NCPoly, order: int, lam: PolyRing) -> NCPoly:
    return NCPoly({w: hbar_substitute(RatQ.coerce(c).as_laurent(), order, lam) for w, c in poly.items()})


def _series_matrix(m: AlgMatrix, order: int, lam: PolyRing) -> AlgMatrix:
    return m.map_entries(lambda p: _series_poly(p, order, lam))


def _times(m: AlgMatrix, s: HbarSeries) -> AlgMatrix:
    return m.map_entries(lambda p: NCPoly.const(s) * p)


def default_character(q: Quiver, order: int, lam: PolyRing | None = None) -> CharacterSpec:
    """xi_v = exp(h^2 L_v)."""
    lam = lam or lambda_ring(q.vertex_ids)
    gens = dict(zip(q.vertex_ids, lam.gens))
    return CharacterSpec({v: HbarSeries([0, 0, gens[v]], order, lam).exp() for v in q.vertex_ids})


def hbar_moment_series(
    q: Quiver, ch: CharacterSpec | None = None, order: int = 2, scale_t: bool = True
) -> dict[str, AlgMatrix]:
    """mu_v(l) - xi_v I per vertex, with q = e^h, t = h, truncated after h^order.

    The tail factor (I + t(q - q^-1) A D)^-1 is a finite geometric series
    since t(q - q^-1) starts at h^2.

    Raises:
        UnsupportedError: If the quiver has a loop.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    loops = [e.id for e in q.edges if e.is_loop]
    if loops:
        raise UnsupportedError(f"degeneration at loop vertices is not supported (loops: {', '.join(loops)})")
    lam = lambda_ring(q.vertex_ids)
    ch = ch or default_character(q, order, lam)
    one = HbarSeries.constant(1, order, lam)
    s = HbarSeries.hbar(order, lam) * hbar_substitute(LaurentQ.q_minus_q_inv(), order, lam)
    if not scale_t:
        s = HbarSeries.constant(0, order, lam)
    out: dict[str, AlgMatrix] = {}
    for v in q.vertex_ids:
        n = q.dim(v)
        identity = AlgMatrix.identity((n,), NCPoly.const(one))
        acc = identity
        for e in q.incident_edges(v):
            a, d = a_matrix(q, e), d_matrix(q, e)
            if e.tgt == v:
                factor = identity + _times(_series_matrix(alg_matmul(d, a), order, lam), s)
            else:
                step = -_times(_series_matrix(alg_matmul(a, d), order, lam), s)
                factor, term = identity, identity
                for _ in range(order // 2):
                    term = alg_matmul(term, step)
                    factor = factor + term
            acc = alg_matmul(acc, factor)
        xi = ch.at(v)
        if not isinstance(xi, HbarSeries):
            xi = HbarSeries.constant(xi, order, lam)
        out[v] = acc - AlgMatrix.identity((n,), NCPoly.const(xi))
        logger.debug("vertex %s: %d nonzero series entries", v, len(out[v].components()))
    return out


@dataclass(frozen=True)
class HbarEntry:
    vertex: str
    row: int
    col: int
    coefficients: tuple[PolyElement, ...]
    expected: PolyElement

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "row": self.row,
            "col": self.col,
            "coefficients": [str(c) for c in self.coefficients],
            "expected_h2": str(self.expected),
        }


def hbar_moment_table(
    q: Quiver, ch: CharacterSpec | None = None, order: int = 2, scale_t: bool = True
) -> list[HbarEntry]:
    """Commutative h-coefficients of every entry, with the expected h^2 term."""
    if order < 2:
        raise ValueError("the h^2 coefficient needs order >= 2")
    cr = classical_ring(q)
    lam = lambda_ring(q.vertex_ids)
    ch = ch or default_character(q, order, lam)
    series = hbar_moment_series(q, ch, order, scale_t)
    rows: list[HbarEntry] = []
    for v in q.vertex_ids:
        cme = classical_moment_expr(q, v, cr)
        xi = ch.at(v)
        xi2 = cr.convert(xi.coefficient(2)) if isinstance(xi, HbarSeries) else cr.ring.zero
        for i in range(1, q.dim(v) + 1):
            for j in range(1, q.dim(v) + 1):
                entry = series[v].entry(i, j)
                coeffs = tuple(commutative_image(entry, cr, _hbar_coefficient(cr, k)) for k in range(order + 1))
                expected = cme.entry(i, j) * (HBAR_SCALE if scale_t else 0)
                if i == j:
                    expected -= xi2
                rows.append(HbarEntry(v, i, j, coeffs, expected))
    return rows


def hbar_moment_check(q: Quiver, ch: CharacterSpec | None = None, order: int = 2) -> CheckReport:
    """h^0 and h^1 coefficients vanish; h^2 is 2 (classical moment - L/2 delta)."""
    params = {"quiver": q.name, "order": order}
    for row in hbar_moment_table(q, ch, order):
        where = {"vertex": row.vertex, "row": row.row, "col": row.col}
        for k in (0, 1):
            if row.coefficients[k]:
                return CheckReport.failed("hbar_moment", params, {
                    **where, "power": k, "coefficient": str(row.coefficients[k]),
                })
        if row.coefficients[2] != row.expected:
            return CheckReport.failed("hbar_moment", params, {
                **where, "power": 2, "coefficient": str(row.coefficients[2]), "expected": str(row.expected),
            })
    return CheckReport.passed("hbar_moment", params, {"scale": HBAR_SCALE, "vertices": len(q.vertex_ids)})

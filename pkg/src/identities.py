"""Identity checks built on ideal membership.

Each check expands a matrix identity into scalar components and asks an
:class:`~src.verify.IdealEngine` for membership certificates.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Iterable

from .coeff import LaurentQ, RatQ
from .freealg import AlgMatrix, GenId, GenKind, NCPoly, alg_matmul, build_r_matrix, leg_chain, r_inverse
from .models import CheckReport
from .moment import (
    MomentMatrix,
    MomentSide,
    beta_tag,
    edge_moment_alpha_bar,
    edge_moment_beta,
    edge_moment_loop,
    localized_presentation,
    loop_a_tag,
    loop_d_tag,
    reflection_defect,
    reflection_defect_bar,
    vertex_moment,
)
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
from .verify import DEFAULT_MAX_GENERATORS, DEFAULT_MAX_WORDS, GuardExceeded, IdealEngine, ideal_span

logger = logging.getLogger(__name__)

MAX_IDENTITY_DIM = 2


def labelled_components(m: AlgMatrix, prefix: str) -> list[tuple[str, NCPoly]]:
    return [(f"{prefix}{list(r)},{list(c)}", v) for r, c, v in m.components()]


def _edge(q: Quiver, e: str | Edge) -> Edge:
    return e if isinstance(e, Edge) else q.edge(e)


def _edge_params(q: Quiver, e: Edge) -> dict:
    return {"quiver": q.name, "edge": e.id, "dims": [q.dim(e.src), q.dim(e.tgt)]}


def _require_small(q: Quiver, e: Edge, name: str, params: dict, bound: int) -> CheckReport | None:
    if e.is_loop:
        return CheckReport.inconclusive(name, params, "unsupported: non-loop edges only", bound=bound)
    if max(q.dim(e.src), q.dim(e.tgt)) > MAX_IDENTITY_DIM:
        return CheckReport.inconclusive(
            name, params, f"unsupported: dimensions above {MAX_IDENTITY_DIM}", bound=bound
        )
    return None


def reflection_check(m: MomentMatrix, p: Presentation, D: int = 4, engine: IdealEngine | None = None) -> CheckReport:
    """Every component of the reflection equation for M lies in the ideal."""
    engine = engine or IdealEngine(p)
    defect = reflection_defect_bar(m.matrix) if m.side is MomentSide.ALPHA_BAR else reflection_defect(m.matrix)
    params = {"vertex": m.vertex, "edge": m.edge, "side": m.side.value, "dim": m.dim}
    return engine.certify("reflection", params, labelled_components(defect, "re"), D)


def moment_condition_check(
    q: Quiver, e: str | Edge, p: Presentation, D: int = 4, engine: IdealEngine | None = None
) -> CheckReport:
    """A_2 R_21 M_1 R_12 = M_1 A_2 and M_1 R D_2 = R_21^-1 D_2 M_1 modulo the ideal.

    At d=1 the q-centrality relations g a = q^2 a g and g d = q^-2 d g are
    certified explicitly as well.
    """
    e = _edge(q, e)
    params = _edge_params(q, e)
    refused = _require_small(q, e, "moment_condition", params, D)
    if refused:
        return refused
    engine = engine or IdealEngine(p)
    m = edge_moment_beta(q, e).matrix
    a, d = a_matrix(q, e), d_matrix(q, e)
    nb = q.dim(e.tgt)
    r, rinv = r_alg(nb), r_inv_alg(nb)
    a_side = leg_chain([(a, (2,)), (r, (2, 1)), (m, (1,)), (r, (1, 2))]) - leg_chain([(m, (1,)), (a, (2,))])
    d_side = leg_chain([(m, (1,)), (r, (1, 2)), (d, (2,))]) - leg_chain([(rinv, (2, 1)), (d, (2,)), (m, (1,))])
    components = labelled_components(a_side, "a") + labelled_components(d_side, "d")
    if q.dim(e.src) == 1 and nb == 1:
        g = m.entry(1, 1)
        x, y = NCPoly.gen(GenId.a(e.id, 1, 1)), NCPoly.gen(GenId.d(e.id, 1, 1))
        q2 = RatQ.coerce(LaurentQ.monomial(2))
        components.append(("qcentral a", g * x - (x * g).scale(q2)))
        components.append(("qcentral d", g * y - (y * g).scale(q2.inverse())))
    return engine.certify("moment_condition", params, components, D)


def manyrelns_components(q: Quiver, e: Edge) -> list[tuple[str, NCPoly]]:
    """The seven exchange identities between g^alpha, g^beta, A and D."""
    ga = edge_moment_beta(q, e).matrix
    gb = edge_moment_alpha_bar(q, e).matrix
    a, d = a_matrix(q, e), d_matrix(q, e)
    na, nb = q.dim(e.src), q.dim(e.tgt)
    ra, ra_inv = r_alg(na), r_inv_alg(na)
    rb, rb_inv = r_alg(nb), r_inv_alg(nb)
    items = [
        alg_matmul(ga, d) - alg_matmul(d, gb),
        alg_matmul(gb, a) - alg_matmul(a, ga),
        leg_chain([(ga, (1,)), (rb, (1, 2)), (d, (2,))]) - leg_chain([(rb_inv, (2, 1)), (d, (2,)), (ga, (1,))]),
        leg_chain([(gb, (1,)), (ra_inv, (2, 1)), (a, (2,))]) - leg_chain([(ra, (1, 2)), (a, (2,)), (gb, (1,))]),
        leg_chain([(gb, (1,)), (d, (2,)), (ra, (2, 1))]) - leg_chain([(d, (2,)), (ra_inv, (1, 2)), (gb, (1,))]),
        leg_chain([(ga, (1,)), (a, (2,)), (rb_inv, (1, 2))]) - leg_chain([(a, (2,)), (rb, (2, 1)), (ga, (1,))]),
        leg_chain([(gb, (1,)), (ga, (2,))]) - leg_chain([(ga, (2,)), (gb, (1,))]),
    ]
    out: list[tuple[str, NCPoly]] = []
    for n, item in enumerate(items, start=1):
        out.extend(labelled_components(item, f"item{n}"))
    return out


def manyrelns_check(
    q: Quiver, e: str | Edge, p: Presentation, D: int = 4, engine: IdealEngine | None = None
) -> CheckReport:
    e = _edge(q, e)
    params = _edge_params(q, e)
    refused = _require_small(q, e, "manyrelns", params, D)
    if refused:
        return refused
    engine = engine or IdealEngine(p)
    return engine.certify("manyrelns", params, manyrelns_components(q, e), D)


# ---------------------------------------------------------------------------
# Fourier transforms
# ---------------------------------------------------------------------------


def fourier_images(q: Quiver, e: Edge) -> tuple[Presentation, dict[GenId, NCPoly]]:
    """Localized presentation of D_q(e) and the transform on its generators.

    Non-loop: a -> d, d -> -a g^-1, g^-1 -> q^-2 g with g = 1 + (q - q^-1) d a.
    Loop: a -> d, d -> d a^-1 d^-1, a^-1 -> d^-1, d^-1 -> d a d^-1.
    """
    sub = q.restrict([e.id])
    p = full_presentation(sub, AlgebraKind.DQ)
    a, d = NCPoly.gen(GenId.a(e.id, 1, 1)), NCPoly.gen(GenId.d(e.id, 1, 1))
    if e.is_loop:
        p = adjoin_inverses(p, [a, d], [loop_a_tag(e.id), loop_d_tag(e.id)])
        x = GenId.inv(loop_a_tag(e.id))
        y = GenId.inv(loop_d_tag(e.id))
        images = {
            GenId.a(e.id, 1, 1): d,
            GenId.d(e.id, 1, 1): d * NCPoly.gen(x) * NCPoly.gen(y),
            x: NCPoly.gen(y),
            y: d * a * NCPoly.gen(y),
        }
        return p, images
    beta = edge_moment_beta(sub, e)
    p = adjoin_inverses(p, [beta.matrix], [beta_tag(e.id)])
    g = beta.entry(1, 1)
    ginv = GenId.inv(beta_tag(e.id))
    images = {
        GenId.a(e.id, 1, 1): d,
        GenId.d(e.id, 1, 1): -(a * NCPoly.gen(ginv)),
        ginv: g.scale(RatQ.coerce(LaurentQ.monomial(-2))),
    }
    return p, images


def fourier_check(
    q: Quiver,
    e: str | Edge,
    variant: str | None = None,
    D: int = 6,
    max_words: int = DEFAULT_MAX_WORDS,
    max_generators: int = DEFAULT_MAX_GENERATORS,
) -> CheckReport:
    """Images of all defining and unit relations vanish in the localization."""
    e = _edge(q, e)
    expected = "loop" if e.is_loop else "nonloop"
    params = {**_edge_params(q, e), "variant": variant or expected}
    if variant is not None and variant != expected:
        raise ValueError(f"edge {e.id!r} is a {expected} edge, not {variant}")
    if q.dim(e.src) != 1 or q.dim(e.tgt) != 1:
        return CheckReport.inconclusive("fourier", params, "unsupported: requires d=1", bound=D)
    p, images = fourier_images(q, e)
    components = [(f"relation {n}", r.substitute(images)) for n, r in enumerate(p.relations)]
    components += [(f"unit {n}", r.substitute(images)) for n, r in enumerate(p.unit_relations())]
    engine = IdealEngine(p, max_words, max_generators)
    if not e.is_loop:
        g = p.inverses[0].element
        ginv = NCPoly.gen(p.inverses[0].symbol)
        q2 = RatQ.coerce(LaurentQ.monomial(2))
        components.append(("image of g", g.substitute(images) - ginv.scale(q2)))
    report = engine.certify("fourier", params, components, D)
    if not e.is_loop and report.ok:
        a = NCPoly.gen(GenId.a(e.id, 1, 1))
        twice = a.substitute(images).substitute(images)
        expected_twice = -(a * NCPoly.gen(p.inverses[0].symbol))
        if twice != expected_twice:
            return CheckReport.failed("fourier", params, {"reason": "F^2(a) regression", "f2_a": str(twice)})
        report.witness = {**(report.witness or {}), "f2_a": twice.render(p.rank, pretty=True)}
    return report


def loop_moment_check(q: Quiver, e: str | Edge, D: int = 6) -> CheckReport:
    """The loop moment image d a^-1 d^-1 a normal-forms to q^2 at d=1."""
    e = _edge(q, e)
    params = {**_edge_params(q, e), "expected": "q^2"}
    try:
        mu = edge_moment_loop(q, e).entry(1, 1)
    except UnsupportedError as exc:
        return CheckReport.inconclusive("loop_moment", params, str(exc), bound=D)
    p = localized_presentation(q.restrict([e.id]))
    q2 = RatQ.coerce(LaurentQ.monomial(2))
    return IdealEngine(p).certify("loop_moment", params, [("mu - q^2", mu - q2)], D)


def _has_inverses(elem: NCPoly) -> bool:
    return any(g.kind is GenKind.INV for g in elem.generators())


def invert_monomial(p: Presentation, elem: NCPoly) -> NCPoly | None:
    """Inverse of a product of adjoined inverses, free of inverse symbols.

    (g1^-1 ... gk^-1)^-1 = gk ... g1. Returns None for anything else.
    """
    if len(elem.words()) != 1:
        return None
    ((word, coeff),) = elem.items()
    if not word or coeff != 1 or any(g.kind is not GenKind.INV for g in word):
        return None
    targets = {spec.symbol: spec.element for spec in p.inverses}
    out = NCPoly.one()
    for g in reversed(word):
        out = out * targets[g]
    return out


def vertex_commutation_check(q: Quiver, D: int = 6) -> CheckReport:
    """Moment images at distinct one-dimensional vertices commute.

    X commutes with Y exactly when X^-1 does, so an image that is a pure
    product of adjoined inverses is replaced by its inverse first. When no
    image keeps an inverse symbol the plain D_q ideal decides.
    """
    params = {"quiver": q.name}
    if any(v.dim != 1 for v in q.vertices):
        return CheckReport.inconclusive("vertex_commutation", params, "unsupported: requires d=1", bound=D)
    p = localized_presentation(q)
    moments = {}
    try:
        for v in q.vertex_ids:
            image = vertex_moment(q, v).entry(1, 1)
            moments[v] = invert_monomial(p, image) or image
    except UnsupportedError as exc:
        return CheckReport.inconclusive("vertex_commutation", params, str(exc), bound=D)
    if any(_has_inverses(m) for m in moments.values()):
        engine = IdealEngine(p)
    else:
        engine = IdealEngine(full_presentation(q, AlgebraKind.DQ))
        params["localized"] = False
    ids = q.vertex_ids
    components = [
        (f"[{u},{v}]", moments[u] * moments[v] - moments[v] * moments[u])
        for i, u in enumerate(ids)
        for v in ids[i + 1:]
    ]
    return engine.certify("vertex_commutation", params, components, D)


# ---------------------------------------------------------------------------
# Equivariance
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _r_entries(n: int) -> tuple[dict, dict]:
    r = build_r_matrix(n)
    return dict(r.entries), dict(r_inverse(r).entries)


def representation_entry(n: int, sign: int, s: int, t: int, row: int, col: int, antipode: bool = False) -> LaurentQ:
    """Matrix entry of the vector representation of l^{+-s}_t, or of its antipode."""
    r, rinv = _r_entries(n)
    zero = LaurentQ.zero()
    if sign > 0:
        table = rinv if antipode else r
        return table.get((row, s, col, t), zero)
    table = r if antipode else rinv
    return table.get((s, row, t, col), zero)


class VertexAction:
    """Action of the generators l^{+-s}_t of one vertex on words."""

    def __init__(self, q: Quiver, vertex_id: str):
        self.quiver = q
        self.vertex = vertex_id
        self.n = q.dim(vertex_id)
        self._letters: dict[tuple, dict[GenId, LaurentQ]] = {}

    def _factor(self, vertex: str, sign: int, s: int, t: int, index: int, dual: bool) -> dict[int, LaurentQ]:
        if vertex != self.vertex:
            return {index: LaurentQ.one()} if s == t else {}
        out = {}
        for other in range(1, self.n + 1):
            if dual:
                value = representation_entry(self.n, sign, s, t, index, other, antipode=True)
            else:
                value = representation_entry(self.n, sign, s, t, other, index)
            if value:
                out[other] = value
        return out

    def letter(self, g: GenId, sign: int, s: int, t: int) -> dict[GenId, LaurentQ]:
        key = (g, sign, s, t)
        cached = self._letters.get(key)
        if cached is not None:
            return cached
        if g.kind not in (GenKind.A, GenKind.D):
            raise UnsupportedError(f"no vertex action on generator {g}")
        e = self.quiver.edge(g.edge)
        dual_vertex, vec_vertex = (e.src, e.tgt) if g.kind is GenKind.A else (e.tgt, e.src)
        result: dict[GenId, LaurentQ] = {}
        mids = range(1, self.n + 1) if dual_vertex == self.vertex else [s]
        for m in mids:
            upper = self._factor(dual_vertex, sign, s, m, g.upper, dual=True)
            if not upper:
                continue
            lower = self._factor(vec_vertex, sign, m, t, g.lower, dual=False)
            for i, cu in upper.items():
                for j, cl in lower.items():
                    target = GenId(g.edge, g.kind, i, j)
                    result[target] = result.get(target, LaurentQ.zero()) + cu * cl
        result = {k: v for k, v in result.items() if v}
        self._letters[key] = result
        return result

    def on_word(self, word: tuple[GenId, ...], sign: int, s: int, t: int) -> dict:
        """Iterated coproduct: l^s_t acts on a word as sum l^s_k1 (x) l^k1_k2 (x) ..."""
        states: dict[int, dict] = {s: {(): LaurentQ.one()}}
        for g in word:
            nxt: dict[int, dict] = {}
            for k1, partial in states.items():
                for k2 in range(1, self.n + 1):
                    image = self.letter(g, sign, k1, k2)
                    if not image:
                        continue
                    bucket = nxt.setdefault(k2, {})
                    for w, c in partial.items():
                        for g2, c2 in image.items():
                            key = w + (g2,)
                            bucket[key] = bucket.get(key, LaurentQ.zero()) + c * c2
            states = nxt
        return {w: c for w, c in states.get(t, {}).items() if c}

    def on_row(self, row: dict, sign: int, s: int, t: int) -> NCPoly:
        out: dict = {}
        for word, coeff in row.items():
            for w, c in self.on_word(word, sign, s, t).items():
                out[w] = out.get(w, RatQ.zero()) + coeff * c
        return NCPoly(out)

    def generators(self) -> Iterable[tuple[int, int, int]]:
        for sign in (1, -1):
            for s in range(1, self.n + 1):
                for t in range(1, self.n + 1):
                    yield sign, s, t


def equivariance_check(
    p: Presentation,
    D: int = 2,
    max_words: int = DEFAULT_MAX_WORDS,
    max_generators: int = DEFAULT_MAX_GENERATORS,
    q0=None,
) -> CheckReport:
    """The degree-D relation span is stable under every l^{+-i}_j.

    With ``q0`` the relations and every image are evaluated at q = q0 first.
    At q0 = 1 the action collapses to the classical one and any commutator
    presentation passes.
    """
    params = {"quiver": p.quiver.name, "kind": p.kind.value, "bound": D}
    if D < 2:
        raise ValueError("equivariance needs D >= 2")
    if p.inverses:
        return CheckReport.inconclusive("equivariance", params, "unsupported: localized presentation", bound=D)
    if q0 is not None:
        params["q0"] = str(q0)
        p = p.specialize(q0)
    try:
        span = ideal_span(p, D, max_words, max_generators).build()
    except GuardExceeded as exc:
        return CheckReport.inconclusive("equivariance", params, str(exc), bound=D)
    rows = [row for echelon in span.classes().values() for row in echelon.rows.values()]
    tested = 0
    for v in p.quiver.vertex_ids:
        action = VertexAction(p.quiver, v)
        for sign, s, t in action.generators():
            for row in rows:
                image = action.on_row(row, sign, s, t)
                if q0 is not None:
                    image = image.specialize(q0)
                tested += 1
                if image and not span.contains(image):
                    label = f"l^{'+' if sign > 0 else '-'}{s}_{t}@{v}"
                    return CheckReport.failed("equivariance", params, {
                        "generator": label,
                        "row": NCPoly(row).render(p.rank),
                        "image": image.render(p.rank),
                    })
    return CheckReport.passed("equivariance", params, {"images_checked": tested, "span_rank": span.rank})

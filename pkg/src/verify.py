"""Bounded-degree ideal spans, membership certificates, Hilbert tables and PBW checks.

The two-sided ideal generated by a presentation's relations is truncated to
filtration degree D: the span of all products ``x * r * y`` with
``|x| + |y| + deg(r) <= D``. Every relation we generate is homogeneous for a
grading by per-edge counts and torus weights, so the span splits into
weight classes that are echelonized independently and only on demand.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Callable, Iterable, Iterator, Sequence

from .coeff import RatQ
from .freealg import GenId, GenKind, NCPoly, Word
from .linalg import SparseEchelon, rank_of
from .models import CheckReport
from .relations import Presentation

logger = logging.getLogger(__name__)

DEFAULT_MAX_WORDS = 160_000
DEFAULT_MAX_GENERATORS = 20

Weight = tuple[int, ...]


class GuardExceeded(RuntimeError):
    """Word enumeration would exceed the configured size guard."""

    def __init__(self, message: str, bound: int | None = None):
        self.bound = bound
        super().__init__(message)


def word_count(generators: int, degree: int) -> int:
    """Number of words of length <= degree."""
    return sum(generators ** k for k in range(degree + 1))


def check_guards(
    generators: int,
    degree: int,
    max_words: int = DEFAULT_MAX_WORDS,
    max_generators: int = DEFAULT_MAX_GENERATORS,
) -> None:
    if generators > max_generators:
        raise GuardExceeded(f"{generators} generators exceed the guard of {max_generators}", degree)
    count = word_count(generators, degree)
    if count > max_words:
        raise GuardExceeded(f"{count} words up to degree {degree} exceed the guard of {max_words}", degree)


# ---------------------------------------------------------------------------
# Grading
# ---------------------------------------------------------------------------


class Grading:
    """Multi-grading of the free algebra by edge counts and torus weights.

    ``a(e)^i_j`` counts +1 for e, -1 at (src, i) and +1 at (tgt, j);
    ``d(e)^k_l`` is the reverse. An adjoined inverse carries the negated
    weight of its target. If some relation is not homogeneous the grading
    collapses to a single class.
    """

    def __init__(self, p: Presentation):
        keys: list[tuple] = [("edge", e.id) for e in p.quiver.edges]
        keys += [("torus", v.id, i) for v in p.quiver.vertices for i in range(1, v.dim + 1)]
        self._slot = {k: n for n, k in enumerate(keys)}
        self._size = len(keys)
        self._zero: Weight = (0,) * self._size
        self._weights: dict[GenId, Weight] = {}
        for g in p.generators:
            if g.kind in (GenKind.A, GenKind.D):
                self._weights[g] = self._edge_weight(p, g)
        self.trivial = False
        for spec in p.inverses:
            target = self.poly_weight(spec.element)
            if target is None:
                self.trivial = True
                break
            self._weights[spec.symbol] = tuple(-x for x in target)
        if not self.trivial:
            self.trivial = any(self.poly_weight(r) is None for r in p.all_relations())
        if self.trivial:
            logger.debug("relations are not weight-homogeneous; using a single class")

    def _edge_weight(self, p: Presentation, g: GenId) -> Weight:
        e = p.quiver.edge(g.edge)
        vec = [0] * self._size
        sign = 1 if g.kind is GenKind.A else -1
        row_vertex, col_vertex = (e.src, e.tgt) if sign > 0 else (e.tgt, e.src)
        vec[self._slot[("edge", e.id)]] += sign
        vec[self._slot[("torus", row_vertex, g.upper)]] -= 1
        vec[self._slot[("torus", col_vertex, g.lower)]] += 1
        return tuple(vec)

    @property
    def zero(self) -> Weight:
        return self._zero

    def word_weight(self, word: Word) -> Weight:
        if self.trivial or not word:
            return self._zero
        total = [0] * self._size
        for g in word:
            for n, x in enumerate(self._weights.get(g, self._zero)):
                total[n] += x
        return tuple(total)

    def poly_weight(self, poly: NCPoly) -> Weight | None:
        """Common weight of all terms, or None when mixed."""
        weights = {self.word_weight(w) for w in poly.words()}
        if len(weights) > 1:
            return None
        return weights.pop() if weights else self._zero

    def split(self, poly: NCPoly) -> dict[Weight, dict[Word, RatQ]]:
        out: dict[Weight, dict[Word, RatQ]] = {}
        for word, coeff in poly.items():
            out.setdefault(self.word_weight(word), {})[word] = coeff
        return out


def add_weights(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def sub_weights(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Standard monomials
# ---------------------------------------------------------------------------


def is_standard(word: Word, rank: dict[GenId, int]) -> bool:
    """Standard monomials are the non-decreasing words in generator order."""
    return all(rank[word[i]] <= rank[word[i + 1]] for i in range(len(word) - 1))


def standard_count(generators: int, n: int) -> int:
    """Standard monomials of length <= n: the classical filtered dimension."""
    return comb(generators + n, n)


def standard_last_key(rank: dict[GenId, int]) -> Callable[[Word], tuple]:
    """Column order making nonstandard words lead their rows."""

    def key(word: Word) -> tuple:
        ranks = tuple(rank.get(g, len(rank)) for g in word)
        standard = all(ranks[i] <= ranks[i + 1] for i in range(len(ranks) - 1))
        return (len(word), 0 if standard else 1, ranks)

    return key


# ---------------------------------------------------------------------------
# Spans
# ---------------------------------------------------------------------------


class _WordTable:
    """Words up to a given length, bucketed by length and weight."""

    def __init__(self, generators: Sequence[GenId], grading: Grading):
        self.generators = tuple(generators)
        self.grading = grading
        self._by_length: dict[int, list[Word]] = {0: [()]}
        self._buckets: dict[int, dict[Weight, list[Word]]] = {}

    def words(self, length: int) -> list[Word]:
        cached = self._by_length.get(length)
        if cached is None:
            cached = self._by_length[length] = list(product(self.generators, repeat=length))
        return cached

    def bucket(self, length: int) -> dict[Weight, list[Word]]:
        cached = self._buckets.get(length)
        if cached is None:
            cached = {}
            for w in self.words(length):
                cached.setdefault(self.grading.word_weight(w), []).append(w)
            self._buckets[length] = cached
        return cached


class DegreeSpan:
    """Echelonized span of ``x * r * y`` within filtration degree ``bound``.

    Weight classes are built lazily by :meth:`component`; :meth:`build`
    builds all of them degree by degree and records the cumulative ranks.
    """

    def __init__(self, p: Presentation, bound: int):
        self.presentation = p
        self.bound = bound
        self.grading = Grading(p)
        self.key = standard_last_key(p.rank)
        self._relations = [(r, r.degree(), self.grading.poly_weight(r) or self.grading.zero) for r in p.all_relations()]
        self._table = _WordTable(p.generators, self.grading)
        self._echelons: dict[Weight, SparseEchelon] = {}
        self._complete = False
        self.ranks_by_degree: list[int] = []

    # -- row generation ---------------------------------------------------

    def rows(self, degree: int, weight: Weight | None = None) -> Iterator[tuple[Weight, dict]]:
        """Rows ``x*r*y`` of filtration degree exactly ``degree``."""
        for rel, rdeg, rweight in self._relations:
            if rdeg > degree or rdeg < 0:
                continue
            free = degree - rdeg
            for lx in range(free + 1):
                ly = free - lx
                for x in self._table.words(lx):
                    wx = self.grading.word_weight(x)
                    if weight is None:
                        ys: Iterable[Word] = self._table.words(ly)
                    else:
                        need = sub_weights(sub_weights(weight, rweight), wx)
                        ys = self._table.bucket(ly).get(need, ())
                    for y in ys:
                        row = {x + w + y: c for w, c in rel.items()}
                        if weight is None:
                            yield add_weights(add_weights(wx, rweight), self.grading.word_weight(y)), row
                        else:
                            yield weight, row

    def component(self, weight: Weight) -> SparseEchelon:
        """The span restricted to one weight class."""
        if self.grading.trivial:
            weight = self.grading.zero
        echelon = self._echelons.get(weight)
        if echelon is None:
            if self._complete:
                return SparseEchelon(self.key)
            echelon = SparseEchelon(self.key)
            for k in range(self.bound + 1):
                for _, row in self.rows(k, weight):
                    echelon.add(row)
            self._echelons[weight] = echelon
            logger.debug("span class built at D=%d: rank %d", self.bound, echelon.rank)
        return echelon

    def build(self, on_degree: Callable[[int, int], None] | None = None) -> DegreeSpan:
        """Build every weight class, recording the rank after each degree."""
        if self._complete:
            return self
        self._echelons = {}
        self.ranks_by_degree = []
        for k in range(self.bound + 1):
            for weight, row in self.rows(k):
                echelon = self._echelons.get(weight)
                if echelon is None:
                    echelon = self._echelons[weight] = SparseEchelon(self.key)
                echelon.add(row)
            self.ranks_by_degree.append(sum(e.rank for e in self._echelons.values()))
            if on_degree is not None:
                on_degree(k, self.bound)
        self._complete = True
        logger.debug("full span at D=%d: rank %d", self.bound, self.rank)
        return self

    # -- queries ----------------------------------------------------------

    @property
    def rank(self) -> int:
        self.build()
        return self.ranks_by_degree[-1] if self.ranks_by_degree else 0

    def rank_in_degree(self, k: int) -> int:
        """Rank added by rows of filtration degree exactly k."""
        self.build()
        previous = self.ranks_by_degree[k - 1] if k > 0 else 0
        return self.ranks_by_degree[k] - previous

    def pivots(self) -> set[Word]:
        self.build()
        return {w for e in self._echelons.values() for w in e.pivots}

    def normal_form(self, poly: NCPoly) -> NCPoly:
        """Fully reduced remainder of poly modulo the span."""
        remainder: dict[Word, RatQ] = {}
        for weight, row in self.grading.split(poly).items():
            remainder.update(self.component(weight).normal_form(row))
        return NCPoly(remainder)

    def contains(self, poly: NCPoly) -> bool:
        return all(
            not self.component(weight).reduce(row) for weight, row in self.grading.split(poly).items()
        )

    def classes(self) -> dict[Weight, SparseEchelon]:
        self.build()
        return dict(self._echelons)


def ideal_span(
    p: Presentation,
    D: int,
    max_words: int = DEFAULT_MAX_WORDS,
    max_generators: int = DEFAULT_MAX_GENERATORS,
) -> DegreeSpan:
    """Guarded construction of the degree-D span; call ``.build()`` for ranks."""
    if D < 0:
        raise ValueError(f"degree bound must be nonnegative, got {D}")
    check_guards(len(p.generators), D, max_words, max_generators)
    return DegreeSpan(p, D)


class IdealEngine:
    """Membership oracle for one presentation, caching spans per bound."""

    def __init__(
        self,
        p: Presentation,
        max_words: int = DEFAULT_MAX_WORDS,
        max_generators: int = DEFAULT_MAX_GENERATORS,
    ):
        self.presentation = p
        self.max_words = max_words
        self.max_generators = max_generators
        self._spans: dict[int, DegreeSpan] = {}

    def span(self, D: int) -> DegreeSpan:
        span = self._spans.get(D)
        if span is None:
            span = self._spans[D] = ideal_span(self.presentation, D, self.max_words, self.max_generators)
        return span

    def normal_form(self, elem: NCPoly, D: int) -> NCPoly:
        if elem.degree() > D:
            raise ValueError(f"element of degree {elem.degree()} exceeds the bound {D}")
        if elem.is_zero():
            return elem
        return self.span(D).normal_form(elem)

    def membership(self, elem: NCPoly, D: int, name: str = "ideal_membership") -> CheckReport:
        params = {"bound": D, "degree": elem.degree()}
        nf = self.normal_form(elem, D)
        if nf.is_zero():
            return CheckReport.passed(name, params)
        return CheckReport.inconclusive(
            name, params, "no certificate at this bound", bound=D,
            normal_form=nf.render(self.presentation.rank),
        )

    def certify(
        self, name: str, parameters: dict, components: Iterable[tuple[str, NCPoly]], D: int
    ) -> CheckReport:
        """Certify that every labelled element lies in the ideal.

        A nonzero normal form is a failure only when the bound exceeds the
        element's degree by at least two and neither the element nor its
        normal form involves adjoined inverses; otherwise it is inconclusive.
        Unit relations can need multiples far above that slack.
        """
        params = {**parameters, "bound": D}
        checked = 0
        try:
            for label, elem in components:
                if elem.degree() > D:
                    return CheckReport.inconclusive(
                        name, params, f"component {label} has degree {elem.degree()} above the bound",
                        bound=D, component=label,
                    )
                nf = self.normal_form(elem, D)
                checked += 1
                if nf.is_zero():
                    continue
                detail = {"component": label, "normal_form": nf.render(self.presentation.rank), "bound": D}
                inverses = any(g.kind is GenKind.INV for g in elem.generators() | nf.generators())
                if D >= elem.degree() + 2 and not inverses:
                    return CheckReport.failed(name, params, detail)
                return CheckReport.inconclusive(
                    name, params, "nonzero normal form at bound", bound=D,
                    component=label, normal_form=detail["normal_form"],
                )
        except GuardExceeded as exc:
            return CheckReport.inconclusive(name, params, str(exc), bound=D)
        return CheckReport.passed(name, params, {"components": checked, "bound": D})


def ideal_membership(elem: NCPoly, p: Presentation, D: int) -> CheckReport:
    """Positive membership certificate; never a definitive negative."""
    return IdealEngine(p).membership(elem, D)


# ---------------------------------------------------------------------------
# Dimensions and PBW
# ---------------------------------------------------------------------------


@dataclass
class HilbertRow:
    degree: int
    words: int
    rank: int
    filtered: int
    graded: int
    classical_filtered: int
    classical_graded: int

    @property
    def matches(self) -> bool:
        return self.filtered == self.classical_filtered


@dataclass
class HilbertTable:
    generators: int
    bound: int
    rows: list[HilbertRow] = field(default_factory=list)

    @property
    def filtered(self) -> list[int]:
        return [r.filtered for r in self.rows]

    @property
    def graded(self) -> list[int]:
        return [r.graded for r in self.rows]

    def to_dict(self) -> dict:
        return {
            "generators": self.generators,
            "bound": self.bound,
            "rows": [r.__dict__ | {"matches": r.matches} for r in self.rows],
        }


def hilbert_table(span: DegreeSpan, on_degree: Callable[[int, int], None] | None = None) -> HilbertTable:
    """Filtered and graded dimensions of the quotient up to the span's bound."""
    span.build(on_degree)
    g = len(span.presentation.generators)
    table = HilbertTable(g, span.bound)
    previous = 0
    for n in range(span.bound + 1):
        words = word_count(g, n)
        filtered = words - span.ranks_by_degree[n]
        table.rows.append(HilbertRow(
            degree=n,
            words=words,
            rank=span.ranks_by_degree[n],
            filtered=filtered,
            graded=filtered - previous,
            classical_filtered=standard_count(g, n),
            classical_graded=comb(g + n - 1, n) if g else int(n == 0),
        ))
        previous = filtered
    return table


def filtered_dimension(p: Presentation, n: int) -> int:
    """Words of length <= n minus the rank of the degree-n span."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    return hilbert_table(ideal_span(p, n)).rows[-1].filtered


def pbw_check(p: Presentation, D: int, span: DegreeSpan | None = None) -> CheckReport:
    """Certify standard monomials as a basis up to filtration degree D.

    (a) every nonstandard word of length <= D leads some span row when
    nonstandard words are ordered last-reduced, so words rewrite to
    standard monomials; (b) filtered dimensions equal the classical counts.
    """
    g = len(p.generators)
    params = {"kind": p.kind.value, "generators": g, "bound": D}
    for r in p.relations:
        if r.degree() < 1:
            return CheckReport.failed("pbw", params, {"reason": "non-orientable relation", "relation": str(r)})
    try:
        span = span if span is not None else ideal_span(p, D)
        table = hilbert_table(span)
    except GuardExceeded as exc:
        return CheckReport.inconclusive("pbw", params, str(exc), bound=D)
    params["filtered_dimensions"] = table.filtered
    mismatches = [r.degree for r in table.rows if not r.matches]
    if mismatches:
        n = mismatches[0]
        row = table.rows[n]
        return CheckReport.failed("pbw", params, {
            "degree": n, "filtered": row.filtered, "classical": row.classical_filtered,
        })
    pivots = span.pivots()
    rank = p.rank
    for length in range(2, D + 1):
        for word in product(p.generators, repeat=length):
            if not is_standard(word, rank) and word not in pivots:
                return CheckReport.failed("pbw", params, {
                    "reason": "nonstandard word does not rewrite", "word": NCPoly.word(word).render(rank),
                })
    return CheckReport.passed("pbw", params, {"standard_monomials": table.rows[-1].classical_filtered})


# ---------------------------------------------------------------------------
# Probabilistic cross-check
# ---------------------------------------------------------------------------


def sample_points(count: int, seed: int) -> list[Fraction]:
    """Seeded random rationals avoiding 0 and +-1."""
    rng = random.Random(seed)
    points: list[Fraction] = []
    while len(points) < count:
        q0 = Fraction(rng.randint(2, 97), rng.randint(1, 97))
        if rng.random() < 0.5:
            q0 = -q0
        if q0 not in (0, 1, -1) and q0 not in points:
            points.append(q0)
    return points


def rank_crosscheck(span: DegreeSpan, points: int = 3, seed: int = 20240229) -> dict:
    """Compare the exact rank with ranks after specializing q at random points."""
    span.build()
    samples = sample_points(points, seed)
    ranks = []
    for q0 in samples:
        by_weight: dict[Weight, list[dict]] = {}
        for k in range(span.bound + 1):
            for weight, row in span.rows(k):
                by_weight.setdefault(weight, []).append({w: c.evaluate(q0) for w, c in row.items()})
        ranks.append(sum(rank_of(rows, span.key) for rows in by_weight.values()))
    agree = all(r == span.rank for r in ranks)
    if not agree:
        logger.warning("rank cross-check disagrees: exact %d, sampled %s", span.rank, ranks)
    return {"points": [str(x) for x in samples], "ranks": ranks, "exact": span.rank, "agree": agree}

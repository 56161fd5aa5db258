"""Free-algebra calculus and R-matrix tensor calculus.

Conventions used everywhere in the package:

* Matrix entries are indexed ``X[i][j]`` with ``i`` the upper (row) index and
  ``j`` the lower (column) index, so ``A[i][j] = a(e)^i_j``.
* A matrix on a tensor product carries one row index and one column index
  per leg. ``R[(i, j), (k, l)] = R^{ij}_{kl}`` and leg 1 is the leftmost
  tensor factor.
* ``X_1[(i, j), (k, l)] = X[i][k] delta_jl`` and ``X_2 = delta_ik X[j][l]``.
* Products of matrices multiply entries in order, left factor on the left.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from itertools import product
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from .coeff import LaurentQ, RatQ
from .models import CheckReport

logger = logging.getLogger(__name__)


class GenKind(str, Enum):
    """Generator families."""

    A = "a"
    D = "d"
    INV = "inv"
    L = "l"
    PARAM = "param"

    @property
    def rank(self) -> int:
        return _KIND_RANK[self]


_KIND_RANK = {GenKind.A: 0, GenKind.D: 1, GenKind.INV: 2, GenKind.L: 3, GenKind.PARAM: 4}


def _natural(text: str) -> tuple:
    """Sort key for an id with digit runs compared as numbers: e2 < e10."""
    return tuple(int(part) if i % 2 else part for i, part in enumerate(re.split(r"(\d+)", text)))


@total_ordering
@dataclass(frozen=True)
class GenId:
    """One free generator.

    ``a(e)^i_j`` has ``upper`` in 1..d_src and ``lower`` in 1..d_tgt;
    ``d(e)^k_l`` has ``upper`` in 1..d_tgt and ``lower`` in 1..d_src.
    Inverse generators are named by ``tag``; ``PARAM`` generators are
    central symbolic scalars named by ``tag``.
    """

    edge: str
    kind: GenKind
    upper: int = 0
    lower: int = 0
    tag: str = ""

    @classmethod
    def a(cls, edge: str, upper: int, lower: int) -> GenId:
        return cls(edge, GenKind.A, upper, lower)

    @classmethod
    def d(cls, edge: str, upper: int, lower: int) -> GenId:
        return cls(edge, GenKind.D, upper, lower)

    @classmethod
    def inv(cls, tag: str) -> GenId:
        return cls("", GenKind.INV, tag=tag)

    @classmethod
    def l(cls, upper: int, lower: int, vertex: str = "") -> GenId:
        return cls(vertex, GenKind.L, upper, lower)

    @classmethod
    def param(cls, name: str) -> GenId:
        return cls("", GenKind.PARAM, tag=name)

    @property
    def sort_key(self) -> tuple:
        return (self.kind.rank, self.tag, _natural(self.edge), self.upper, self.lower)

    def __lt__(self, other: GenId) -> bool:
        if not isinstance(other, GenId):
            return NotImplemented
        return self.sort_key < other.sort_key

    def render(self, pretty: bool = False) -> str:
        if self.kind is GenKind.INV:
            return f"inv[{self.tag}]"
        if self.kind is GenKind.PARAM:
            return self.tag
        if self.kind is GenKind.L:
            return f"l^{self.upper}_{self.lower}"
        letter = "a" if self.kind is GenKind.A else ("∂" if pretty else "d")
        return f"{letter}[{self.edge}]^{self.upper}_{self.lower}"

    def __str__(self) -> str:
        return self.render()

    def to_schema(self) -> dict:
        data: dict = {"edge": self.edge, "kind": self.kind.value, "up": self.upper, "lo": self.lower}
        if self.tag:
            data["tag"] = self.tag
        return data

    @classmethod
    def from_schema(cls, data: Mapping) -> GenId:
        return cls(data["edge"], GenKind(data["kind"]), data["up"], data["lo"], data.get("tag", ""))


Word = tuple[GenId, ...]


def word_key(word: Word, rank: Mapping[GenId, int] | None = None) -> tuple:
    """Degree-lexicographic sort key for a word.

    With ``rank`` (from :func:`generator_rank`) generators compare by their
    position in a presentation's generator list; otherwise by kind, edge id
    (digit runs compared as numbers) and indices.
    """
    if rank is None:
        return (len(word), tuple(g.sort_key for g in word))
    return (len(word), tuple(rank[g] for g in word))


def word_compare(u: Word, v: Word, rank: Mapping[GenId, int] | None = None) -> int:
    """Three-way deg-lex comparison: -1, 0 or 1."""
    ku, kv = word_key(u, rank), word_key(v, rank)
    return (ku > kv) - (ku < kv)


def generator_rank(generators: Sequence[GenId]) -> dict[GenId, int]:
    return {g: i for i, g in enumerate(generators)}


def render_word(word: Word, pretty: bool = False) -> str:
    return ".".join(g.render(pretty) for g in word) if word else "1"


# ---------------------------------------------------------------------------
# Noncommutative polynomials
# ---------------------------------------------------------------------------


def _coerce_coeff(value):
    if isinstance(value, (int, Fraction, LaurentQ)):
        return RatQ.coerce(value)
    return value


class NCPoly:
    """Finite map from words to nonzero coefficients.

    Coefficients are RatQ by default; any exact commutative ring element
    supporting ``+ - *`` and truth testing works (the degeneration module
    uses HbarSeries).
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Any] | None = None):
        clean = {}
        for word, coeff in (terms or {}).items():
            coeff = _coerce_coeff(coeff)
            if coeff:
                clean[tuple(word)] = coeff
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict[Word, Any]) -> NCPoly:
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls) -> NCPoly:
        return cls._raw({})

    @classmethod
    def one(cls) -> NCPoly:
        return cls.const(1)

    @classmethod
    def const(cls, value) -> NCPoly:
        return cls({(): value})

    @classmethod
    def gen(cls, g: GenId, coeff=1) -> NCPoly:
        return cls({(g,): coeff})

    @classmethod
    def word(cls, word: Iterable[GenId], coeff=1) -> NCPoly:
        return cls({tuple(word): coeff})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Word, Any]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def words(self) -> list[Word]:
        return list(self._terms)

    def coefficient(self, word: Iterable[GenId]):
        return self._terms.get(tuple(word), RatQ.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Maximal word length; -1 for the zero polynomial."""
        return max((len(w) for w in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((len(w) for w in self._terms), default=-1)

    def generators(self) -> set[GenId]:
        return {g for w in self._terms for g in w}

    def homogeneous_component(self, k: int) -> NCPoly:
        return NCPoly._raw({w: c for w, c in self._terms.items() if len(w) == k})

    def leading_part(self) -> NCPoly:
        return self.homogeneous_component(self.degree())

    def constant_term(self):
        return self._terms.get((), RatQ.zero())

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _as_poly(value) -> NCPoly | None:
        if isinstance(value, NCPoly):
            return value
        try:
            value = _coerce_coeff(value)
        except TypeError:
            return None
        return NCPoly.const(value)

    def __add__(self, other):
        other = self._as_poly(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            if w in out:
                s = out[w] + c
                if s:
                    out[w] = s
                else:
                    del out[w]
            else:
                out[w] = c
        return NCPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> NCPoly:
        return NCPoly._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        other = self._as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._as_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, coeff) -> NCPoly:
        coeff = _coerce_coeff(coeff)
        if not coeff:
            return NCPoly.zero()
        return NCPoly._raw({w: c * coeff for w, c in self._terms.items() if c * coeff})

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        out: dict[Word, Any] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                c = c1 * c2
                if w in out:
                    s = out[w] + c
                    if s:
                        out[w] = s
                    else:
                        del out[w]
                elif c:
                    out[w] = c
        return NCPoly._raw(out)

    def __rmul__(self, other):
        # scalars are central
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, exponent: int) -> NCPoly:
        result = NCPoly.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        other = self._as_poly(other) if not isinstance(other, NCPoly) else other
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- transformations --------------------------------------------------

    def map_coefficients(self, fn: Callable[[Any], Any]) -> NCPoly:
        return NCPoly({w: fn(c) for w, c in self._terms.items()})

    def specialize(self, q0) -> NCPoly:
        """Evaluate every coefficient at q = q0."""
        return self.map_coefficients(lambda c: RatQ.coerce(c.evaluate(q0)))

    def at_one(self) -> NCPoly:
        return self.specialize(1)

    def substitute(self, images: Mapping[GenId, NCPoly]) -> NCPoly:
        """Apply the algebra homomorphism fixing generators not in ``images``."""
        result = NCPoly.zero()
        for word, coeff in self._terms.items():
            term = NCPoly.const(coeff)
            for g in word:
                image = images.get(g)
                term = term * (image if image is not None else NCPoly.gen(g))
            result = result + term
        return result

    def sorted_terms(self, rank: Mapping[GenId, int] | None = None) -> list[tuple[Word, Any]]:
        """Terms in decreasing word order."""
        return sorted(self._terms.items(), key=lambda t: word_key(t[0], rank), reverse=True)

    def render(self, rank: Mapping[GenId, int] | None = None, pretty: bool = False) -> str:
        if not self._terms:
            return "0"
        parts = []
        for word, coeff in self.sorted_terms(rank):
            text = str(coeff)
            if word:
                w = render_word(word, pretty)
                if text == "1":
                    text = w
                elif text == "-1":
                    text = "-" + w
                else:
                    needs_parens = " " in text.strip("-") or "/" in text
                    text = f"({text})*{w}" if needs_parens else f"{text}*{w}"
            parts.append(text)
        out = parts[0]
        for part in parts[1:]:
            out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"NCPoly({self.render()!r})"

    # -- JSON schema ------------------------------------------------------

    def to_schema(self, rank: Mapping[GenId, int] | None = None) -> list[dict]:
        """Bit-exact term list in the versioned polynomial schema."""
        out = []
        for word, coeff in self.sorted_terms(rank):
            coeff = RatQ.coerce(coeff)
            out.append({
                "coeff": {"num": _laurent_schema(coeff.num), "den": _laurent_schema(coeff.den)},
                "word": [g.to_schema() for g in word],
            })
        return out

    @classmethod
    def from_schema(cls, terms: Iterable[Mapping]) -> NCPoly:
        result = {}
        for term in terms:
            num = _laurent_from_schema(term["coeff"]["num"])
            den = _laurent_from_schema(term["coeff"]["den"])
            result[tuple(GenId.from_schema(g) for g in term["word"])] = RatQ(num, den)
        return cls(result)


def _laurent_schema(p: LaurentQ) -> list:
    return [[e, str(c)] for e, c in p.terms.items()]


def _laurent_from_schema(pairs: Iterable) -> LaurentQ:
    return LaurentQ({int(e): Fraction(c) for e, c in pairs})


# ---------------------------------------------------------------------------
# Matrices with algebra-valued entries
# ---------------------------------------------------------------------------

Index = tuple[int, ...]


def _multi_indices(dims: Sequence[int]) -> Iterator[Index]:
    return product(*(range(1, d + 1) for d in dims))


class AlgMatrix:
    """Matrix on a tensor product of legs with NCPoly entries.

    Rows and columns are multi-indices, one 1-based index per leg; missing
    entries are zero.
    """

    __slots__ = ("row_dims", "col_dims", "_entries")

    def __init__(self, row_dims: Sequence[int], col_dims: Sequence[int], entries: Mapping | None = None):
        self.row_dims = tuple(row_dims)
        self.col_dims = tuple(col_dims)
        if len(self.row_dims) != len(self.col_dims):
            raise ValueError("row and column leg counts differ")
        clean = {}
        for (r, c), value in (entries or {}).items():
            value = value if isinstance(value, NCPoly) else NCPoly.const(value)
            if value:
                clean[(tuple(r), tuple(c))] = value
        self._entries = clean

    @classmethod
    def identity(cls, dims: Sequence[int], one: NCPoly | None = None) -> AlgMatrix:
        one = one if one is not None else NCPoly.one()
        return cls(dims, dims, {(m, m): one for m in _multi_indices(dims)})

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence[NCPoly]]) -> AlgMatrix:
        rows, cols = len(grid), len(grid[0]) if grid else 0
        return cls((rows,), (cols,), {
            ((i + 1,), (j + 1,)): grid[i][j] for i in range(rows) for j in range(cols)
        })

    @property
    def legs(self) -> int:
        return len(self.row_dims)

    @property
    def rows(self) -> int:
        n = 1
        for d in self.row_dims:
            n *= d
        return n

    @property
    def cols(self) -> int:
        n = 1
        for d in self.col_dims:
            n *= d
        return n

    def entry(self, row: Index | int, col: Index | int) -> NCPoly:
        row = (row,) if isinstance(row, int) else tuple(row)
        col = (col,) if isinstance(col, int) else tuple(col)
        return self._entries.get((row, col), NCPoly.zero())

    def items(self):
        return self._entries.items()

    def grid(self) -> list[list[NCPoly]]:
        return [
            [self.entry(r, c) for c in _multi_indices(self.col_dims)]
            for r in _multi_indices(self.row_dims)
        ]

    def components(self) -> list[tuple[Index, Index, NCPoly]]:
        """Nonzero entries in row-major order."""
        return [(r, c, self._entries[(r, c)]) for r, c in sorted(self._entries)]

    def is_zero(self) -> bool:
        return not self._entries

    def map_entries(self, fn: Callable[[NCPoly], NCPoly]) -> AlgMatrix:
        return AlgMatrix(self.row_dims, self.col_dims, {k: fn(v) for k, v in self._entries.items()})

    def _check_same_shape(self, other: AlgMatrix) -> None:
        if (self.row_dims, self.col_dims) != (other.row_dims, other.col_dims):
            raise ValueError(
                f"shape mismatch: {self.row_dims}x{self.col_dims} vs {other.row_dims}x{other.col_dims}"
            )

    def __add__(self, other: AlgMatrix) -> AlgMatrix:
        self._check_same_shape(other)
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out[k] + v if k in out else v
        return AlgMatrix(self.row_dims, self.col_dims, out)

    def __neg__(self) -> AlgMatrix:
        return self.map_entries(lambda p: -p)

    def __sub__(self, other: AlgMatrix) -> AlgMatrix:
        return self + (-other)

    def scale(self, coeff) -> AlgMatrix:
        return self.map_entries(lambda p: p.scale(coeff))

    def __matmul__(self, other: AlgMatrix) -> AlgMatrix:
        return alg_matmul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgMatrix):
            return NotImplemented
        return (self.row_dims, self.col_dims, self._entries) == (other.row_dims, other.col_dims, other._entries)

    def __repr__(self) -> str:
        return f"AlgMatrix({self.row_dims}x{self.col_dims}, {len(self._entries)} nonzero)"


def alg_matmul(x: AlgMatrix, y: AlgMatrix) -> AlgMatrix:
    """Matrix product; entries of x multiply on the left."""
    if x.col_dims != y.row_dims:
        raise ValueError(f"inner dimensions disagree: {x.col_dims} vs {y.row_dims}")
    by_row: dict[Index, list[tuple[Index, NCPoly]]] = {}
    for (r, c), v in y.items():
        by_row.setdefault(r, []).append((c, v))
    out: dict[tuple[Index, Index], NCPoly] = {}
    for (r, m), xv in x.items():
        for c, yv in by_row.get(m, ()):
            prod = xv * yv
            key = (r, c)
            out[key] = out[key] + prod if key in out else prod
    return AlgMatrix(x.row_dims, y.col_dims, out)


def place_on_legs(x: AlgMatrix, legs: Sequence[int], shape: Sequence[int]) -> AlgMatrix:
    """Embed x into the given (1-based) legs, with identity on the others.

    Args:
        x: Matrix with ``len(legs)`` legs; its leg t lands on ``legs[t]``.
        legs: Target leg positions.
        shape: Input (column) dimension of every leg of the product space;
            entries at the positions in ``legs`` must match the column
            dimensions of x, or be None.

    Returns:
        The placed matrix; e.g. legs (2, 1) of R gives R_21 with
        ``R_21[(i, j), (k, l)] = R^{ji}_{lk}``.
    """
    n = len(shape)
    if len(legs) != x.legs:
        raise ValueError(f"{x.legs}-leg matrix placed on {len(legs)} legs")
    if len(set(legs)) != len(legs) or not all(1 <= p <= n for p in legs):
        raise ValueError(f"invalid leg positions {tuple(legs)} for {n} legs")
    row_dims = list(shape)
    col_dims = list(shape)
    for t, p in enumerate(legs):
        if shape[p - 1] is not None and shape[p - 1] != x.col_dims[t]:
            raise ValueError(f"leg {p} has dimension {shape[p - 1]}, matrix leg expects {x.col_dims[t]}")
        row_dims[p - 1] = x.row_dims[t]
        col_dims[p - 1] = x.col_dims[t]
    others = [p for p in range(1, n + 1) if p not in legs]
    for p in others:
        if shape[p - 1] is None:
            raise ValueError(f"identity leg {p} needs a dimension")
    entries = {}
    for (r, c), value in x.items():
        for m in _multi_indices([shape[p - 1] for p in others]):
            row = [0] * n
            col = [0] * n
            for t, p in enumerate(legs):
                row[p - 1] = r[t]
                col[p - 1] = c[t]
            for s, p in enumerate(others):
                row[p - 1] = m[s]
                col[p - 1] = m[s]
            entries[(tuple(row), tuple(col))] = value
    return AlgMatrix(row_dims, col_dims, entries)


def leg_chain(factors: Sequence[tuple[AlgMatrix, Sequence[int]]], nlegs: int = 2) -> AlgMatrix:
    """Evaluate an ordered product of leg-placed factors, e.g. ``A_1 R A_2``.

    The identity sizes of each factor come from the dimensions of the
    partial product to its right; the column dimension of leg p is the
    column dimension of the rightmost factor touching p.
    """
    col_dims: list[int | None] = [None] * nlegs
    for matrix, legs in reversed(factors):
        for t, p in enumerate(legs):
            if col_dims[p - 1] is None:
                col_dims[p - 1] = matrix.col_dims[t]
    if any(d is None for d in col_dims):
        raise ValueError("every leg must be touched by some factor")
    acc = AlgMatrix.identity(col_dims)
    for matrix, legs in reversed(factors):
        placed = place_on_legs(matrix, legs, list(acc.row_dims))
        acc = alg_matmul(placed, acc)
    return acc


def omega(m: int, n: int) -> AlgMatrix:
    """The flip Omega from legs of dims (n, m) to (m, n): entries delta_il delta_jk."""
    return AlgMatrix((m, n), (n, m), {((i, j), (j, i)): 1 for i in range(1, m + 1) for j in range(1, n + 1)})


def generator_matrix(edge: str, kind: GenKind, rows: int, cols: int) -> AlgMatrix:
    """The matrix of generators X[i][j] = x(edge)^i_j."""
    return AlgMatrix((rows,), (cols,), {
        ((i,), (j,)): NCPoly.gen(GenId(edge, kind, i, j))
        for i in range(1, rows + 1)
        for j in range(1, cols + 1)
    })


# ---------------------------------------------------------------------------
# The R-matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RMatrix:
    """Sparse N^2 x N^2 tensor, ``entries[(i, j, k, l)] = R^{ij}_{kl}``."""

    n: int
    entries: Mapping[tuple[int, int, int, int], LaurentQ]

    def entry(self, i: int, j: int, k: int, l: int) -> LaurentQ:
        return self.entries.get((i, j, k, l), LaurentQ.zero())

    def as_alg(self) -> AlgMatrix:
        return AlgMatrix((self.n, self.n), (self.n, self.n), {
            ((i, j), (k, l)): v for (i, j, k, l), v in self.entries.items()
        })

    def specialize(self, q0) -> dict[tuple[int, int, int, int], Fraction]:
        return {k: v.evaluate(q0) for k, v in self.entries.items() if v.evaluate(q0)}


def build_r_matrix(n: int) -> RMatrix:
    """R^{ij}_{kl} = q^{d_ij} d_ik d_jl + (q - q^-1) theta(i - j) d_il d_jk."""
    if n < 1:
        raise ValueError(f"R-matrix dimension must be at least 1, got {n}")
    entries: dict[tuple[int, int, int, int], LaurentQ] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            entries[(i, j, i, j)] = LaurentQ.q() if i == j else LaurentQ.one()
            if i > j:
                entries[(i, j, j, i)] = LaurentQ.q_minus_q_inv()
    return RMatrix(n, entries)


def r_inverse(r: RMatrix) -> RMatrix:
    """Closed-form inverse: q^{-d_ij} d_ik d_jl - (q - q^-1) theta(i - j) d_il d_jk."""
    entries: dict[tuple[int, int, int, int], LaurentQ] = {}
    for i in range(1, r.n + 1):
        for j in range(1, r.n + 1):
            entries[(i, j, i, j)] = LaurentQ.monomial(-1) if i == j else LaurentQ.one()
            if i > j:
                entries[(i, j, j, i)] = -LaurentQ.q_minus_q_inv()
    return RMatrix(r.n, entries)


def flip(n: int) -> AlgMatrix:
    """The transposition tau of two N-dimensional legs."""
    return omega(n, n)


def _first_nonzero(m: AlgMatrix) -> dict:
    row, col, value = m.components()[0]
    return {"row": list(row), "col": list(col), "entry": str(value), "nonzero_entries": len(m.components())}


def qybe_check(n: int) -> CheckReport:
    """Braid relation for tau R on three legs, exactly over LaurentQ."""
    params = {"N": n}
    braid = alg_matmul(flip(n), build_r_matrix(n).as_alg())
    b12 = place_on_legs(braid, (1, 2), [n, n, n])
    b23 = place_on_legs(braid, (2, 3), [n, n, n])
    lhs = alg_matmul(alg_matmul(b12, b23), b12)
    rhs = alg_matmul(alg_matmul(b23, b12), b23)
    defect = lhs - rhs
    if defect.is_zero():
        return CheckReport.passed("qybe", params, {"entries_compared": (n ** 3) ** 2})
    return CheckReport.failed("qybe", params, _first_nonzero(defect))


def hecke_check(n: int) -> CheckReport:
    """tau R - R^-1 tau = (q - q^-1) id, exactly over LaurentQ."""
    params = {"N": n}
    r = build_r_matrix(n)
    tau = flip(n)
    lhs = alg_matmul(tau, r.as_alg()) - alg_matmul(r_inverse(r).as_alg(), tau)
    rhs = AlgMatrix.identity((n, n)).scale(LaurentQ.q_minus_q_inv())
    defect = lhs - rhs
    if defect.is_zero():
        return CheckReport.passed("hecke", params, {"entries_compared": (n * n) ** 2})
    return CheckReport.failed("hecke", params, _first_nonzero(defect))

"""Exact coefficient arithmetic.

Three coefficient types are used throughout the package:

* :class:`LaurentQ` - Laurent polynomials in ``q`` with rational coefficients.
  Every R-matrix entry and every generated relation coefficient lives here.
* :class:`RatQ` - reduced rational functions in ``q``. Gaussian elimination
  runs over this field so that ranks are exact.
* :class:`HbarSeries` - truncated power series in ``h`` whose coefficients are
  polynomials in the commuting formal parameters ``L_v`` (one per vertex).
  Used for the quasi-classical expansion at ``q = e^h``.

All values are immutable. Rationals are :class:`fractions.Fraction`; no
floating point is involved anywhere.
"""

from __future__ import annotations

import logging
import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

import sympy
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

logger = logging.getLogger(__name__)

Q_SYMBOL = sympy.Symbol("q")
H_SYMBOL = sympy.Symbol("h")

# Polynomial ring used for gcd computations in RatQ normalization
_QRING, _ = ring("q", QQ)

Scalar = Union[int, Fraction]


def _qq(value: Fraction) -> object:
    """Convert a Fraction to an element of sympy's QQ domain."""
    return QQ(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    """Convert a sympy rational (domain element or Rational) to a Fraction."""
    if isinstance(value, sympy.Basic):
        if not value.is_Rational:
            raise ValueError(f"non-rational coefficient: {value}")
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(value.numerator), int(value.denominator))


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class LaurentQ:
    """A Laurent polynomial in q with rational coefficients.

    The term map never stores zero coefficients, so two equal values always
    have identical term maps.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | None = None):
        clean: dict[int, Fraction] = {}
        for exp, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                clean[int(exp)] = coeff
        self._terms = dict(sorted(clean.items()))
        self._hash: int | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> LaurentQ:
        return cls()

    @classmethod
    def one(cls) -> LaurentQ:
        return cls({0: 1})

    @classmethod
    def constant(cls, value: Scalar) -> LaurentQ:
        return cls({0: value})

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> LaurentQ:
        return cls({exp: coeff})

    @classmethod
    def q(cls) -> LaurentQ:
        return cls({1: 1})

    @classmethod
    def q_minus_q_inv(cls) -> LaurentQ:
        """The ubiquitous factor q - q^-1."""
        return cls({1: 1, -1: -1})

    @classmethod
    def parse(cls, text: str) -> LaurentQ:
        """Parse text such as ``"q^2 - q^-2"`` or ``"1/2*q - 3"``."""
        num, den = _parse_q_expression(text)
        if not den.is_monomial():
            raise ValueError(f"not a Laurent polynomial: {text!r}")
        ((exp, coeff),) = den.terms.items()
        return num * LaurentQ.monomial(-exp, 1 / coeff)

    # -- structure --------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        """Copy of the exponent -> coefficient map, ascending exponents."""
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def min_exp(self) -> int:
        return next(iter(self._terms))

    def max_exp(self) -> int:
        return next(reversed(self._terms))

    def constant_term(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def shift(self, k: int) -> LaurentQ:
        """Multiply by q^k."""
        return LaurentQ({e + k: c for e, c in self._terms.items()})

    def evaluate(self, q0: Scalar) -> Fraction:
        """Evaluate at a nonzero rational q0."""
        q0 = Fraction(q0)
        if q0 == 0 and any(e < 0 for e in self._terms):
            raise ZeroDivisionError("negative power of q evaluated at 0")
        return sum((c * q0**e for e, c in self._terms.items()), Fraction(0))

    def to_poly(self) -> tuple[int, PolyElement]:
        """Split as q^shift * P with P a polynomial with nonzero constant term."""
        low = self.min_exp()
        poly = _QRING.from_dict({(e - low,): _qq(c) for e, c in self._terms.items()})
        return low, poly

    @classmethod
    def from_poly(cls, poly: PolyElement, shift: int = 0) -> LaurentQ:
        return cls({monom[0] + shift: _fraction(c) for monom, c in poly.items()})

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> LaurentQ | None:
        if isinstance(other, LaurentQ):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentQ.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentQ(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentQ:
        return LaurentQ({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentQ(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> LaurentQ:
        if exponent < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self._terms.items()
            return LaurentQ({e * exponent: Fraction(1) / c ** (-exponent)})
        result = LaurentQ.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentQ({str(self)!r})"

    def __str__(self) -> str:
        return _render_terms(
            [(c, _q_power(e)) for e, c in reversed(self._terms.items())]
        )


def laurent_normalize(raw: Iterable[tuple[int, Scalar]]) -> LaurentQ:
    """Collect a raw (exponent, coefficient) term list into canonical form."""
    acc: dict[int, Fraction] = {}
    for exp, coeff in raw:
        acc[exp] = acc.get(exp, Fraction(0)) + Fraction(coeff)
    return LaurentQ(acc)


def _q_power(exp: int) -> str:
    if exp == 0:
        return ""
    if exp == 1:
        return "q"
    return f"q^{exp}"


def _render_terms(terms: list[tuple[Fraction, str]]) -> str:
    """Render (coefficient, monomial-string) pairs as a signed sum."""
    if not terms:
        return "0"
    parts = []
    for coeff, mono in terms:
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def _laurent_from_sympy(expr: sympy.Expr) -> LaurentQ:
    poly = sympy.Poly(expr, Q_SYMBOL)
    out = {}
    for (exp,), coeff in poly.terms():
        out[exp] = _fraction(coeff)
    return LaurentQ(out)


def _parse_q_expression(text: str) -> tuple[LaurentQ, LaurentQ]:
    try:
        expr = sympy.parse_expr(text.replace("^", "**"), local_dict={"q": Q_SYMBOL})
    except (SyntaxError, TypeError, sympy.SympifyError) as exc:
        raise ValueError(f"cannot parse coefficient {text!r}: {exc}") from exc
    if expr.free_symbols - {Q_SYMBOL}:
        raise ValueError(f"unexpected symbols in {text!r}")
    num, den = sympy.fraction(sympy.together(expr))
    return _laurent_from_sympy(num), _laurent_from_sympy(den)


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


def _reduce_pair(num: LaurentQ, den: LaurentQ) -> tuple[LaurentQ, LaurentQ]:
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return LaurentQ.zero(), LaurentQ.one()
    if den.is_monomial():
        ((e, c),) = den.terms.items()
        return num * LaurentQ.monomial(-e, 1 / c), LaurentQ.one()
    num_shift, num_poly = num.to_poly()
    den_shift, den_poly = den.to_poly()
    _, num_poly, den_poly = num_poly.cofactors(den_poly)
    num_red = LaurentQ.from_poly(num_poly, num_shift - den_shift)
    den_red = LaurentQ.from_poly(den_poly)
    # the reduced denominator still has a nonzero constant term
    lead = den_red.terms[den_red.max_exp()]
    scale = LaurentQ.constant(1 / lead)
    return num_red * scale, den_red * scale


class RatQ:
    """A reduced rational function num/den in q.

    The denominator is monic with lowest exponent zero, so equality is a
    structural comparison.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentQ | Scalar = 0, den: LaurentQ | Scalar | None = None):
        num = LaurentQ._coerce(num)
        den = LaurentQ.one() if den is None else LaurentQ._coerce(den)
        if num is None or den is None:
            raise TypeError("RatQ expects LaurentQ, int or Fraction parts")
        self.num, self.den = _reduce_pair(num, den)
        self._hash: int | None = None

    @classmethod
    def _make(cls, num: LaurentQ, den: LaurentQ) -> RatQ:
        obj = cls.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def coerce(cls, value) -> RatQ:
        if isinstance(value, RatQ):
            return value
        if isinstance(value, LaurentQ):
            return cls._make(value, LaurentQ.one())
        if isinstance(value, (int, Fraction)):
            return cls._make(LaurentQ.constant(value), LaurentQ.one())
        raise TypeError(f"cannot convert {type(value).__name__} to RatQ")

    @classmethod
    def zero(cls) -> RatQ:
        return cls._make(LaurentQ.zero(), LaurentQ.one())

    @classmethod
    def one(cls) -> RatQ:
        return cls._make(LaurentQ.one(), LaurentQ.one())

    @classmethod
    def parse(cls, text: str) -> RatQ:
        """Parse text such as ``"(q^2 - 1)/(q - 1)"``."""
        num, den = _parse_q_expression(text)
        return cls(num, den)

    def is_laurent(self) -> bool:
        return self.den.is_constant()

    def as_laurent(self) -> LaurentQ:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def evaluate(self, q0: Scalar) -> Fraction:
        den = self.den.evaluate(q0)
        if den == 0:
            raise ZeroDivisionError(f"denominator of {self} vanishes at q={q0}")
        return self.num.evaluate(q0) / den

    def inverse(self) -> RatQ:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatQ(self.den, self.num)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _other(value) -> RatQ | None:
        try:
            return RatQ.coerce(value)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if self.is_laurent() and other.is_laurent():
            return RatQ._make(self.num + other.num, LaurentQ.one())
        if self.den == other.den:
            return RatQ(self.num + other.num, self.den)
        return RatQ(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> RatQ:
        return RatQ._make(-self.num, self.den)

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if self.is_laurent() and other.is_laurent():
            return RatQ._make(self.num * other.num, LaurentQ.one())
        return RatQ(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatQ(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int) -> RatQ:
        base = self if exponent >= 0 else self.inverse()
        result = RatQ.one()
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"RatQ({str(self)!r})"

    def __str__(self) -> str:
        if self.is_laurent():
            return str(self.num)
        return f"({self.num})/({self.den})"


def ratfunc_reduce(num: LaurentQ, den: LaurentQ) -> RatQ:
    """Build the reduced, canonically normalized fraction num/den."""
    return RatQ(num, den)


# ---------------------------------------------------------------------------
# Truncated series in h
# ---------------------------------------------------------------------------


def lambda_ring(vertex_ids: Iterable[str]) -> PolyRing:
    """Polynomial ring over QQ in the formal parameters L_v."""
    names = [f"L_{v}" for v in vertex_ids] or ["L"]
    return ring(",".join(names), QQ)[0]


DEFAULT_LAMBDA_RING = lambda_ring([])


class HbarSeries:
    """Power series sum c_k h^k truncated after h^order.

    Coefficients are elements of a sympy polynomial ring in the L_v.
    """

    __slots__ = ("order", "ring", "_coeffs")

    def __init__(self, coeffs: Iterable, order: int, lam_ring: PolyRing | None = None):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        self.order = order
        self.ring = lam_ring or DEFAULT_LAMBDA_RING
        padded = [self._lift(c) for c in list(coeffs)[: order + 1]]
        padded += [self.ring.zero] * (order + 1 - len(padded))
        self._coeffs = tuple(padded)

    def _lift(self, value) -> PolyElement:
        if isinstance(value, PolyElement):
            return value
        return self.ring.ground_new(_qq(Fraction(value)))

    @classmethod
    def constant(cls, value, order: int, lam_ring: PolyRing | None = None) -> HbarSeries:
        return cls([value], order, lam_ring)

    @classmethod
    def hbar(cls, order: int, lam_ring: PolyRing | None = None) -> HbarSeries:
        return cls([0, 1], order, lam_ring)

    @classmethod
    def parse(cls, text: str, lam_ring: PolyRing | None = None) -> HbarSeries:
        """Parse text such as ``"1 + 2*h^2*L_v + O(h^3)"``."""
        lam_ring = lam_ring or DEFAULT_LAMBDA_RING
        match = re.search(r"\+\s*O\(\s*h(?:\^(\d+))?\s*\)\s*$", text)
        if not match:
            raise ValueError(f"series needs a trailing O(h^k) term: {text!r}")
        order = int(match.group(1) or 1) - 1
        body = text[: match.start()].strip() or "0"
        names = {str(s): s for s in lam_ring.symbols}
        names["h"] = H_SYMBOL
        try:
            expr = sympy.parse_expr(body.replace("^", "**"), local_dict=names)
        except (SyntaxError, TypeError, sympy.SympifyError) as exc:
            raise ValueError(f"cannot parse series {text!r}: {exc}") from exc
        coeffs = [lam_ring.zero for _ in range(order + 1)]
        poly = sympy.Poly(expr, H_SYMBOL, *lam_ring.symbols)
        for monom, coeff in poly.terms():
            if monom[0] <= order and coeff != 0:
                term = lam_ring.from_dict({tuple(monom[1:]): _qq(_fraction(coeff))})
                coeffs[monom[0]] = coeffs[monom[0]] + term
        return cls(coeffs, order, lam_ring)

    def coefficient(self, k: int) -> PolyElement:
        if k > self.order:
            raise ValueError(f"coefficient h^{k} is beyond truncation order {self.order}")
        return self._coeffs[k]

    @property
    def coefficients(self) -> tuple[PolyElement, ...]:
        return self._coeffs

    def truncate(self, order: int) -> HbarSeries:
        return HbarSeries(self._coeffs[: order + 1], min(order, self.order), self.ring)

    def exp(self) -> HbarSeries:
        """exp of a series with vanishing constant term."""
        if self._coeffs[0]:
            raise ValueError("exp needs a series without constant term")
        result = HbarSeries.constant(1, self.order, self.ring)
        power = HbarSeries.constant(1, self.order, self.ring)
        for n in range(1, self.order + 1):
            power = power * self
            result = result + power * Fraction(1, math.factorial(n))
        return result

    # -- arithmetic -------------------------------------------------------

    def _other(self, value) -> HbarSeries | None:
        if isinstance(value, HbarSeries):
            if value.ring != self.ring:
                raise ValueError("series over different parameter rings")
            return value
        if isinstance(value, (int, Fraction, PolyElement)):
            return HbarSeries.constant(value, self.order, self.ring)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        order = min(self.order, other.order)
        return HbarSeries(
            [a + b for a, b in zip(self._coeffs, other._coeffs)][: order + 1], order, self.ring
        )

    __radd__ = __add__

    def __neg__(self) -> HbarSeries:
        return HbarSeries([-c for c in self._coeffs], self.order, self.ring)

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            scale = self._lift(Fraction(other))
            return HbarSeries([c * scale for c in self._coeffs], self.order, self.ring)
        other = self._other(other)
        if other is None:
            return NotImplemented
        order = min(self.order, other.order)
        out = [self.ring.zero] * (order + 1)
        for i, a in enumerate(self._coeffs[: order + 1]):
            if not a:
                continue
            for j, b in enumerate(other._coeffs[: order + 1 - i]):
                if b:
                    out[i + j] = out[i + j] + a * b
        return HbarSeries(out, order, self.ring)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return any(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = HbarSeries.constant(other, self.order, self.ring)
        if not isinstance(other, HbarSeries):
            return NotImplemented
        return self.order == other.order and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.order, tuple(str(c) for c in self._coeffs)))

    def __repr__(self) -> str:
        return f"HbarSeries({str(self)!r})"

    def __str__(self) -> str:
        terms: list[tuple[Fraction, str]] = []
        for k, coeff in enumerate(self._coeffs):
            for monom, c in sorted(coeff.items(), reverse=True):
                factors = []
                if k:
                    factors.append("h" if k == 1 else f"h^{k}")
                for sym, e in zip(self.ring.symbols, monom):
                    if e:
                        factors.append(str(sym) if e == 1 else f"{sym}^{e}")
                terms.append((_fraction(c), "*".join(factors)))
        tail = "O(h)" if self.order == 0 else f"O(h^{self.order + 1})"
        if not terms:
            return f"0 + {tail}"
        return f"{_render_terms(terms)} + {tail}"


def hbar_substitute(p: LaurentQ, order: int, lam_ring: PolyRing | None = None) -> HbarSeries:
    """Replace q^k by the Taylor expansion of e^{kh}, truncated after h^order."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    coeffs = []
    for n in range(order + 1):
        total = sum((c * Fraction(e) ** n for e, c in p.terms.items()), Fraction(0))
        coeffs.append(total / math.factorial(n))
    return HbarSeries(coeffs, order, lam_ring)

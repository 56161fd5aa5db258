"""Tests for freealg module."""

from fractions import Fraction

import pytest

from src.coeff import LaurentQ, RatQ
from src.freealg import (
    AlgMatrix,
    GenId,
    GenKind,
    NCPoly,
    alg_matmul,
    build_r_matrix,
    flip,
    generator_matrix,
    generator_rank,
    hecke_check,
    leg_chain,
    omega,
    place_on_legs,
    qybe_check,
    r_inverse,
    word_compare,
    word_key,
)
from src.models import CheckStatus

Q = LaurentQ.q()
QQ_INV = LaurentQ.q_minus_q_inv()


@pytest.fixture
def x():
    return GenId.a("e", 1, 1)


@pytest.fixture
def y():
    return GenId.d("e", 1, 1)


class TestGenId:
    """Tests for generator identifiers and word order."""

    def test_render(self):
        """Test plain and pretty rendering."""
        assert GenId.a("e", 1, 2).render() == "a[e]^1_2"
        assert GenId.d("e", 2, 1).render(pretty=True) == "∂[e]^2_1"
        assert GenId.inv("g[e]").render() == "inv[g[e]]"
        assert GenId.l(1, 2).render() == "l^1_2"

    def test_kind_order(self):
        """Test a-generators sort before d-generators and inverses."""
        gens = [GenId.inv("g"), GenId.d("e", 1, 1), GenId.a("e", 1, 1)]

        assert [g.kind for g in sorted(gens)] == [GenKind.A, GenKind.D, GenKind.INV]

    def test_lexicographic_tie_break(self):
        """Test a^1_1 a^1_2 precedes a^1_2 a^1_1."""
        u = (GenId.a("e", 1, 1), GenId.a("e", 1, 2))
        v = (GenId.a("e", 1, 2), GenId.a("e", 1, 1))

        assert word_compare(u, v) == -1
        assert word_compare(v, u) == 1
        assert word_compare(u, u) == 0

    def test_edge_ids_compare_numerically(self):
        """Test e2 sorts before e10 without a presentation."""
        e2, e10 = GenId.a("e2", 1, 1), GenId.a("e10", 1, 1)

        assert sorted([e10, e2]) == [e2, e10]
        assert word_compare((e2, e10), (e10, e2)) == -1

    def test_rank_overrides_ids(self):
        """Test a presentation rank orders generators by list position."""
        e2, e10 = GenId.a("e2", 1, 1), GenId.a("e10", 1, 1)
        rank = generator_rank([e10, e2])

        assert word_key((e10,), rank) < word_key((e2,), rank)

    def test_render_follows_edge_number(self):
        """Test rendering without a rank lists the e10 term first."""
        e2, e10 = GenId.a("e2", 1, 1), GenId.a("e10", 1, 1)

        assert (NCPoly.gen(e2) + NCPoly.gen(e10)).render() == "a[e10]^1_1 + a[e2]^1_1"

    def test_longer_words_are_larger(self, x):
        """Test degree dominates the order."""
        assert word_compare((x,), (x, x)) == -1

    def test_schema(self):
        """Test generator schema fields."""
        g = GenId.d("e", 2, 1)

        assert g.to_schema() == {"edge": "e", "kind": "d", "up": 2, "lo": 1}
        assert GenId.from_schema(g.to_schema()) == g


class TestNCPoly:
    """Tests for noncommutative polynomials."""

    def test_noncommutative_product(self, x, y):
        """Test x*y and y*x are different words."""
        p = NCPoly.gen(x) * NCPoly.gen(y)

        assert p.words() == [(x, y)]
        assert p != NCPoly.gen(y) * NCPoly.gen(x)

    def test_cancellation_drops_terms(self, x, y):
        """Test cancelled coefficients disappear."""
        p = NCPoly.gen(x) + NCPoly.gen(y)
        p = p - NCPoly.gen(x)

        assert p == NCPoly.gen(y)
        assert (p - p).is_zero()

    def test_scalars_are_central(self, x):
        """Test scalar multiplication from either side."""
        p = NCPoly.gen(x)

        assert 2 * p == p * 2
        assert (Q * p).coefficient((x,)) == RatQ.coerce(Q)

    def test_degree(self, x, y):
        """Test degree and homogeneous components."""
        p = NCPoly.word((x, y)) + NCPoly.gen(x) + 3

        assert p.degree() == 2
        assert p.min_degree() == 0
        assert p.homogeneous_component(1) == NCPoly.gen(x)
        assert p.constant_term() == 3
        assert NCPoly.zero().degree() == -1

    def test_render(self, x, y):
        """Test rendering with Laurent coefficients."""
        p = NCPoly.word((y, x), Q) - 1

        assert p.render() == "q*d[e]^1_1.a[e]^1_1 - 1"
        assert NCPoly.word((x,), QQ_INV).render() == "(q - q^-1)*a[e]^1_1"
        assert NCPoly.zero().render() == "0"

    def test_specialize(self, x):
        """Test specializing coefficients at q = 1."""
        p = NCPoly.word((x,), QQ_INV) + NCPoly.word((x, x), Q)

        assert p.at_one() == NCPoly.word((x, x))
        assert p.specialize(2).coefficient((x,)) == Fraction(3, 2)

    def test_substitute(self, x, y):
        """Test substitution is an algebra homomorphism."""
        p = NCPoly.word((x, y)) - NCPoly.word((y, x))
        swapped = p.substitute({x: NCPoly.gen(y), y: NCPoly.gen(x)})

        assert swapped == -p

    def test_schema(self, x, y):
        """Test the polynomial schema keeps exact coefficients."""
        p = NCPoly.word((y, x), RatQ(1, LaurentQ({1: 1, 0: -1}))) - Fraction(1, 3)
        data = p.to_schema()

        assert data[0]["word"][0]["kind"] == "d"
        assert data[1]["coeff"] == {"num": [[0, "-1/3"]], "den": [[0, "1"]]}
        assert NCPoly.from_schema(data) == p


class TestRMatrix:
    """Tests for the standard R-matrix."""

    def test_n1(self):
        """Test N=1 is the single entry q."""
        r = build_r_matrix(1)

        assert r.entries == {(1, 1, 1, 1): Q}

    def test_n2_entries(self):
        """Test the five nonzero entries at N=2."""
        r = build_r_matrix(2)

        assert r.entries == {
            (1, 1, 1, 1): Q,
            (2, 2, 2, 2): Q,
            (1, 2, 1, 2): LaurentQ.one(),
            (2, 1, 2, 1): LaurentQ.one(),
            (2, 1, 1, 2): QQ_INV,
        }

    def test_n2_at_one_is_identity(self):
        """Test R is the identity at q = 1."""
        special = build_r_matrix(2).specialize(1)

        assert special == {(i, j, i, j): 1 for i in (1, 2) for j in (1, 2)}

    def test_invalid_dimension(self):
        """Test N < 1 is rejected."""
        with pytest.raises(ValueError):
            build_r_matrix(0)

    def test_inverse_entries(self):
        """Test the closed-form inverse entries."""
        assert r_inverse(build_r_matrix(1)).entries == {(1, 1, 1, 1): LaurentQ.monomial(-1)}
        assert r_inverse(build_r_matrix(2)).entry(2, 1, 1, 2) == -QQ_INV

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_inverse_product(self, n):
        """Test R R^-1 is the identity."""
        r = build_r_matrix(n)
        product = alg_matmul(r.as_alg(), r_inverse(r).as_alg())

        assert product == AlgMatrix.identity((n, n))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_qybe(self, n):
        """Test the braid relation holds exactly."""
        report = qybe_check(n)

        assert report.status is CheckStatus.PASS
        assert report.witness["entries_compared"] == n ** 6

    @pytest.mark.parametrize("n", [1, 2])
    def test_hecke(self, n):
        """Test the Hecke relation holds exactly."""
        assert hecke_check(n).ok

    def test_hecke_at_one(self):
        """Test both sides of the Hecke relation vanish at q = 1."""
        r = build_r_matrix(2)
        tau = flip(2)
        lhs = alg_matmul(tau, r.as_alg()) - alg_matmul(r_inverse(r).as_alg(), tau)

        assert lhs.map_entries(lambda p: p.at_one()).is_zero()


class TestLegs:
    """Tests for leg placement and leg chains."""

    def test_r21(self):
        """Test R on legs (2, 1) swaps both index pairs."""
        r = build_r_matrix(2).as_alg()
        r21 = place_on_legs(r, (2, 1), [2, 2])

        assert r21.entry((1, 2), (2, 1)) == NCPoly.const(QQ_INV)
        assert r21.entry((2, 1), (1, 2)).is_zero()

    def test_identity_on_other_legs(self):
        """Test a one-leg matrix is padded with identities."""
        a = generator_matrix("e", GenKind.A, 1, 2)
        placed = place_on_legs(a, (2,), [3, 2])

        assert placed.row_dims == (3, 1)
        assert placed.col_dims == (3, 2)
        assert placed.entry((2, 1), (2, 2)) == NCPoly.gen(GenId.a("e", 1, 2))
        assert placed.entry((2, 1), (1, 2)).is_zero()

    def test_bad_legs(self):
        """Test invalid leg positions are rejected."""
        r = build_r_matrix(2).as_alg()

        with pytest.raises(ValueError):
            place_on_legs(r, (1, 1), [2, 2])
        with pytest.raises(ValueError):
            place_on_legs(r, (1, 3), [2, 2])

    def test_chain_order(self):
        """Test factors multiply left to right in the chain."""
        xe = generator_matrix("e", GenKind.A, 1, 1)
        xf = generator_matrix("f", GenKind.A, 1, 1)
        ge, gf = NCPoly.gen(GenId.a("e", 1, 1)), NCPoly.gen(GenId.a("f", 1, 1))

        forward = leg_chain([(xf, (1,)), (xe, (2,))])
        backward = leg_chain([(xe, (2,)), (xf, (1,))])

        assert forward.entry((1, 1), (1, 1)) == gf * ge
        assert backward.entry((1, 1), (1, 1)) == ge * gf

    def test_chain_needs_every_leg(self):
        """Test a chain that leaves a leg untouched is rejected."""
        xe = generator_matrix("e", GenKind.A, 1, 1)

        with pytest.raises(ValueError, match="every leg"):
            leg_chain([(xe, (1,))])

    def test_omega(self):
        """Test the flip between legs of different sizes."""
        w = omega(1, 2)

        assert w.row_dims == (1, 2)
        assert w.col_dims == (2, 1)
        assert [(r, c) for r, c, _ in w.components()] == [((1, 1), (1, 1)), ((1, 2), (2, 1))]

    def test_matmul_shape_mismatch(self):
        """Test incompatible products raise."""
        a = generator_matrix("e", GenKind.A, 1, 2)

        with pytest.raises(ValueError):
            alg_matmul(a, a)

    def test_matmul_identity(self):
        """Test X Id = X."""
        a = generator_matrix("e", GenKind.A, 2, 2)

        assert alg_matmul(a, AlgMatrix.identity((2,))) == a

"""Tests for degeneration module."""

from pathlib import Path

import pytest

from src.degeneration import (
    _at_one,
    classical_bracket,
    classical_limit_check,
    classical_moment_expr,
    classical_ring,
    commutative_image,
    default_character,
    hbar_moment_check,
    hbar_moment_series,
    hbar_moment_table,
)
from src.freealg import GenId, NCPoly
from src.models import CheckStatus
from src.quiver import load_quiver
from src.relations import AlgebraKind, Presentation, UnsupportedError, full_presentation

QUIVERS = Path(__file__).parent.parent / "quivers"

A = GenId.a("e", 1, 1)
D = GenId.d("e", 1, 1)


@pytest.fixture
def kronecker():
    return load_quiver(QUIVERS / "kronecker_1_1.json")


def custom(p: Presentation, *relations: NCPoly) -> Presentation:
    return Presentation(p.quiver, p.kind, p.generators, relations, ("custom",) * len(relations))


class TestClassicalLimit:
    """Tests for the q = 1 limit of presentations."""

    def test_bracket(self):
        """Test the classical Weyl pairing."""
        assert classical_bracket(A, D) == -1
        assert classical_bracket(D, A) == 1
        assert classical_bracket(A, A) == 0
        assert classical_bracket(A, GenId.d("f", 1, 1)) == 0

    def test_weyl(self, kronecker):
        """Test Kronecker (1,1) degenerates to d a - a d - 1."""
        report = classical_limit_check(full_presentation(kronecker, AlgebraKind.DQ))

        assert report.ok
        assert report.witness == {"commutators": 0, "weyl": 1}

    def test_quantum_plane(self):
        """Test coordinate relations degenerate to commutators."""
        q = load_quiver(QUIVERS / "kronecker_1_2.json")
        report = classical_limit_check(full_presentation(q, AlgebraKind.OQ))

        assert report.ok
        assert report.witness == {"commutators": 1, "weyl": 0}

    def test_loop(self):
        """Test the Jordan loop relation has no classical constant."""
        q = load_quiver(QUIVERS / "jordan_1.json")

        assert classical_limit_check(full_presentation(q, AlgebraKind.DQ)).ok

    def test_linear_part(self, kronecker):
        """Test a relation with a linear term fails."""
        p = custom(full_presentation(kronecker, AlgebraKind.DQ), NCPoly.gen(A))
        report = classical_limit_check(p)

        assert report.status is CheckStatus.FAIL
        assert report.witness["reason"] == "linear part does not vanish"

    def test_not_a_commutator(self, kronecker):
        """Test a square is not a sum of commutators."""
        p = custom(full_presentation(kronecker, AlgebraKind.DQ), NCPoly.word((A, A)))

        assert classical_limit_check(p).witness["reason"] == "quadratic part is not a sum of commutators"

    def test_wrong_constant(self, kronecker):
        """Test the Weyl constant must match the classical bracket."""
        wrong = NCPoly.word((D, A)) - NCPoly.word((A, D)) + 1
        report = classical_limit_check(custom(full_presentation(kronecker, AlgebraKind.DQ), wrong))

        assert report.status is CheckStatus.FAIL
        assert report.witness["reason"].startswith("constant term 1")

    def test_degree_three(self, kronecker):
        """Test cubic relations fail."""
        p = custom(full_presentation(kronecker, AlgebraKind.DQ), NCPoly.word((A, A, D)))

        assert classical_limit_check(p).witness["reason"] == "degree above 2"


class TestClassicalMoment:
    """Tests for commutative images and classical moment maps."""

    def test_commutative_image(self, kronecker):
        """Test d a and a d agree commutatively."""
        cr = classical_ring(kronecker)
        image = commutative_image(NCPoly.word((D, A)) - NCPoly.word((A, D)), cr, _at_one(cr))

        assert not image

    def test_inverse_has_no_counterpart(self, kronecker):
        """Test adjoined inverses are refused."""
        cr = classical_ring(kronecker)

        with pytest.raises(UnsupportedError):
            commutative_image(NCPoly.gen(GenId.inv("g")), cr, _at_one(cr))

    def test_head_and_tail(self, kronecker):
        """Test the moment map is d a at the head and -a d at the tail."""
        cr = classical_ring(kronecker)

        assert classical_moment_expr(kronecker, "v", cr).entry(1, 1) == cr.gens[D] * cr.gens[A]
        assert classical_moment_expr(kronecker, "u", cr).entry(1, 1) == -cr.gens[A] * cr.gens[D]

    def test_loop_contributes_nothing(self):
        """Test a loop's d a - a d cancels commutatively."""
        q = load_quiver(QUIVERS / "calogero_moser_1_1.json")
        cr = classical_ring(q)
        expr = classical_moment_expr(q, "v", cr)

        assert expr.entry(1, 1) == cr.gens[D] * cr.gens[A]
        assert expr.dim == 1


class TestHbarExpansion:
    """Tests for the h-expansion of the moment ideal."""

    def test_default_character(self, kronecker):
        """Test xi_v = 1 + h^2 L_v at order 2."""
        xi = default_character(kronecker, 2).at("v")

        assert xi.coefficient(0) == 1
        assert not xi.coefficient(1)
        assert str(xi.coefficient(2)) == "L_v"

    def test_loops_refused(self):
        """Test loop quivers have no h-expansion."""
        with pytest.raises(UnsupportedError, match="loop"):
            hbar_moment_series(load_quiver(QUIVERS / "jordan_1.json"))

    def test_negative_order(self, kronecker):
        """Test negative orders are rejected."""
        with pytest.raises(ValueError):
            hbar_moment_series(kronecker, order=-1)

    def test_table_needs_order_two(self, kronecker):
        """Test the table needs the h^2 coefficient."""
        with pytest.raises(ValueError):
            hbar_moment_table(kronecker, order=1)

    def test_head_coefficients(self, kronecker):
        """Test the head entry is 2 h^2 d a - h^2 L_v."""
        cr = classical_ring(kronecker)
        rows = {row.vertex: row for row in hbar_moment_table(kronecker)}
        head = rows["v"]

        assert not head.coefficients[0]
        assert not head.coefficients[1]
        assert head.coefficients[2] == 2 * cr.gens[D] * cr.gens[A] - cr.lam["v"]
        assert head.coefficients[2] == head.expected

    def test_tail_coefficients(self, kronecker):
        """Test the tail entry is -2 h^2 a d - h^2 L_u."""
        cr = classical_ring(kronecker)
        tail = {row.vertex: row for row in hbar_moment_table(kronecker)}["u"]

        assert tail.coefficients[2] == -2 * cr.gens[A] * cr.gens[D] - cr.lam["u"]

    def test_unscaled(self, kronecker):
        """Test t = 0 leaves only the character."""
        cr = classical_ring(kronecker)
        head = {row.vertex: row for row in hbar_moment_table(kronecker, scale_t=False)}["v"]

        assert head.coefficients[2] == -cr.lam["v"]
        assert head.expected == -cr.lam["v"]

    def test_to_dict(self, kronecker):
        """Test rows serialize to strings."""
        data = hbar_moment_table(kronecker)[0].to_dict()

        assert data["vertex"] == "u"
        assert len(data["coefficients"]) == 3
        assert "expected_h2" in data

    @pytest.mark.parametrize("name", ["kronecker_1_1", "kronecker_1_2", "kronecker_2_2", "a2", "star"])
    def test_check_passes(self, name):
        """Test the h^2 coefficient matches on loop-free quivers."""
        report = hbar_moment_check(load_quiver(QUIVERS / f"{name}.json"))

        assert report.ok
        assert report.witness["scale"] == 2

"""Tests for identities module."""

from pathlib import Path

import pytest

from src.coeff import LaurentQ
from src.freealg import GenId, GenKind, NCPoly
from src.identities import (
    VertexAction,
    equivariance_check,
    fourier_check,
    fourier_images,
    invert_monomial,
    loop_moment_check,
    manyrelns_check,
    manyrelns_components,
    moment_condition_check,
    reflection_check,
    representation_entry,
    vertex_commutation_check,
)
from src.models import CheckStatus
from src.moment import edge_moment_alpha_bar, edge_moment_beta, localized_presentation
from src.quiver import load_quiver
from src.relations import AlgebraKind, Presentation, UnsupportedError, full_presentation
from src.verify import IdealEngine

QUIVERS = Path(__file__).parent.parent / "quivers"


@pytest.fixture
def kronecker():
    return load_quiver(QUIVERS / "kronecker_1_1.json")


@pytest.fixture
def weyl(kronecker):
    return full_presentation(kronecker, AlgebraKind.DQ)


def _commutator_plane(plane: Presentation) -> Presentation:
    x1, x2 = GenId.a("e", 1, 1), GenId.a("e", 1, 2)
    relation = NCPoly.word((x1, x2)) - NCPoly.word((x2, x1))
    return Presentation(plane.quiver, plane.kind, plane.generators, (relation,), ("custom",))


class TestReflection:
    """Tests for reflection_check."""

    def test_one_dimensional(self, kronecker, weyl):
        """Test a 1x1 moment matrix has no reflection components."""
        report = reflection_check(edge_moment_beta(kronecker, "e"), weyl, D=2)

        assert report.ok
        assert report.witness["components"] == 0

    def test_parameters(self, kronecker, weyl):
        """Test the report names the side and vertex."""
        report = reflection_check(edge_moment_alpha_bar(kronecker, "e"), weyl, D=2)

        assert report.parameters["side"] == "alpha_bar"
        assert report.parameters["vertex"] == "u"

    def test_matrix_head(self):
        """Test the 2x2 head moment matrix of Kronecker (1,2)."""
        q = load_quiver(QUIVERS / "kronecker_1_2.json")
        p = full_presentation(q, AlgebraKind.DQ)

        assert reflection_check(edge_moment_beta(q, "e"), p, D=4).ok


class TestMomentCondition:
    """Tests for the edge moment map condition."""

    def test_kronecker(self, kronecker, weyl):
        """Test g a = q^2 a g and g d = q^-2 d g at d = 1."""
        report = moment_condition_check(kronecker, "e", weyl, D=4)

        assert report.ok
        assert report.parameters["dims"] == [1, 1]

    def test_refuses_loops(self):
        """Test loops are reported as unsupported."""
        q = load_quiver(QUIVERS / "jordan_1.json")
        report = moment_condition_check(q, "l", full_presentation(q, AlgebraKind.DQ))

        assert report.status is CheckStatus.INCONCLUSIVE
        assert report.witness["reason"].startswith("unsupported")

    def test_refuses_large_dimensions(self):
        """Test dimensions above two are reported as unsupported."""
        q = load_quiver(QUIVERS / "quantum_plane_3.json")
        report = moment_condition_check(q, "e", full_presentation(q, AlgebraKind.DQ))

        assert report.status is CheckStatus.INCONCLUSIVE


class TestManyRelns:
    """Tests for the seven exchange identities."""

    def test_components_cover_seven_items(self, kronecker):
        """Test components are labelled by item."""
        labels = {label.split("[")[0] for label, _ in manyrelns_components(kronecker, kronecker.edge("e"))}

        assert labels <= {f"item{n}" for n in range(1, 8)}

    def test_first_item_is_free(self, kronecker):
        """Test g^beta D = D g^alpha holds in the free algebra."""
        items = [p for label, p in manyrelns_components(kronecker, kronecker.edge("e")) if label.startswith("item1")]

        assert items == []

    def test_kronecker(self, kronecker, weyl):
        """Test every identity holds for Kronecker (1,1)."""
        assert manyrelns_check(kronecker, "e", weyl, D=4).ok


class TestFourier:
    """Tests for the q-Fourier transform."""

    def test_images(self, kronecker):
        """Test a maps to d and g^-1 maps to q^-2 g."""
        p, images = fourier_images(kronecker, kronecker.edge("e"))
        a, d = GenId.a("e", 1, 1), GenId.d("e", 1, 1)

        assert images[a] == NCPoly.gen(d)
        assert p.generators[-1] == GenId.inv("g[e]")
        assert images[GenId.inv("g[e]")] == p.inverses[0].element.scale(LaurentQ.monomial(-2))

    def test_images_refuse_matrix_moment(self):
        """Test a 2x2 head moment cannot be inverted for the transform."""
        q = load_quiver(QUIVERS / "kronecker_1_2.json")

        with pytest.raises(UnsupportedError, match="matrix inverses"):
            fourier_images(q, q.edge("e"))

    def test_variant_mismatch(self, kronecker):
        """Test asking for the loop variant on an ordinary edge."""
        with pytest.raises(ValueError, match="nonloop"):
            fourier_check(kronecker, "e", "loop")

    def test_requires_dimension_one(self):
        """Test the transform is refused at d = 2."""
        report = fourier_check(load_quiver(QUIVERS / "jordan_2.json"), "l")

        assert report.status is CheckStatus.INCONCLUSIVE
        assert report.witness["reason"] == "unsupported: requires d=1"
        assert report.parameters["variant"] == "loop"

    @pytest.mark.slow
    def test_nonloop(self, kronecker):
        """Test the transform respects every relation and F^2(a) = -a g^-1."""
        report = fourier_check(kronecker, "e", D=6)

        assert report.ok
        assert "f2_a" in report.witness

    @pytest.mark.slow
    def test_loop(self):
        """Test the loop transform at d = 1."""
        assert fourier_check(load_quiver(QUIVERS / "jordan_1.json"), "l", D=6).ok


class TestLoopMoment:
    """Tests for the loop moment image."""

    @pytest.mark.slow
    def test_jordan(self):
        """Test d a^-1 d^-1 a = q^2 for the Jordan quiver."""
        report = loop_moment_check(load_quiver(QUIVERS / "jordan_1.json"), "l", D=6)

        assert report.ok
        assert report.parameters["expected"] == "q^2"

    def test_matrix_inverse_refused(self):
        """Test the d = 2 loop is inconclusive."""
        report = loop_moment_check(load_quiver(QUIVERS / "jordan_2.json"), "l")

        assert report.status is CheckStatus.INCONCLUSIVE
        assert "matrix inverses" in report.witness["reason"]


class TestVertexCommutation:
    """Tests for vertex_commutation_check."""

    def test_requires_dimension_one(self):
        """Test dimension vectors other than all-ones are refused."""
        report = vertex_commutation_check(load_quiver(QUIVERS / "kronecker_1_2.json"))

        assert report.status is CheckStatus.INCONCLUSIVE

    def test_single_vertex(self):
        """Test a single vertex has nothing to commute."""
        report = vertex_commutation_check(load_quiver(QUIVERS / "jordan_1.json"))

        assert report.ok
        assert report.witness["components"] == 0

    def test_localization_needed(self, kronecker):
        """Test the presentation used carries the tail inverse."""
        assert localized_presentation(kronecker).inverse_symbol("gbar[e]") == GenId.inv("gbar[e]")

    def test_invert_monomial(self, kronecker):
        """Test a lone inverse symbol is replaced by the element it inverts."""
        p = localized_presentation(kronecker)
        element = next(spec.element for spec in p.inverses if spec.symbol.tag == "gbar[e]")

        assert invert_monomial(p, NCPoly.gen(GenId.inv("gbar[e]"))) == element
        assert all(g.kind is not GenKind.INV for g in element.generators())

    def test_invert_monomial_rejects_mixed(self, kronecker):
        """Test sums and words with ordinary generators are left alone."""
        p = localized_presentation(kronecker)
        inv = NCPoly.gen(GenId.inv("gbar[e]"))
        a = NCPoly.gen(GenId.a("e", 1, 1))

        assert invert_monomial(p, inv + 1) is None
        assert invert_monomial(p, inv * a) is None
        assert invert_monomial(p, NCPoly.one()) is None

    @pytest.mark.slow
    def test_tail_elements_commute(self):
        """Test the two tail elements of the star commute in D_q."""
        star = load_quiver(QUIVERS / "star.json")
        local = localized_presentation(star)
        tails = {spec.symbol.tag: spec.element for spec in local.inverses}
        g1, g2 = tails["gbar[e1]"], tails["gbar[e2]"]
        engine = IdealEngine(full_presentation(star, AlgebraKind.DQ))

        report = engine.certify("tails", {}, [("[x1,x2]", g1 * g2 - g2 * g1)], 6)

        assert report.ok

    @pytest.mark.slow
    def test_star_does_not_fail(self):
        """Test the star's vertex moments are checked without inverse symbols and never fail."""
        report = vertex_commutation_check(load_quiver(QUIVERS / "star.json"), 6)

        assert report.status is not CheckStatus.FAIL
        assert report.parameters["localized"] is False


class TestEquivariance:
    """Tests for the quantum group action."""

    def test_representation_entry(self):
        """Test the vector representation of l^{+1}_1 at N = 1."""
        assert representation_entry(1, 1, 1, 1, 1, 1) == LaurentQ.q()
        assert representation_entry(1, 1, 1, 1, 1, 1, antipode=True) == LaurentQ.monomial(-1)
        assert representation_entry(1, -1, 1, 1, 1, 1) == LaurentQ.monomial(-1)

    def test_letter_on_tail(self):
        """Test l^{+1}_1 at the tail scales a generator by q^-1."""
        q = load_quiver(QUIVERS / "kronecker_1_2.json")
        action = VertexAction(q, "u")
        a12 = GenId.a("e", 1, 2)

        assert action.letter(a12, 1, 1, 1) == {a12: LaurentQ.monomial(-1)}

    def test_off_vertex_generators_act_trivially(self):
        """Test generators away from the vertex see l^1_1 as the identity."""
        q = load_quiver(QUIVERS / "star.json")
        action = VertexAction(q, "x1")

        assert action.letter(GenId.a("e2", 1, 1), 1, 1, 1) == {GenId.a("e2", 1, 1): LaurentQ.one()}

    def test_quantum_plane(self):
        """Test the quantum plane relation span is stable."""
        q = load_quiver(QUIVERS / "kronecker_1_2.json")
        report = equivariance_check(full_presentation(q, AlgebraKind.OQ), D=2)

        assert report.ok
        assert report.witness["span_rank"] == 1

    def test_weyl(self, weyl):
        """Test the inhomogeneous a-d relation of Kronecker (1,1) is stable."""
        report = equivariance_check(weyl, D=2)

        assert report.ok
        assert report.witness["span_rank"] == 1

    def test_kronecker_1_2_dq(self):
        """Test all six D_q relations of Kronecker (1,2) span a stable space."""
        q = load_quiver(QUIVERS / "kronecker_1_2.json")
        report = equivariance_check(full_presentation(q, AlgebraKind.DQ), D=2)

        assert report.ok
        assert report.witness["span_rank"] == 6

    def test_commutator_is_not_stable(self):
        """Test the undeformed commutator relation fails with a named generator."""
        plane = full_presentation(load_quiver(QUIVERS / "kronecker_1_2.json"), AlgebraKind.OQ)
        report = equivariance_check(_commutator_plane(plane), D=2)

        assert report.status is CheckStatus.FAIL
        assert report.witness["generator"].startswith("l^")
        assert "@" in report.witness["generator"]

    def test_commutator_is_stable_at_one(self):
        """Test at q = 1 the commutator relation is classically invariant."""
        plane = full_presentation(load_quiver(QUIVERS / "kronecker_1_2.json"), AlgebraKind.OQ)
        report = equivariance_check(_commutator_plane(plane), D=2, q0=1)

        assert report.ok
        assert report.parameters["q0"] == "1"
        assert report.witness["span_rank"] == 1

    def test_quantum_plane_at_one(self):
        """Test the quantum plane relation specializes to a stable line."""
        plane = full_presentation(load_quiver(QUIVERS / "kronecker_1_2.json"), AlgebraKind.OQ)

        assert equivariance_check(plane, D=2, q0=1).ok

    def test_bound_too_small(self, weyl):
        """Test D < 2 is rejected."""
        with pytest.raises(ValueError):
            equivariance_check(weyl, D=1)

    def test_localized_refused(self, kronecker):
        """Test localized presentations are out of scope."""
        report = equivariance_check(localized_presentation(kronecker), D=2)

        assert report.status is CheckStatus.INCONCLUSIVE

"""Unit tests for OscService.

This module covers osculating hypersurfaces, quadrics through a variety, the
Monge system for quadric hypersurfaces, linear syzygies, osculating lines and
the maximal-rank conditions on osculating planes.
"""

from math import comb

import pytest
from sympy.polys.domains import QQ

from src.projdiff.exact.linalg import independent_subset, rank_exact, to_rat
from src.projdiff.exact.polys import poly_ring
from src.projdiff.exceptions import InputValidationException
from src.projdiff.models.jets import QuadricSystem
from src.projdiff.services.jet_service import PointNotGeneralError
from src.projdiff.services.osc_service import OscService, quadric_value


class TestOsculatingSpaces:
    """Test cases for osculating hypersurfaces."""

    def test_quadrics_osculating_the_twisted_cubic(self, osc: OscService, variety_factory):
        report = osc.osculating_space(variety_factory.twisted_cubic(), 2, 2)
        assert report.affine_dim == 7
        assert report.formula_dim == 7
        assert report.projective_dim == 6
        assert len(report.basis) == 7

    @pytest.mark.parametrize("spec", ["veronese:1,3", "segre:1,2", "veronese:2,2"])
    def test_tangent_hyperplanes(self, catalog, osc: OscService, spec: str):
        """Hyperplanes through the embedded tangent space number ``a``."""
        variety = catalog.parse_spec(spec)
        report = osc.osculating_space(variety, 1, 1)
        assert report.affine_dim == variety.a

    @pytest.mark.parametrize("spec", ["veronese:2,2", "segre:1,2"])
    def test_order_three_quadrics(self, catalog, osc: OscService, spec: str):
        variety = catalog.parse_spec(spec)
        report = osc.osculating_space(variety, 2, 3)
        assert report.formula_dim is None
        assert report.projective_dim >= comb(variety.a + 1, 2) - 1

    def test_invalid_degree(self, osc: OscService, variety_factory):
        with pytest.raises(InputValidationException):
            osc.osculating_space(variety_factory.conic(), 0, 1)

    def test_special_point(self, catalog, osc: OscService, variety_factory):
        surface = catalog.tangent_developable(variety_factory.twisted_cubic())
        with pytest.raises(PointNotGeneralError):
            osc.osculating_space(surface, 2, 2, point=[QQ(1), QQ(0)])

    def test_quadrics_of_the_veronese_surface_vanish(self, catalog, osc: OscService):
        variety = catalog.veronese(2, 2)
        quadrics = osc.quadric_basis(variety, 5)
        assert len(quadrics) == 6
        assert osc.vanish_on_samples(variety, quadrics)

    def test_quadric_value(self):
        # Monomial order over three variables: z0^2, z0 z1, z0 z2, z1^2, z1 z2, z2^2.
        z = (QQ(1), QQ(2), QQ(3))
        assert quadric_value([0, 1, 0, 0, 0, -1], z) == QQ(2) - QQ(9)


class TestMongeSystem:
    """Test cases for the Monge system."""

    @pytest.mark.parametrize("n", [2, 3])
    def test_quadric_hypersurface_graph(self, catalog, osc: OscService, n: int):
        variety = catalog.random_graph(n, 1)
        solution = osc.monge_check(variety)
        assert solution.verdict == "holds"
        assert all(solution.preconditions.values())
        assert solution.solvable == {"3": True, "4": True, "5": True}
        assert solution.osc_order4 == variety.a - 1
        assert solution.a_constants is not None
        assert solution.b_constants is not None

    def test_quadric_vanishes_on_samples(self, catalog, osc: OscService):
        variety = catalog.random_graph(2, 1)
        quadrics = osc.quadric_basis(variety, 5)
        assert len(quadrics) == 1
        assert osc.vanish_on_samples(variety, quadrics)

    def test_cubic_graph_fails(self, catalog, osc: OscService):
        solution = osc.monge_check(catalog.random_graph(2, 1, 3))
        assert solution.verdict.startswith("fails")
        assert solution.a_constants is None

    def test_syzygies_break_the_preconditions(self, catalog, osc: OscService):
        solution = osc.monge_check(catalog.veronese(2, 2))
        assert solution.verdict == "precondition-failed"
        assert not solution.preconditions["no_linear_syzygies"]
        assert all(solution.solvable.values())


class TestLinearSyzygies:
    """Test cases for linear syzygies of quadric systems."""

    def test_segre_has_syzygies(self, jets, catalog, osc: OscService):
        report = osc.linear_syzygies(jets.second_ff(catalog.segre([2, 2])))
        assert report.syzygy_dim > 0
        assert report.rank_bound_holds
        assert report.witness is not None

    def test_segre_witness_span_generic_rank(self, jets, catalog, osc: OscService, sampler):
        """The rank bound is read off a generic member of the witness span."""
        report = osc.linear_syzygies(jets.second_ff(catalog.segre([2, 2])))
        n = report.n
        forms = [[to_rat(c) for c in row] for row in report.witness]
        keep = independent_subset(forms, n)
        quadrics = [[[to_rat(c) for c in row] for row in q] for q in report.witness_quadrics]
        assert len(quadrics) == report.witness_pairs == len(keep)
        cubic = sum(
            (OscService._cubic(forms[i], q, n) for i, q in zip(keep, quadrics, strict=True)), poly_ring(n).zero
        )
        assert cubic == 0

        span = QuadricSystem(n, tuple(tuple(tuple(row) for row in q) for q in quadrics))
        generic = max(rank_exact(span.combination(sampler.vector(len(span))), n) for _ in range(10))
        assert report.witness_generic_rank == generic
        assert generic >= max(rank_exact(q, n) for q in quadrics)
        assert generic <= 2 * (report.witness_pairs - 1)
        if report.witness_pairs == 2:
            assert generic == 2

    def test_coordinate_quadrics(self, osc: OscService, variety_factory):
        """``x2 (x1^2) - x1 (x1 x2) = 0``."""
        system = variety_factory.system(2, [[1, 0], [0, 0]], [[0, 1], [1, 0]])
        report = osc.linear_syzygies(system)
        assert report.syzygy_dim == 1
        assert report.witness_pairs == 2

    def test_random_systems_have_none(self, jets, osc: OscService, sampler):
        for _ in range(10):
            system = jets.random_system(5, 2, sampler)
            assert osc.linear_syzygies(system).syzygy_dim == 0

    def test_empty_system(self, osc: OscService, variety_factory):
        report = osc.linear_syzygies(variety_factory.system(3))
        assert report.syzygy_dim == 0
        assert report.system_dim == 0


class TestOsculatingLines:
    """Test cases for lines osculating a variety."""

    def test_ruling_of_the_quadric_surface(self, osc: OscService, variety_factory):
        report = osc.line_report(variety_factory.quadric_surface(), [1, 0], 4)
        assert report.osculation_order == 4
        assert report.contained == "true"

    def test_general_direction(self, osc: OscService, variety_factory):
        report = osc.line_report(variety_factory.quadric_surface(), [1, 1], 4)
        assert report.osculation_order == 1
        assert report.contained == "false"

    def test_not_quadric_cut(self, osc: OscService, variety_factory):
        cylinder = variety_factory.surface_graph("x1**2")
        report = osc.line_report(cylinder, [0, 1], 3)
        assert report.osculation_order == 3
        assert report.contained == "undecidable"

    @pytest.mark.parametrize(("direction", "maxk"), [([0, 0], 3), ([1, 0], 1), ([1, 0], 9), ([1], 3)])
    def test_invalid_arguments(self, osc: OscService, variety_factory, direction, maxk):
        with pytest.raises(InputValidationException):
            osc.line_osculation_order(variety_factory.quadric_surface(), direction, maxk)


class TestMaximalRank:
    """Test cases for maximal-rank conditions on osculating planes."""

    def test_ruling_line(self, osc: OscService, variety_factory):
        report = osc.maximal_rank_report(variety_factory.quadric_surface(), [[1, 0]], 3)
        assert report.osculates
        assert [level.j for level in report.levels] == [2]
        assert report.levels[0].maximal
        assert report.cumulative_rank == 1
        assert report.inequality_holds

    def test_general_line_does_not_osculate(self, osc: OscService, variety_factory):
        report = osc.maximal_rank_report(variety_factory.quadric_surface(), [[1, 1]], 3)
        assert not report.osculates

    def test_dependent_plane(self, osc: OscService, catalog):
        with pytest.raises(InputValidationException):
            osc.maximal_rank_report(catalog.segre([2, 2]), [[1, 0, 0, 0], [2, 0, 0, 0]], 3)

"""Unit tests for JetService.

This module covers jet towers and the osculating filtration, the second
fundamental form and its invariants, prolongations and the refined cubic.
"""

import pytest
from sympy.polys.domains import QQ

from src.projdiff.exact.linalg import rank_exact
from src.projdiff.exact.polys import gens
from src.projdiff.exceptions import EXIT_USAGE, InputValidationException
from src.projdiff.services.jet_service import (
    JetService,
    PointNotGeneralError,
    VectorNotGenericError,
)

FULL_PLANE_SYSTEM = ([[1, 0], [0, 0]], [[0, 1], [1, 0]], [[0, 0], [0, 1]])


class TestJetTower:
    """Test cases for jet towers."""

    def test_twisted_cubic_filtration(self, jets: JetService, variety_factory):
        tower = jets.jet_tower(variety_factory.twisted_cubic(), order=3)
        assert tower.filtration == (1, 1, 1)
        assert {k: len(v) for k, v in tower.fundamental_forms.items()} == {2: 1, 3: 1}

    def test_veronese_surface_filtration(self, jets: JetService, catalog):
        tower = jets.jet_tower(catalog.veronese(2, 2), order=3)
        assert tower.filtration == (2, 3, 0)
        assert len(tower.fundamental_forms[3]) == 0

    def test_cubic_veronese_surface_filtration(self, jets: JetService, catalog):
        tower = jets.jet_tower(catalog.veronese(2, 3), order=3)
        assert tower.filtration == (2, 3, 4)

    def test_graph_frame_at_origin(self, jets: JetService, variety_factory):
        """At the origin a graph is already in graph form."""
        surface = variety_factory.surface_graph("x1**2 + x2**2 + x1**3")
        tower = jets.jet_tower(surface, point=[0, 0], order=3)
        x1, x2 = gens(2)
        assert tower.graph == (x1**2 + x2**2 + x1**3,)
        assert tower.point == (QQ.zero, QQ.zero)

    def test_filtration_independent_of_point(self, seeded_services, variety_factory):
        """The filtration at a general point does not depend on the seed."""
        tower = seeded_services.jets.jet_tower(variety_factory.quadric_surface(), order=3)
        assert tower.filtration == (2, 1, 0)

    @pytest.mark.parametrize("order", [1, 9])
    def test_order_out_of_range(self, jets: JetService, variety_factory, order: int):
        with pytest.raises(InputValidationException) as exc_info:
            jets.jet_tower(variety_factory.conic(), order=order)
        assert exc_info.value.exit_code == EXIT_USAGE

    def test_special_point(self, jets: JetService, catalog, variety_factory):
        """The tangent developable is singular along its edge of regression."""
        surface = catalog.tangent_developable(variety_factory.twisted_cubic())
        with pytest.raises(PointNotGeneralError) as exc_info:
            jets.jet_tower(surface, point=[1, 0], order=2)
        assert exc_info.value.message == "point not general"
        assert exc_info.value.details["rank"] == 1

    def test_random_general_point(self, jets: JetService, variety_factory):
        surface = variety_factory.quadric_surface()
        point = jets.random_general_point(surface)
        assert len(point) == 2


class TestSecondFundamentalForm:
    """Test cases for quadric systems from the second fundamental form."""

    def test_quadric_surface(self, jets: JetService, variety_factory):
        system = jets.second_ff(variety_factory.quadric_surface())
        assert len(system) == 1
        assert jets.generic_quadric_rank(system) == 2
        assert jets.singloc(system) == []

    def test_cone_has_singular_locus(self, jets: JetService, catalog, variety_factory):
        system = jets.second_ff(catalog.cone_over(variety_factory.conic()))
        assert jets.generic_quadric_rank(system) == 1
        assert len(jets.singloc(system)) == 1

    def test_veronese_surface_spans_all_quadrics(self, jets: JetService, catalog):
        system = jets.second_ff(catalog.veronese(2, 2))
        assert system.span_dim() == 3

    def test_empty_system_singloc(self, jets: JetService, variety_factory):
        system = variety_factory.system(3)
        assert len(jets.singloc(system)) == 3
        assert jets.generic_quadric_rank(system) == 0

    def test_base_plane_forces_singular_locus(self, jets: JetService):
        """``a(n - k) < k`` leaves a nonzero common kernel."""
        system = jets.singloc_with_base_plane(4, 3, 1)
        assert len(jets.singloc(system)) >= 1
        for m in system.matrices:
            assert all(m[i][j] == 0 for i in range(3) for j in range(3))

    def test_random_system_is_seeded(self, jets: JetService):
        first = jets.random_system(3, 2)
        second = jets.random_system(3, 2)
        assert first.matrices == second.matrices
        assert len(first) == 2

    def test_random_system_rejects_empty(self, jets: JetService):
        with pytest.raises(InputValidationException):
            jets.random_system(0, 2)

    def test_report(self, jets: JetService, catalog):
        report = jets.report(catalog.veronese(2, 2), order=3)
        assert report.filtration == [2, 3, 0]
        assert report.ff_dims == {"2": 3, "3": 0}
        assert report.prolongation is not None
        assert report.prolongation.contained
        assert report.singloc_dim == 0


class TestProlongation:
    """Test cases for prolongations of quadric systems."""

    def test_full_system(self, jets: JetService, variety_factory):
        system = variety_factory.system(2, *FULL_PLANE_SYSTEM)
        dim, witnesses = jets.prolongation_dim(system)
        assert dim == 4
        assert len(witnesses) == 4

    def test_single_rank_two_quadric(self, jets: JetService, variety_factory):
        system = variety_factory.system(2, [[0, 1], [1, 0]])
        assert jets.prolongation_dim(system)[0] == 0

    def test_square_of_a_linear_form(self, jets: JetService, variety_factory):
        system = variety_factory.system(2, [[1, 0], [0, 0]])
        dim, witnesses = jets.prolongation_dim(system)
        assert dim == 1
        x1, x2 = gens(2)
        assert jets.prolongation_contains(system, x1**3)
        assert not jets.prolongation_contains(system, x1**2 * x2)
        assert jets.prolongation_contains(system, witnesses[0])

    def test_fundamental_form_check_on_twisted_cubic(self, jets: JetService, variety_factory):
        report = jets.fundamental_form_check(variety_factory.twisted_cubic())
        assert report.ff3_dim == 1
        assert report.prolongation_dim == 1
        assert report.contained

    @pytest.mark.slow
    @pytest.mark.parametrize("spec", ["grassmannian:3,6", "spinor:6"])
    def test_third_form_fills_the_prolongation(self, jets: JetService, catalog, spec: str):
        """The cubic Pfaffian or determinant spans both ``|FF^3|`` and ``|II|^(1)``."""
        report = jets.fundamental_form_check(catalog.parse_spec(spec))
        assert report.ff3_dim == report.prolongation_dim == 1
        assert report.contained


class TestRefinedCubic:
    """Test cases for the refined cubic form."""

    def test_twisted_cubic(self, jets: JetService, variety_factory):
        data = jets.refined_cubic(variety_factory.twisted_cubic())
        assert data.ii_v_dim == 1
        assert len(data.annihilators) == 1
        assert data.iii_nonzero

    def test_veronese_surface(self, jets: JetService, catalog):
        data = jets.refined_cubic(catalog.veronese(2, 2))
        assert data.ii_v_dim == 2
        assert len(data.annihilators) == 1
        assert not data.iii_nonzero
        assert rank_exact([*data.sa, data.v], 2) == len(data.sa)

    def test_supplied_vector_not_generic(self, jets: JetService, catalog):
        with pytest.raises(VectorNotGenericError) as exc_info:
            jets.refined_cubic(catalog.veronese(2, 2), v=[0, 0])
        assert exc_info.value.details["ii_v_dim"] == 0

    def test_refined_report(self, jets: JetService, variety_factory):
        report = jets.refined_report(variety_factory.twisted_cubic())
        assert report.iii_nonzero
        assert report.ann_dim == 0

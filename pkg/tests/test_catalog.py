"""Unit tests for CatalogService.

This module covers the homogeneous varieties of the catalog, the derived
constructions, composition algebras and the variety-spec mini-language.
"""

import json

import pytest
from sympy.polys.domains import QQ

from src.projdiff.exact.linalg import rank_exact
from src.projdiff.exceptions import EXIT_USAGE
from src.projdiff.services.catalog_service import (
    CatalogService,
    DegenerateImageError,
    InvalidVarietySpecError,
    is_nondegenerate,
)


class TestHomogeneousVarieties:
    """Test cases for the catalog constructors."""

    @pytest.mark.parametrize(
        ("spec", "n", "N"),
        [
            ("veronese:1,3", 1, 3),
            ("veronese:2,2", 2, 5),
            ("veronese:3,2", 3, 9),
            ("segre:1,1", 2, 3),
            ("segre:2,2", 4, 8),
            ("segre:1,1,1", 3, 7),
            ("grassmannian:2,5", 6, 9),
            ("grassmannian:2,6", 8, 14),
            ("spinor:5", 10, 15),
            ("severi:1", 2, 5),
            ("severi:2", 4, 8),
            ("severi:4", 8, 14),
        ],
    )
    def test_dimensions(self, catalog: CatalogService, spec: str, n: int, N: int):
        """Parsed varieties carry the expected source and ambient dimensions."""
        variety = catalog.parse_spec(spec)
        assert (variety.n, variety.N) == (n, N)
        assert variety.a == N - n
        assert is_nondegenerate(variety)

    @pytest.mark.slow
    def test_large_varieties(self, catalog: CatalogService):
        assert (catalog.grassmannian(3, 6).n, catalog.grassmannian(3, 6).N) == (9, 19)
        e6 = catalog.severi(8)
        assert (e6.n, e6.N) == (16, 26)

    def test_veronese_chart_monomials(self, catalog: CatalogService):
        conic = catalog.veronese(1, 2)
        assert [p.degree() for p in conic.chart] == [1, 2]
        assert conic.quadric_cut
        assert conic.expected_smooth

    def test_segre_chart_is_bilinear(self, variety_factory):
        surface = variety_factory.quadric_surface()
        assert surface.max_degree == 2
        assert surface.lift_at([QQ(2), QQ(3)]) == (QQ.one, QQ(3), QQ(2), QQ(6))

    def test_spinor_info(self, catalog: CatalogService):
        info = catalog.info(catalog.spinor(5))
        assert info.n == 10
        assert info.N == 15
        assert info.jacobian_rank == 10

    @pytest.mark.parametrize(
        ("call", "args"),
        [
            ("veronese", (0, 2)),
            ("segre", ([],)),
            ("grassmannian", (3, 3)),
            ("spinor", (2,)),
            ("comp_algebra", (3,)),
        ],
    )
    def test_invalid_arguments(self, catalog: CatalogService, call: str, args: tuple):
        with pytest.raises(InvalidVarietySpecError) as exc_info:
            getattr(catalog, call)(*args)
        assert exc_info.value.exit_code == EXIT_USAGE


class TestCompositionAlgebras:
    """Test cases for Cayley-Dickson algebras."""

    @pytest.mark.parametrize("d", [1, 2, 4, 8])
    def test_norm_is_multiplicative(self, catalog: CatalogService, sampler, d: int):
        algebra = catalog.comp_algebra(d)
        u, v = sampler.vector(d), sampler.vector(d)
        assert algebra.norm(algebra.mul(u, v)) == algebra.norm(u) * algebra.norm(v)

    @pytest.mark.parametrize("d", [1, 2, 4, 8])
    def test_unit_and_conjugation(self, catalog: CatalogService, sampler, d: int):
        algebra = catalog.comp_algebra(d)
        u = list(sampler.vector(d))
        assert algebra.mul(algebra.unit(0), u) == u
        assert algebra.norm(u) == sum((x * x for x in u), QQ.zero)

    def test_quaternions_associative(self, catalog: CatalogService, sampler):
        algebra = catalog.comp_algebra(4)
        u, v, w = (sampler.vector(4) for _ in range(3))
        assert not any(algebra.associator(u, v, w))

    def test_octonions_not_associative(self, catalog: CatalogService):
        algebra = catalog.comp_algebra(8)
        e1, e2, e4 = algebra.unit(1), algebra.unit(2), algebra.unit(4)
        assert any(algebra.associator(e1, e2, e4))


class TestDerivedVarieties:
    """Test cases for graphs, cones, tangent developables and linear spaces."""

    def test_graph_variety(self, variety_factory):
        surface = variety_factory.surface_graph("x1**2 + x2**2", "x1*x2**2")
        assert (surface.n, surface.N) == (2, 4)
        assert surface.expected_smooth

    def test_graph_rejects_linear_terms(self, catalog: CatalogService):
        with pytest.raises(InvalidVarietySpecError):
            catalog.graph_variety(2, ["x1 + x2**2"])

    def test_random_graph_is_seeded(self, catalog: CatalogService):
        first = catalog.random_graph(2, 2, degree=3)
        second = catalog.random_graph(2, 2, degree=3)
        assert first.name == "randgraph:2,2,3"
        assert first.chart == second.chart
        assert first.max_degree == 3

    def test_tangent_developable(self, catalog: CatalogService, variety_factory):
        surface = catalog.tangent_developable(variety_factory.twisted_cubic())
        assert (surface.n, surface.N) == (2, 3)
        assert not surface.expected_smooth

    def test_tangent_developable_needs_a_curve(self, catalog: CatalogService, variety_factory):
        with pytest.raises(InvalidVarietySpecError):
            catalog.tangent_developable(variety_factory.quadric_surface())

    def test_cone(self, catalog: CatalogService, variety_factory):
        cone = catalog.cone_over(variety_factory.conic())
        assert (cone.n, cone.N) == (2, 3)
        assert not cone.expected_smooth
        assert cone.quadric_cut

    def test_linear_space(self, catalog: CatalogService):
        plane = catalog.linear_space(4, [1, 0, 0, 0], [[1, 1, 0, 0], [0, 0, 1, 0]])
        assert (plane.n, plane.N) == (2, 4)
        assert plane.max_degree == 1
        point = catalog.linear_space(3, ["1/2", 0, 0])
        assert point.n == 0

    def test_linear_space_dependent_directions(self, catalog: CatalogService):
        with pytest.raises(InvalidVarietySpecError):
            catalog.linear_space(3, None, [[1, 0, 0], [2, 0, 0]])

    def test_affine_transform_keeps_dimensions(self, catalog: CatalogService, variety_factory):
        cubic = variety_factory.twisted_cubic()
        moved = catalog.affine_transform(cubic, [[1, 1, 0], [0, 1, 0], [0, 0, 2]], [1, 0, 0])
        assert (moved.n, moved.N) == (1, 3)
        assert moved.lift_at([QQ(1)]) == (QQ.one, QQ(3), QQ(1), QQ(2))

    @pytest.mark.parametrize("spec", ["veronese:1,3", "veronese:2,2", "segre:1,2"])
    def test_invariants_survive_affine_transforms(self, catalog: CatalogService, jets, defects, sampler, spec: str):
        """Filtration and secant dimensions do not depend on the projective frame."""
        variety = catalog.parse_spec(spec)
        filtration = jets.jet_tower(variety, order=3).filtration
        secant = defects.secant_dim(variety)
        N = variety.N
        for _ in range(2):
            matrix = [list(sampler.vector(N)) for _ in range(N)]
            while rank_exact(matrix, N) < N:
                matrix = [list(sampler.vector(N)) for _ in range(N)]
            moved = catalog.affine_transform(variety, matrix, sampler.vector(N))
            assert jets.jet_tower(moved, order=3).filtration == filtration
            assert defects.secant_dim(moved) == secant

    def test_affine_transform_needs_invertible_matrix(self, catalog: CatalogService, variety_factory):
        with pytest.raises(InvalidVarietySpecError):
            catalog.affine_transform(variety_factory.conic(), [[1, 1], [1, 1]])

    def test_degenerate_image(self, catalog: CatalogService):
        """Tangent lines of a line sweep only the line."""
        with pytest.raises(DegenerateImageError) as exc_info:
            catalog.parse_spec("tandev:linear:1,2")
        assert exc_info.value.message == "image dimension deficient"
        assert exc_info.value.details["rank"] == 1


class TestVarietySpecs:
    """Test cases for the variety-spec mini-language."""

    def test_nested_specs(self, catalog: CatalogService):
        assert catalog.parse_spec("cone:veronese:1,2").name == "cone:veronese:1,2"
        assert catalog.parse_spec("tandev:veronese:1,3").name == "tandev:veronese:1,3"
        assert catalog.parse_spec(" linear:2,5 ").N == 5

    def test_inline_graph(self, catalog: CatalogService):
        variety = catalog.parse_spec("graph:2;x1**2;x1*x2")
        assert (variety.n, variety.N) == (2, 4)

    def test_graph_file(self, catalog: CatalogService, tmp_path):
        path = tmp_path / "surface.json"
        path.write_text(json.dumps({"n": 2, "polys": ["x1**2 - x2**2", "x1*x2"]}), encoding="utf-8")
        variety = catalog.parse_spec(f"graph:{path}")
        assert variety.N == 4

    def test_missing_graph_file(self, catalog: CatalogService, tmp_path):
        with pytest.raises(InvalidVarietySpecError) as exc_info:
            catalog.parse_spec(f"graph:{tmp_path / 'missing.json'}")
        assert "cannot read graph file" in exc_info.value.message

    @pytest.mark.parametrize(
        "spec",
        ["veronese", "foo:1,2", "segre:a,b", "veronese:1", "linear:3,2", "graph:x;x1**2", "graph:2;x1**"],
    )
    def test_malformed_specs(self, catalog: CatalogService, spec: str):
        with pytest.raises(InvalidVarietySpecError) as exc_info:
            catalog.parse_spec(spec)
        assert exc_info.value.error_code == "validation_error"

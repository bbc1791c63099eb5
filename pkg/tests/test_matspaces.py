"""Unit tests for MatspaceService.

This module covers the exemplar spaces, rank certificates in both modes,
doubling detection, signed-permutation matching, the split-type and graded
algebra constructions, the odd-rank pencil obstruction and the bound table.
"""

import pytest
from sympy.polys.domains import QQ

from src.projdiff.exceptions import EXIT_USAGE, InputValidationException
from src.projdiff.models.matspace import MatrixSpace
from src.projdiff.services.matspace_service import (
    EXEMPLARS,
    MatspaceService,
    SymbolicBudgetError,
    UnknownExemplarError,
    pencil_shapes,
)


class TestExemplars:
    """Test cases for the transcribed exemplar spaces."""

    @pytest.mark.parametrize(
        ("name", "shape", "dim"),
        [
            ("B_I", (4, 2), 3),
            ("C_II", (3, 3), 3),
            ("A_I", (6, 6), 3),
            ("A_II", (6, 6), 3),
            ("A_III", (10, 10), 5),
            ("C_IV", (10, 10), 4),
            ("A_IV", (20, 20), 4),
        ],
    )
    def test_shapes(self, matspaces: MatspaceService, name: str, shape: tuple[int, int], dim: int):
        space = matspaces.exemplar(name)
        assert (space.rows, space.cols) == shape
        assert space.dim == dim

    @pytest.mark.parametrize(
        ("name", "symmetry"),
        [
            ("B_I", "general"),
            ("C_II", "skew"),
            ("A_I", "symmetric"),
            ("A_II", "symmetric"),
            ("A_III", "symmetric"),
            ("C_IV", "skew"),
            ("A_IV", "symmetric"),
        ],
    )
    def test_symmetry_tags(self, matspaces: MatspaceService, name: str, symmetry: str):
        space = matspaces.exemplar(name)
        assert space.symmetry == symmetry
        if symmetry == "general":
            return
        sign = 1 if symmetry == "symmetric" else -1
        for m in space.basis:
            assert all(m[i][j] == sign * m[j][i] for i in range(space.rows) for j in range(space.cols))

    @pytest.mark.parametrize(("name", "inner"), [("A_I", "B_I"), ("A_II", "C_II"), ("A_IV", "C_IV")])
    def test_transcribed_doubled_exemplars(self, matspaces: MatspaceService, name: str, inner: str):
        """The transcribed arrays are the symmetric doublings of their blocks."""
        space = matspaces.exemplar(name)
        assert space.basis == matspaces.doubled(matspaces.exemplar(inner), "symmetric").basis

    @pytest.mark.parametrize(("name", "inner"), [("A_I", "B_I"), ("A_II", "C_II")])
    def test_transcribed_doubled_exemplars_match(self, matspaces: MatspaceService, name: str, inner: str):
        doubled = matspaces.doubled(matspaces.exemplar(inner), "symmetric")
        assert matspaces.match_signed_permutation(matspaces.exemplar(name), doubled).found

    def test_every_exemplar_is_listed(self, matspaces: MatspaceService):
        assert {matspaces.exemplar(name).name for name in EXEMPLARS} == set(EXEMPLARS)

    def test_unknown_exemplar(self, matspaces: MatspaceService):
        with pytest.raises(UnknownExemplarError) as exc_info:
            matspaces.exemplar("Z_IX")
        assert exc_info.value.exit_code == EXIT_USAGE

    def test_doubling_doubles_generic_rank(self, matspaces: MatspaceService):
        base = matspaces.exemplar("C_IV")
        assert matspaces.generic_rank(matspaces.exemplar("A_IV")) == 2 * matspaces.generic_rank(base)

    def test_doubling_kind_is_validated(self, matspaces: MatspaceService):
        with pytest.raises(InputValidationException):
            matspaces.doubled(matspaces.exemplar("B_I"), "hermitian")


class TestRankCertificates:
    """Test cases for constant-rank certification."""

    @pytest.mark.parametrize(
        ("name", "rank"),
        [("B_I", 2), ("C_II", 2), ("A_I", 4), ("A_II", 4), ("A_III", 6)],
    )
    def test_exemplars_certify(self, matspaces: MatspaceService, name: str, rank: int):
        certificate = matspaces.certify_constant_rank(matspaces.exemplar(name), rank)
        assert certificate.certified
        assert certificate.witness is not None
        assert certificate.failure_bound_log2 >= 40
        assert certificate.stratum_checks > 0

    @pytest.mark.slow
    def test_c_iv_certifies_at_generic_rank(self, matspaces: MatspaceService):
        space = matspaces.exemplar("C_IV")
        rank = matspaces.generic_rank(space)
        assert matspaces.certify_constant_rank(space, rank).certified
        assert matspaces.certify_constant_rank(matspaces.exemplar("A_IV"), 2 * rank).certified

    def test_wrong_rank_is_refuted(self, matspaces: MatspaceService):
        certificate = matspaces.certify_constant_rank(matspaces.exemplar("B_I"), 1)
        assert not certificate.certified
        assert certificate.refutation_rank == 2
        assert certificate.refutation is not None

    def test_symbolic_certificate(self, matspaces: MatspaceService):
        certificate = matspaces.certify_constant_rank(matspaces.exemplar("C_II"), 2, mode="symbolic")
        assert certificate.certified
        assert certificate.minors_checked == 1
        assert certificate.mode == "symbolic"

    def test_symbolic_refutation(self, matspaces: MatspaceService):
        certificate = matspaces.certify_constant_rank(matspaces.exemplar("C_II"), 1, mode="symbolic")
        assert not certificate.certified
        assert certificate.refutation_rank == 2

    def test_symbolic_budget(self, matspaces: MatspaceService, run_config):
        small = MatspaceService(run_config.model_copy(update={"symbolic_minor_budget": 10}))
        with pytest.raises(SymbolicBudgetError) as exc_info:
            small.certify_constant_rank(small.exemplar("A_III"), 6, mode="symbolic")
        assert exc_info.value.details["budget"] == 10
        assert exc_info.value.error_code == "budget_error"

    def test_invalid_mode(self, matspaces: MatspaceService):
        with pytest.raises(InputValidationException):
            matspaces.certify_constant_rank(matspaces.exemplar("B_I"), 2, mode="heuristic")

    def test_certificate_is_reproducible(self, run_config):
        first = MatspaceService(run_config).certify_constant_rank(MatspaceService(run_config).exemplar("C_II"), 2)
        second = MatspaceService(run_config).certify_constant_rank(MatspaceService(run_config).exemplar("C_II"), 2)
        assert first.model_dump_json() == second.model_dump_json()


class TestStructure:
    """Test cases for doubling detection and signed-permutation matching."""

    def test_detects_symmetric_doubling(self, matspaces: MatspaceService):
        report = matspaces.detect_doubling(matspaces.exemplar("A_I"))
        assert report.found
        assert report.kind == "symmetric"
        assert sorted(map(len, (report.first_block, report.second_block))) == [2, 4]

    def test_triangle_support_is_not_doubled(self, matspaces: MatspaceService):
        report = matspaces.detect_doubling(matspaces.exemplar("C_II"))
        assert not report.found
        assert report.status == "structure not found"

    def test_general_space_is_not_doubled(self, matspaces: MatspaceService):
        assert not matspaces.detect_doubling(matspaces.exemplar("B_I")).found

    def test_matches_signed_relabelling(self, matspaces: MatspaceService):
        source = matspaces.exemplar("C_II")
        b0, b1, b2 = source.basis
        negated = tuple(tuple(-x for x in row) for row in b0)
        target = MatrixSpace("C_II'", 3, 3, "skew", (negated, b2, b1))
        report = matspaces.match_signed_permutation(source, target)
        assert report.found
        assert sorted(report.param_perm) == [0, 1, 2]
        assert report.nodes > 0

    def test_inequivalent_spaces(self, matspaces: MatspaceService):
        report = matspaces.match_signed_permutation(matspaces.exemplar("A_I"), matspaces.exemplar("A_II"))
        assert not report.found

    def test_shape_mismatch(self, matspaces: MatspaceService):
        report = matspaces.match_signed_permutation(matspaces.exemplar("B_I"), matspaces.exemplar("C_II"))
        assert not report.found
        assert report.nodes == 0


class TestConstructions:
    """Test cases for split-type and graded algebra spaces."""

    def test_split_type(self, matspaces: MatspaceService):
        space = matspaces.split_type(4, 7)
        assert space.dim == 4
        assert (space.rows, space.cols) == (7, 7)
        assert matspaces.certify_constant_rank(space, 4).certified

    @pytest.mark.parametrize(("r", "m"), [(3, 7), (0, 4), (8, 7)])
    def test_split_type_rejects_bad_rank(self, matspaces: MatspaceService, r: int, m: int):
        with pytest.raises(InputValidationException):
            matspaces.split_type(r, m)

    @pytest.mark.parametrize(
        ("m", "k", "symmetry", "rank"),
        [(3, 1, "skew", 2), (5, 2, "symmetric", 6), (4, 1, "general", 3)],
    )
    def test_graded_algebra_space(self, matspaces: MatspaceService, m: int, k: int, symmetry: str, rank: int):
        space = matspaces.graded_algebra_space(m, k)
        assert space.symmetry == symmetry
        assert space.dim == m
        assert matspaces.certify_constant_rank(space, rank).certified

    def test_graded_space_matches_a_iii(self, matspaces: MatspaceService):
        """Wedge multiplication on the middle exterior power of a 5-space is the transcribed A_III."""
        report = matspaces.match_signed_permutation(matspaces.graded_algebra_space(5, 2), matspaces.exemplar("A_III"))
        assert report.found
        assert sorted(report.param_perm) == [0, 1, 2, 3, 4]

    def test_parse_space(self, matspaces: MatspaceService):
        assert matspaces.parse_space("C_II").name == "C_II"
        assert matspaces.parse_space("doubled:B_I,skew").symmetry == "skew"
        assert matspaces.parse_space("graded:5,2").rows == 10

    @pytest.mark.parametrize("text", ["split:4", "graded:x,1", "nothing:1,2"])
    def test_parse_space_errors(self, matspaces: MatspaceService, text: str):
        with pytest.raises(InputValidationException):
            matspaces.parse_space(text)


class TestOddRankObstruction:
    """Test cases for pencils of odd generic rank."""

    def test_every_pencil_drops_rank(self, matspaces: MatspaceService):
        report = matspaces.odd_rank_obstruction(5, 3, trials=20)
        assert report.refuted == 20
        assert not report.constant_rank_found
        assert len(report.examples) == 5
        for example in report.examples:
            assert example.factor
            assert example.regular_size % 2 == 1
            assert example.point is not None
            assert example.rank < 3

    def test_even_rank_has_pencils_without_forced_drop(self, matspaces: MatspaceService):
        """Shapes without a regular block keep rank 4 at every parameter point."""
        report = matspaces.odd_rank_obstruction(5, 4, trials=6)
        assert report.constant_rank_found
        assert report.refuted == 4
        assert {example.regular_size for example in report.examples} == {0, 2, 4}
        for example in report.examples:
            if example.regular_size == 0:
                assert example.singular_blocks == [2]
                assert example.factor == ""
                assert example.rank is None
            else:
                assert example.factor
                assert example.rank < 4

    def test_pencil_shapes(self):
        assert pencil_shapes(5, 3) == [(3, ()), (1, (1,))]
        assert pencil_shapes(5, 4) == [(4, ()), (2, (1,)), (0, (2,))]
        assert pencil_shapes(6, 4) == [(4, ()), (2, (1,)), (0, (2,)), (0, (1, 1))]

    def test_drop_at_an_irrational_point(self, matspaces: MatspaceService):
        """``det [[1, t], [t, 2]] = 2 - t^2`` has no rational root; the rank is computed at a root."""
        q1 = [[QQ(1), QQ(0)], [QQ(0), QQ(2)]]
        q2 = [[QQ(0), QQ(1)], [QQ(1), QQ(0)]]
        refutation = matspaces._refute_pencil(0, q1, q2, 2)
        assert refutation.minimal_polynomial == "t**2 - 2"
        assert refutation.point == ["1", "t"]
        assert refutation.rank == 1
        assert refutation.form == ["-2", "0", "1"]

    def test_rational_drop(self, matspaces: MatspaceService):
        q1 = [[QQ(1), QQ(0)], [QQ(0), QQ(1)]]
        q2 = [[QQ(1), QQ(0)], [QQ(0), QQ(3)]]
        refutation = matspaces._refute_pencil(0, q1, q2, 2)
        assert refutation.point[0] == "1"
        assert refutation.point[1] in {"-1", "-1/3"}
        assert refutation.rank == 1

    @pytest.mark.parametrize(("m", "r"), [(5, 0), (5, 6)])
    def test_invalid_rank_is_rejected(self, matspaces: MatspaceService, m, r):
        with pytest.raises(InputValidationException):
            matspaces.odd_rank_obstruction(m, r)


class TestRankBounds:
    """Test cases for the dimension bound table."""

    def test_exact_value_from_divisibility(self):
        bounds = MatspaceService.rank_bounds(2, 4, 5)
        assert bounds.general_lower == 4
        assert bounds.general_exact == 4
        assert bounds.general_upper == 6
        assert bounds.symmetric_exact == 3

    def test_exact_value_at_the_boundary(self):
        bounds = MatspaceService.rank_bounds(3, 4, 5)
        assert bounds.general_exact == 4
        assert bounds.symmetric_exact == 1
        assert bounds.bounded_below_skew is None

    def test_invalid_arguments(self):
        with pytest.raises(InputValidationException):
            MatspaceService.rank_bounds(1, 2, 2)

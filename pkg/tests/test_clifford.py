"""Unit tests for CliffordService.

This module covers the Clifford product on the exterior algebra, the twisted
adjoint action, the spinor action on a null subspace and Clifford modules
induced by second fundamental forms with a critical tangential defect.
"""

import pytest
from sympy.polys.domains import QQ

from src.projdiff.exact.linalg import to_rat
from src.projdiff.exceptions import InputValidationException
from src.projdiff.models.clifford import CliffordElem
from src.projdiff.services.clifford_service import (
    CliffordRelationError,
    CliffordService,
    NoCriticalDefectError,
    NotInPinError,
    quadratic_form,
)


class TestQuadraticForms:
    """Test cases for the standard quadratic forms."""

    def test_hyperbolic_even(self):
        q = quadratic_form(4)
        assert q[0][2] == q[2][0] == QQ.one
        assert q[0][0] == QQ.zero

    def test_hyperbolic_odd_has_unit_square(self):
        q = quadratic_form(3)
        assert q[2][2] == QQ.one
        assert q[0][1] == QQ.one

    def test_unknown_form(self):
        with pytest.raises(InputValidationException):
            quadratic_form(2, "lorentzian")


class TestCliffordProduct:
    """Test cases for the Clifford product."""

    def test_vector_squares_to_its_norm(self, clifford: CliffordService, sampler):
        q = quadratic_form(4, "diagonal")
        v = sampler.vector(4)
        square = clifford.clifford_mul(CliffordElem.vector(v), CliffordElem.vector(v), q)
        assert square == CliffordElem.scalar(4, sum((x * x for x in v), QQ.zero))

    def test_orthogonal_vectors_anticommute(self, clifford: CliffordService):
        q = quadratic_form(2, "diagonal")
        e0, e1 = CliffordElem.blade(2, (0,)), CliffordElem.blade(2, (1,))
        assert clifford.clifford_mul(e0, e1, q) == CliffordElem.blade(2, (0, 1))
        assert clifford.clifford_mul(e1, e0, q) == CliffordElem.blade(2, (0, 1), -1)

    def test_bivector_squares_to_minus_one(self, clifford: CliffordService):
        q = quadratic_form(2, "diagonal")
        e01 = CliffordElem.blade(2, (0, 1))
        assert clifford.clifford_mul(e01, e01, q) == CliffordElem.scalar(2, -1)

    def test_mismatched_dimensions(self, clifford: CliffordService):
        with pytest.raises(InputValidationException):
            clifford.clifford_mul(CliffordElem.scalar(2), CliffordElem.scalar(3), quadratic_form(2))

    def test_reverse_signs(self, clifford: CliffordService):
        element = CliffordElem(3, {(): 1, (0,): 1, (0, 1): 1, (0, 1, 2): 1})
        assert clifford.reverse(element).terms == {
            (): QQ.one,
            (0,): -QQ.one,
            (0, 1): -QQ.one,
            (0, 1, 2): QQ.one,
        }

    @pytest.mark.parametrize("m", [2, 4])
    def test_check_suite(self, clifford: CliffordService, m: int):
        report = clifford.check(m, trials=20, rho_trials=10)
        assert report.relation_pairs == m * m
        assert report.relation_holds
        assert report.associativity_holds
        assert report.parity_holds
        assert report.rho_preserves_q
        assert report.passed

    @pytest.mark.slow
    @pytest.mark.parametrize("m", [6, 8])
    def test_check_suite_large(self, clifford: CliffordService, m: int):
        assert clifford.check(m, trials=20, rho_trials=50).passed

    def test_check_diagonal_form(self, clifford: CliffordService):
        assert clifford.check(3, form="diagonal", trials=10, rho_trials=5).passed

    def test_check_rejects_empty_space(self, clifford: CliffordService):
        with pytest.raises(InputValidationException):
            clifford.check(0)


class TestPinAction:
    """Test cases for the twisted adjoint and spinor actions."""

    def test_reflection_preserves_the_form(self, clifford: CliffordService, sampler):
        q = quadratic_form(3, "diagonal")
        g = CliffordElem.vector((QQ(1), QQ(2), QQ(0)))
        v = sampler.vector(3)
        w = clifford.rho(g, v, q)
        assert sum((x * x for x in w), QQ.zero) == sum((x * x for x in v), QQ.zero)

    def test_null_norm_is_not_in_pin(self, clifford: CliffordService):
        q = quadratic_form(2, "diagonal")
        g = CliffordElem(2, {(): 1, (0,): 1})
        with pytest.raises(NotInPinError) as exc_info:
            clifford.rho(g, (QQ(1), QQ(0)), q)
        assert exc_info.value.message == "not in Pin"

    def test_spin_action_on_null_subspace(self, clifford: CliffordService):
        q = quadratic_form(4)
        one = CliffordElem.scalar(4)
        assert clifford.spin_action((1, 0, 0, 0), one, q).terms == {(0,): QQ.one}
        assert not clifford.spin_action((0, 0, 1, 0), one, q)

    def test_spin_action_needs_even_spinor(self, clifford: CliffordService):
        with pytest.raises(InputValidationException):
            clifford.spin_action((1, 0, 0, 0), CliffordElem.blade(4, (0,)), quadratic_form(4))

    def test_spin_action_needs_null_subspace(self, clifford: CliffordService):
        with pytest.raises(InputValidationException):
            clifford.spin_action((1, 0), CliffordElem.scalar(2), quadratic_form(2, "diagonal"), [0])


class TestCliffordModules:
    """Test cases for Clifford modules from second fundamental forms."""

    @pytest.mark.parametrize(("spec", "kernel"), [("severi:1", 0), ("severi:2", 1)])
    def test_severi_varieties(self, catalog, clifford: CliffordService, spec: str, kernel: int):
        modules = clifford.module_for_variety(catalog.parse_spec(spec), points=2)
        assert len(modules) == 2
        for data in modules:
            assert data.ann_dim == 1
            assert data.ker_ii_v_dim == kernel
            assert data.relation_holds
            assert data.kernel_in_p_sing
            assert data.bertini_inclusion
            assert data.single_quadric
            assert len(data.module_maps) == kernel

    @pytest.mark.slow
    @pytest.mark.parametrize(("spec", "kernel"), [("severi:4", 3), ("severi:8", 7)])
    def test_large_severi_varieties(self, catalog, clifford: CliffordService, spec: str, kernel: int):
        (data,) = clifford.module_for_variety(catalog.parse_spec(spec))
        assert data.ker_ii_v_dim == kernel
        assert data.relation_holds

    def test_needs_critical_defect(self, clifford: CliffordService, variety_factory):
        system = variety_factory.system(2, [[0, 1], [1, 0]])
        with pytest.raises(NoCriticalDefectError) as exc_info:
            clifford.clifford_module_from_ii(system, (QQ(1), QQ(1)))
        assert exc_info.value.details["ann_dim"] == 0

    def test_segre_plane_module_at_a_chosen_vector(self, clifford: CliffordService, variety_factory):
        """``|II|`` of P2 x P2 spanned by ``x_i y_j`` at ``v = e_x1 + e_y1``: ``Q_v = -1`` and ``M^2 = I``."""
        system = variety_factory.system(
            4,
            [[0, 0, 1, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]],
            [[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]],
            [[0, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 0]],
            [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 1, 0, 0]],
        )
        data = clifford.clifford_module_from_ii(system, (QQ(1), QQ(0), QQ(1), QQ(0)))
        assert data.ker_ii_v_dim == 1
        assert data.q_v == [["-1"]]
        (m,) = data.module_maps
        assert len(m) == 2
        square = [[sum(to_rat(m[i][k]) * to_rat(m[k][j]) for k in range(2)) for j in range(2)] for i in range(2)]
        assert square == [[1, 0], [0, 1]]

    def test_relation_sign_is_fixed(self):
        """``M^2 = I`` needs ``Q_v = -1``; the opposite sign is reported, not accepted."""
        identity = [[QQ(1), QQ(0)], [QQ(0), QQ(1)]]
        CliffordService._check_relation([identity], [[QQ(-1)]])
        with pytest.raises(CliffordRelationError) as exc_info:
            CliffordService._check_relation([identity], [[QQ(1)]])
        assert exc_info.value.details["pair"] == [0, 0]
        assert exc_info.value.details["expected"] == "-2"
        assert exc_info.value.details["found"] == "2"

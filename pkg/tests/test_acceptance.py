"""Tests for the acceptance table.

Row selection and failure reporting run on stub rows; the reproduced tables
themselves are slow and marked accordingly.
"""

import pytest

from src.projdiff.exceptions import GenericityException, InputValidationException
from src.projdiff.services.acceptance_service import AcceptanceService


@pytest.fixture
def acceptance(run_config) -> AcceptanceService:
    """Create AcceptanceService instance for testing."""
    return AcceptanceService(run_config)


class TestRowSelection:
    """Test cases for selecting and running rows."""

    def test_row_ids_in_table_order(self, acceptance: AcceptanceService):
        assert acceptance.row_ids == tuple(str(i) for i in range(1, 12))

    def test_unknown_rows(self, acceptance: AcceptanceService):
        with pytest.raises(InputValidationException) as exc_info:
            acceptance.run(["2", "42", "x"])
        assert exc_info.value.details == {"field": "rows", "value": "42,x"}

    def test_seed_count_must_be_positive(self, run_config):
        with pytest.raises(InputValidationException):
            AcceptanceService(run_config, seeds=0)

    def test_rows_run_at_three_seeds_by_default(self, acceptance: AcceptanceService):
        seen = []

        def check(services):
            seen.append(services.config.seed)
            return True, {}

        assert acceptance.seeds == 3
        acceptance._rows = {"stub": ("stub row", check)}
        assert acceptance.run().passed == 1
        assert seen == [7, 8, 9]

    def test_passing_stub_row(self, acceptance: AcceptanceService):
        seen = []

        def check(services):
            seen.append(services.config.seed)
            return True, {"value": 1}

        acceptance._rows = {"stub": ("stub row", check)}
        acceptance.seeds = 3
        report = acceptance.run()
        assert report.passed == 1
        assert report.failed == 0
        assert seen == [7, 8, 9]
        assert report.rows[0].detail == {"seed": 9, "value": 1}

    def test_failing_seed_detail_is_kept(self, acceptance: AcceptanceService):
        def check(services):
            return services.config.seed != 8, {"seed_seen": services.config.seed}

        acceptance._rows = {"stub": ("stub row", check)}
        acceptance.seeds = 3
        row = acceptance.run_row("stub")
        assert not row.passed
        assert row.detail == {"seed": 8, "seed_seen": 8}

    def test_raised_error_marks_row_failed(self, acceptance: AcceptanceService):
        def check(services):
            raise GenericityException("genericity failure, re-seed", attempts=3)

        acceptance._rows = {"stub": ("stub row", check), "ok": ("fine", lambda s: (True, {}))}
        report = acceptance.run()
        assert [row.passed for row in report.rows] == [False, True]
        assert report.rows[0].detail["code"] == "genericity_error"
        assert report.rows[0].detail["error"] == "genericity failure, re-seed"


@pytest.mark.slow
class TestAcceptanceTable:
    """Reproduce the reference tables."""

    @pytest.mark.parametrize("row", [str(i) for i in range(1, 12)])
    def test_row_passes(self, acceptance: AcceptanceService, row: str):
        report = acceptance.run([row])
        assert report.failed == 0, report.rows[0].detail

    def test_secant_detail(self, acceptance: AcceptanceService):
        detail = acceptance.run_row("1").detail
        assert detail["secant"]["segre:2,2"] == {"dim": 7, "defect": 2}
        assert detail["secant"]["severi:8"] == {"dim": 25, "defect": 8}

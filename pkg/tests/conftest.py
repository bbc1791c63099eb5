"""Test configuration and fixtures.

This module provides test settings, run configurations, seeded samplers,
service fixtures and a factory for small varieties and quadric systems.
"""

import json
from pathlib import Path
from typing import Any

import pytest
from sympy.polys.domains import QQ

from src.projdiff.config import RunConfig, Settings
from src.projdiff.dependencies import Services, get_services
from src.projdiff.exact.sampling import RationalSampler
from src.projdiff.models.jets import QuadricSystem
from src.projdiff.models.variety import ParamVariety
from src.projdiff.services.catalog_service import CatalogService
from src.projdiff.services.clifford_service import CliffordService
from src.projdiff.services.defect_service import DefectService
from src.projdiff.services.jet_service import JetService
from src.projdiff.services.matspace_service import MatspaceService
from src.projdiff.services.osc_service import OscService

TEST_SEED = 7
RANDOMIZED_SEEDS = (7, 11, 2024)
GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def test_settings() -> Settings:
    """Create test settings."""
    return Settings(
        seed=TEST_SEED,
        debug=True,
        log_level="DEBUG",
        environment="testing",
    )


@pytest.fixture(scope="session")
def run_config(test_settings: Settings) -> RunConfig:
    """Create the run configuration shared by service fixtures."""
    return RunConfig.from_settings(test_settings)


@pytest.fixture(scope="function")
def sampler(run_config: RunConfig) -> RationalSampler:
    """Create a fresh seeded sampler."""
    return run_config.sampler(stream=99)


@pytest.fixture(scope="session")
def services(run_config: RunConfig) -> Services:
    """Create the service container."""
    return get_services(run_config)


@pytest.fixture(scope="session")
def catalog(services: Services) -> CatalogService:
    return services.catalog


@pytest.fixture(scope="session")
def jets(services: Services) -> JetService:
    return services.jets


@pytest.fixture(scope="session")
def defects(services: Services) -> DefectService:
    return services.defects


@pytest.fixture(scope="session")
def matspaces(services: Services) -> MatspaceService:
    return services.matspaces


@pytest.fixture(scope="session")
def clifford(services: Services) -> CliffordService:
    return services.clifford


@pytest.fixture(scope="session")
def osc(services: Services) -> OscService:
    return services.osc


@pytest.fixture(params=RANDOMIZED_SEEDS, ids=lambda s: f"seed{s}")
def seeded_services(request: pytest.FixtureRequest, run_config: RunConfig) -> Services:
    """Services at each of several distinct seeds."""
    return get_services(run_config.model_copy(update={"seed": request.param}))


@pytest.fixture(scope="session")
def variety_factory(catalog: CatalogService) -> "VarietyFactory":
    return VarietyFactory(catalog)


def load_golden(name: str) -> dict[str, Any]:
    """Partial expected document from ``tests/golden``."""
    return json.loads((GOLDEN_DIR / f"{name}.json").read_text(encoding="utf-8"))


def assert_subset(expected: Any, actual: Any, path: str = "$") -> None:
    """Every key and value of ``expected`` appears in ``actual``."""
    if isinstance(expected, dict):
        assert isinstance(actual, dict), f"{path}: expected an object"
        for key, value in expected.items():
            assert key in actual, f"{path}.{key}: missing"
            assert_subset(value, actual[key], f"{path}.{key}")
    else:
        assert expected == actual, f"{path}: {expected!r} != {actual!r}"


class VarietyFactory:
    """Factory for small varieties and quadric systems."""

    def __init__(self, catalog: CatalogService) -> None:
        self.catalog = catalog

    def twisted_cubic(self) -> ParamVariety:
        return self.catalog.veronese(1, 3)

    def conic(self) -> ParamVariety:
        return self.catalog.veronese(1, 2)

    def quadric_surface(self) -> ParamVariety:
        """The hyperbolic quadric ``Seg(P^1 x P^1)``."""
        return self.catalog.segre([1, 1])

    def surface_graph(self, *polys: str) -> ParamVariety:
        return self.catalog.graph_variety(2, list(polys))

    @staticmethod
    def system(n: int, *rows: list[list[int]]) -> QuadricSystem:
        """Quadric system from integer matrices."""
        return QuadricSystem(n, tuple(tuple(tuple(QQ(x) for x in row) for row in m) for m in rows))

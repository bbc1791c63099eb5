"""Service wiring for command handlers.

This module builds the service instances a command needs from a run
configuration. Services that share Taylor data share one ``JetService``.
"""

from dataclasses import dataclass

from .config import RunConfig
from .services.catalog_service import CatalogService
from .services.clifford_service import CliffordService
from .services.defect_service import DefectService
from .services.jet_service import JetService
from .services.matspace_service import MatspaceService
from .services.osc_service import OscService


@dataclass(frozen=True)
class Services:
    """Every computation service bound to one run configuration."""

    config: RunConfig
    catalog: CatalogService
    jets: JetService
    defects: DefectService
    matspaces: MatspaceService
    clifford: CliffordService
    osc: OscService


def get_services(config: RunConfig) -> Services:
    """Build the services of one run.

    Args:
        config: Run configuration

    Returns:
        Services: Service container sharing a single jet service
    """
    jets = JetService(config)
    return Services(
        config=config,
        catalog=CatalogService(config),
        jets=jets,
        defects=DefectService(config, jets),
        matspaces=MatspaceService(config),
        clifford=CliffordService(config, jets),
        osc=OscService(config, jets),
    )

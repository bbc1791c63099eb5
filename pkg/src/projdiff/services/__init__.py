"""Computation layer.

This module provides one service per laboratory module: the variety
catalog, jets and fundamental forms, defects, matrix spaces, Clifford
algebras and osculation. The acceptance table lives in
``acceptance_service`` because it depends on the service container.
"""

from .catalog_service import CatalogService, CatalogServiceError, InvalidVarietySpecError
from .clifford_service import CliffordService, CliffordServiceError
from .defect_service import DefectService, MethodDisagreementError
from .jet_service import JetService, JetServiceError, PointNotGeneralError
from .matspace_service import MatspaceService
from .osc_service import OscService, OscServiceError

__all__ = [
    "CatalogService",
    "CatalogServiceError",
    "InvalidVarietySpecError",
    "CliffordService",
    "CliffordServiceError",
    "DefectService",
    "MethodDisagreementError",
    "JetService",
    "JetServiceError",
    "PointNotGeneralError",
    "MatspaceService",
    "OscService",
    "OscServiceError",
]

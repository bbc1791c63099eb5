"""Pydantic report schemas.

This module exports every report model written by the command line.
"""

from .acceptance_schemas import AcceptanceReport, AcceptanceRow
from .catalog_schemas import VarietyInfo
from .clifford_schemas import CliffordCheckReport, CliffordModuleData, CliffordModuleReport
from .common import ErrorDetail, ErrorResponse, fmt_matrix, fmt_rat, fmt_vector
from .defect_schemas import (
    DefectChecks,
    DefectReport,
    DualReport,
    DualSecondFFReport,
    GaussReport,
    JoinReport,
    SecantReport,
    TangentialReport,
)
from .jet_schemas import FundamentalFormReport, ProlongationReport, RefinedCubicReport
from .matspace_schemas import (
    DoublingReport,
    MatchReport,
    OddRankReport,
    PencilRefutation,
    RankBounds,
    RankCertificate,
)
from .osc_schemas import (
    LineReport,
    MaximalRankLevel,
    MaximalRankReport,
    MongeSolution,
    OscReport,
    SyzygyReport,
)

__all__ = [
    # Catalog and jets
    "VarietyInfo",
    "FundamentalFormReport",
    "ProlongationReport",
    "RefinedCubicReport",
    # Defects
    "DefectChecks",
    "DefectReport",
    "DualReport",
    "DualSecondFFReport",
    "GaussReport",
    "JoinReport",
    "SecantReport",
    "TangentialReport",
    # Matrix spaces
    "DoublingReport",
    "MatchReport",
    "OddRankReport",
    "PencilRefutation",
    "RankBounds",
    "RankCertificate",
    # Clifford
    "CliffordCheckReport",
    "CliffordModuleData",
    "CliffordModuleReport",
    # Osculation
    "LineReport",
    "MaximalRankLevel",
    "MaximalRankReport",
    "MongeSolution",
    "OscReport",
    "SyzygyReport",
    # Acceptance and errors
    "AcceptanceReport",
    "AcceptanceRow",
    "ErrorDetail",
    "ErrorResponse",
    "fmt_matrix",
    "fmt_rat",
    "fmt_vector",
]

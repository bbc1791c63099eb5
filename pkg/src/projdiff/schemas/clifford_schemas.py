"""Clifford algebra reports."""

from pydantic import Field

from .common import ReportModel


class CliffordCheckReport(ReportModel):
    """Relation suite for ``Cl(V, Q)`` on the exterior algebra."""

    m: int
    form: str
    relation_pairs: int
    relation_holds: bool
    associativity_trials: int
    associativity_holds: bool
    parity_holds: bool
    rho_trials: int
    rho_preserves_q: bool
    seed: int

    @property
    def passed(self) -> bool:
        return self.relation_holds and self.associativity_holds and self.parity_holds and self.rho_preserves_q


class CliffordModuleData(ReportModel):
    """Clifford module structure induced by a system with critical tangential defect."""

    variety: str | None = None
    v: list[str]
    ann_dim: int
    p_sing_dim: int
    ker_ii_v_dim: int
    sa_dim: int
    q_v: list[list[str]] = Field(description="Induced quadratic form on ker II_v")
    module_maps: list[list[list[str]]] = Field(
        description="Endomorphism of T / P_sing per basis vector of ker II_v"
    )
    relation_holds: bool
    kernel_in_p_sing: bool
    bertini_inclusion: bool
    single_quadric: bool
    seed: int


class CliffordModuleReport(ReportModel):
    """Clifford module data at several points of one variety."""

    variety: str
    modules: list[CliffordModuleData]
    seed: int

    @property
    def verified(self) -> bool:
        return all(
            m.relation_holds and m.kernel_in_p_sing and m.bertini_inclusion and m.single_quadric
            for m in self.modules
        )

"""Solved scenario results and the accounting done on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

from .tech_catalog import TechCatalog, TechnologyRecord, mwh_per_gw

if TYPE_CHECKING:
    from .scenario_engine import Scenario

EXISTING, NEW = "existing", "new"
SHARE_GROUPS = ("thermal", "nuclear", "hydro", "wind", "solar")
_GROUP_OF_CLASS = {"fossil_thermal": "thermal", "nuclear": "nuclear", "hydro": "hydro", "wind": "wind", "solar": "solar"}


@dataclass(frozen=True)
class DispatchSolution:
    scenario: "Scenario"
    generation: Mapping[tuple[str, str], float]  # (tech, vintage) -> MWh
    objective: float  # $
    new_capacity: Mapping[str, float]  # tech -> GW
    emissions: float  # tCO2
    shares: Mapping[str, float] = field(default_factory=dict)

    @property
    def total_generation(self) -> float:
        return math.fsum(self.generation.values())

    def tech_generation(self, tech_id: str) -> float:
        return self.generation.get((tech_id, EXISTING), 0.0) + self.generation.get((tech_id, NEW), 0.0)

    def new_generation(self, tech_id: str) -> float:
        return self.generation.get((tech_id, NEW), 0.0)


def emissions(generation: Mapping[tuple[str, str], float], catalog: TechCatalog) -> float:
    """Total tCO2 over both vintages."""
    return math.fsum(catalog[tech].emission_factor * x for (tech, _), x in generation.items())


def capacity_for(rec: TechnologyRecord, mwh: float) -> float:
    """GW needed to deliver ``mwh`` per year at the record's capacity factor."""
    return mwh / mwh_per_gw(rec)


def new_capacity(generation: Mapping[tuple[str, str], float], catalog: TechCatalog) -> dict[str, float]:
    """New-build GW for every expandable technology (0 where nothing is built)."""
    return {rec.id: capacity_for(rec, generation.get((rec.id, NEW), 0.0)) for rec in catalog if rec.expandable}


def class_shares(generation: Mapping[tuple[str, str], float], catalog: TechCatalog) -> dict[str, float]:
    """Generation shares by group; fossil classes are lumped as ``thermal``."""
    totals = dict.fromkeys(SHARE_GROUPS, 0.0)
    for (tech, _), x in generation.items():
        totals[_GROUP_OF_CLASS[catalog[tech].tech_class]] += x
    grand = math.fsum(totals.values())
    if grand <= 0:
        return dict.fromkeys(SHARE_GROUPS, 0.0)
    return {g: v / grand for g, v in totals.items()}

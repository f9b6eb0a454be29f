"""Cross-scenario comparison, the LCOE sweep, and CSV reports."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO

from . import scenario_engine
from .dispatch import (  # noqa: F401  (re-exported)
    EXISTING,
    NEW,
    SHARE_GROUPS,
    DispatchSolution,
    capacity_for,
    class_shares,
    emissions,
    new_capacity,
)
from .scenario_engine import RES_SHARE_FLOOR, Scenario, ScenarioInfeasible
from .tech_catalog import MWH_PER_TWH, DemandSpec, TechCatalog

SWEEP_TECHS = ("wind_offshore", "csp")
DEFAULT_SWEEP = (1.0, 0.9, 0.8, 0.7, 0.6, 0.5)

SCENARIO_COLUMNS = ("tech", "vintage", "generation_twh", "new_capacity_gw")
COMPARISON_COLUMNS = (
    "scenario",
    "thermal_share",
    "nuclear_share",
    "hydro_share",
    "wind_share",
    "solar_share",
    "emissions_mt",
    "cost_musd",
    "new_res_capacity_gw",
)
SWEEP_COLUMNS = ("factor", "offshore_share", "csp_share", "total_cost_musd")


def fmt(value: Optional[float]) -> str:
    """Six significant digits; empty for missing values."""
    if value is None:
        return ""
    text = format(value, ".6g")
    return "0" if text in ("-0", "0") else text


@dataclass(frozen=True)
class ComparisonRow:
    scenario: str
    shares: dict[str, float]
    emissions_t: float
    cost_usd: float
    new_res_capacity_gw: float


def new_res_capacity(solution: DispatchSolution, catalog: TechCatalog) -> float:
    return math.fsum(gw for tech, gw in solution.new_capacity.items() if catalog[tech].is_res)


def compare(solutions: Sequence[DispatchSolution], catalog: TechCatalog) -> list[ComparisonRow]:
    """One row per solution, in input order."""
    if not solutions:
        raise ValueError("compare needs at least one solution")
    return [
        ComparisonRow(s.scenario.name, dict(s.shares), s.emissions, s.objective, new_res_capacity(s, catalog))
        for s in solutions
    ]


@dataclass(frozen=True)
class SweepPoint:
    factor: float
    solution: Optional[DispatchSolution]
    infeasible_row: Optional[str] = None

    def share_of(self, tech_id: str) -> Optional[float]:
        if self.solution is None:
            return None
        total = self.solution.total_generation
        return self.solution.tech_generation(tech_id) / total if total else 0.0


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]
    scenario: Scenario

    @property
    def factors(self) -> list[float]:
        return [p.factor for p in self.points]


def lcoe_sweep(
    catalog: TechCatalog,
    demand: DemandSpec,
    factors: Iterable[float] = DEFAULT_SWEEP,
    techs: Sequence[str] = SWEEP_TECHS,
    scenario: Optional[Scenario] = None,
) -> SweepResult:
    """Re-run the 100%-RES case with the LCOE of ``techs`` scaled by each factor.

    Infeasible points are recorded, not raised.
    """
    factors = [float(f) for f in factors]
    if not factors or factors[0] != 1.0:
        raise ValueError("sweep factors must start at 1.0")
    if any(not 0 < f <= 1 for f in factors) or any(b >= a for a, b in zip(factors, factors[1:])):
        raise ValueError("sweep factors must be strictly decreasing within (0, 1]")
    scenario = scenario or Scenario("res-100", RES_SHARE_FLOOR, share=1.0)
    if scenario.family != RES_SHARE_FLOOR:
        raise ValueError("the LCOE sweep runs a res_share_floor scenario")
    present = [t for t in techs if t in catalog.ids()]
    points = []
    for f in factors:
        scaled = catalog.replace_records(**{t: {"delta": catalog[t].delta * f} for t in present})
        try:
            points.append(SweepPoint(f, scenario_engine.run(scenario, scaled, demand)))
        except ScenarioInfeasible as exc:
            points.append(SweepPoint(f, None, exc.row))
    return SweepResult(tuple(points), scenario)


# -- CSV writers ------------------------------------------------------------


def write_scenario_csv(solution: DispatchSolution, catalog: TechCatalog, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SCENARIO_COLUMNS)
    for rec in catalog:
        vintages = (EXISTING, NEW) if rec.expandable else (EXISTING,)
        for v in vintages:
            mwh = solution.generation.get((rec.id, v), 0.0)
            gw = solution.new_capacity.get(rec.id, 0.0) if v == NEW else 0.0
            writer.writerow([rec.id, v, fmt(mwh / MWH_PER_TWH), fmt(gw)])


def write_comparison_csv(rows: Sequence[ComparisonRow | str], stream: TextIO) -> None:
    """Comparison table; a bare scenario name stands for an infeasible run (empty cells)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COMPARISON_COLUMNS)
    for row in rows:
        if isinstance(row, str):
            writer.writerow([row] + [""] * (len(COMPARISON_COLUMNS) - 1))
            continue
        writer.writerow(
            [row.scenario]
            + [fmt(row.shares[g]) for g in SHARE_GROUPS]
            + [fmt(row.emissions_t / 1e6), fmt(row.cost_usd / 1e6), fmt(row.new_res_capacity_gw)]
        )


def write_sweep_csv(sweep: SweepResult, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for p in sweep.points:
        cost = None if p.solution is None else p.solution.objective / 1e6
        writer.writerow([fmt(p.factor), fmt(p.share_of("wind_offshore")), fmt(p.share_of("csp")), fmt(cost)])

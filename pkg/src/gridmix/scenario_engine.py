"""Policy scenarios compiled into linear programs over annual generation.

Each technology gets an ``existing`` column bounded by what the installed
fleet can produce, and, if it may expand, a ``new`` column bounded by its
new-build potential and costed at its LCOE. Every scenario carries one
demand row; policy families add at most one more.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Optional, TextIO

from . import lp_core
from .dispatch import EXISTING, NEW, DispatchSolution, class_shares, emissions, new_capacity
from .lp_core import GE, LE, Constraint, LinearProgram
from .tech_catalog import (
    DemandSpec,
    TechCatalog,
    existing_generation_cap,
    marginal_cost_existing,
    marginal_cost_new,
    mwh_per_gw,
)

BAU = "bau"
COAL_TAX = "coal_tax"
RES_SHARE_FLOOR = "res_share_floor"
EMISSION_CAP = "emission_cap"
SCC = "scc"
RES_CAPACITY_TARGET = "res_capacity_target"
FAMILIES = (BAU, COAL_TAX, RES_SHARE_FLOOR, EMISSION_CAP, SCC, RES_CAPACITY_TARGET)

BASELINE_COAL_TAX = 5.3  # $/ton

DEMAND_ROW = "demand"
RES_SHARE_ROW = "res_share"
EMISSION_ROW = "emission_cap"
RES_CAPACITY_ROW = "res_capacity"


class ScenarioError(ValueError):
    pass


class ScenarioInfeasible(RuntimeError):
    """A scenario has no feasible dispatch; ``row`` names the culprit constraint."""

    def __init__(self, scenario: "Scenario", row: str):
        self.scenario, self.row = scenario, row
        super().__init__(f"scenario {scenario.name!r} is infeasible (binding row: {row})")


@dataclass(frozen=True)
class TaxPolicy:
    coal_tax_usd_per_ton: float = BASELINE_COAL_TAX
    coal_tax_multiplier: float = 1.0
    scc_usd_per_tco2: float = 0.0
    coal_ids: tuple[str, ...] = ("coal", "lignite")

    def __post_init__(self):
        for name in ("coal_tax_usd_per_ton", "coal_tax_multiplier", "scc_usd_per_tco2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ScenarioError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class Scenario:
    """A named policy case.

    Family parameters: ``share`` for res_share_floor, ``reduction`` and
    ``baseline_gt`` (GtCO2) for emission_cap, ``capacity_gw`` for
    res_capacity_target.
    """

    name: str
    family: str = BAU
    taxes: TaxPolicy = field(default_factory=TaxPolicy)
    share: Optional[float] = None
    reduction: Optional[float] = None
    baseline_gt: Optional[float] = None
    capacity_gw: Optional[float] = None
    demand_twh: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ScenarioError(f"scenario {self.name!r}: unknown family {self.family!r}")
        if self.family == RES_SHARE_FLOOR and not (self.share is not None and 0 < self.share <= 1):
            raise ScenarioError(f"scenario {self.name!r}: share must be in (0, 1], got {self.share}")
        if self.family == EMISSION_CAP:
            if not (self.reduction is not None and 0 < self.reduction < 1):
                raise ScenarioError(f"scenario {self.name!r}: reduction must be in (0, 1), got {self.reduction}")
            if self.baseline_gt is not None and not self.baseline_gt > 0:
                raise ScenarioError(f"scenario {self.name!r}: baseline emissions must be > 0")
        if self.family == RES_CAPACITY_TARGET and not (self.capacity_gw is not None and self.capacity_gw > 0):
            raise ScenarioError(f"scenario {self.name!r}: capacity target must be > 0, got {self.capacity_gw}")
        if self.demand_twh is not None and not self.demand_twh > 0:
            raise ScenarioError(f"scenario {self.name!r}: demand override must be > 0")

    def demand(self, default: DemandSpec) -> DemandSpec:
        return default if self.demand_twh is None else DemandSpec(self.demand_twh, default.year)


# 2005 power-sector emissions: user-supplied placeholder, see README
DEFAULT_BASELINE_2005_GT = 0.55


def builtin_scenarios(baseline_gt: float = DEFAULT_BASELINE_2005_GT) -> list[Scenario]:
    """The nine bundled policy scenarios, in their canonical order."""
    return [
        Scenario("bau", BAU),
        Scenario("coal-tax-200", COAL_TAX, TaxPolicy(coal_tax_multiplier=3.0)),
        Scenario("res-40", RES_SHARE_FLOOR, share=0.4),
        Scenario("res-60", RES_SHARE_FLOOR, share=0.6),
        Scenario("res-80", RES_SHARE_FLOOR, share=0.8),
        Scenario("res-100", RES_SHARE_FLOOR, share=1.0),
        Scenario("pledge-2030", EMISSION_CAP, reduction=0.35, baseline_gt=baseline_gt),
        Scenario("scc-20", SCC, TaxPolicy(scc_usd_per_tco2=20.0)),
        Scenario("res-450gw", RES_CAPACITY_TARGET, capacity_gw=450.0),
    ]


def builtin(name: str) -> Scenario:
    for sc in builtin_scenarios():
        if sc.name == name:
            return sc
    raise KeyError(f"no built-in scenario named {name!r}")


# -- scenario bundle JSON ---------------------------------------------------

_PARAM_KEYS = {
    RES_SHARE_FLOOR: {"share"},
    EMISSION_CAP: {"reduction", "baseline_gt"},
    RES_CAPACITY_TARGET: {"capacity_gw"},
}
_TAX_KEYS = {"coal_tax_usd_per_ton", "coal_tax_multiplier", "scc_usd_per_tco2", "coal_ids"}


def scenario_from_dict(d: dict[str, Any]) -> Scenario:
    try:
        name, family = d["name"], d["family"]
    except KeyError as exc:
        raise ScenarioError(f"scenario entry missing key {exc}") from None
    params = dict(d.get("parameters") or {})
    unknown = set(params) - _PARAM_KEYS.get(family, set())
    if unknown:
        raise ScenarioError(f"scenario {name!r}: unexpected parameter(s) {sorted(unknown)}")
    taxes = dict(d.get("taxes") or {})
    if set(taxes) - _TAX_KEYS:
        raise ScenarioError(f"scenario {name!r}: unexpected tax field(s) {sorted(set(taxes) - _TAX_KEYS)}")
    if "coal_ids" in taxes:
        taxes["coal_ids"] = tuple(taxes["coal_ids"])
    return Scenario(name, family, TaxPolicy(**taxes), demand_twh=d.get("demand_twh"), **params)


def scenario_to_dict(sc: Scenario) -> dict[str, Any]:
    params = {k: getattr(sc, k) for k in sorted(_PARAM_KEYS.get(sc.family, ()))}
    default = TaxPolicy()
    taxes = {
        k: (list(getattr(sc.taxes, k)) if k == "coal_ids" else getattr(sc.taxes, k))
        for k in sorted(_TAX_KEYS)
        if getattr(sc.taxes, k) != getattr(default, k)
    }
    return {"name": sc.name, "family": sc.family, "parameters": params, "taxes": taxes, "demand_twh": sc.demand_twh}


def load_bundle(source: TextIO | str) -> list[Scenario]:
    data = json.loads(source) if isinstance(source, str) else json.load(source)
    if not isinstance(data, list):
        raise ScenarioError("scenario bundle must be a JSON list")
    scenarios = [scenario_from_dict(d) for d in data]
    names = [s.name for s in scenarios]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ScenarioError(f"duplicate scenario names: {dupes}")
    return scenarios


def dump_bundle(scenarios: Iterable[Scenario]) -> str:
    return json.dumps([scenario_to_dict(s) for s in scenarios], indent=2) + "\n"


# -- compilation ------------------------------------------------------------


@dataclass(frozen=True)
class CompiledModel:
    lp: LinearProgram
    columns: tuple[tuple[str, str], ...]  # column index -> (tech, vintage)
    scenario: Scenario
    demand: DemandSpec

    def column(self, tech_id: str, vintage: str) -> int:
        return self.columns.index((tech_id, vintage))

    @property
    def row_names(self) -> list[str]:
        return [c.name for c in self.lp.constraints]


def compile_family(scenario: Scenario, catalog: TechCatalog, columns) -> list[Constraint]:
    """Extra policy rows for ``scenario`` over the given column layout."""
    fam = scenario.family
    if fam in (BAU, COAL_TAX, SCC):
        return []
    if fam == RES_SHARE_FLOOR:
        s = scenario.share
        # sum_RES x - s * sum_all x >= 0
        coefs = [(1.0 - s) if catalog[t].is_res else -s for t, _ in columns]
        return [Constraint(tuple(coefs), GE, 0.0, RES_SHARE_ROW)]
    if fam == EMISSION_CAP:
        if scenario.baseline_gt is None:
            raise ScenarioError(f"scenario {scenario.name!r}: emission cap needs baseline emissions")
        coefs = [catalog[t].emission_factor for t, _ in columns]
        cap = (1.0 - scenario.reduction) * scenario.baseline_gt * 1e9
        return [Constraint(tuple(coefs), LE, cap, EMISSION_ROW)]
    if fam == RES_CAPACITY_TARGET:
        res = [r for r in catalog if r.is_res]
        installed = math.fsum(r.existing_capacity for r in res)
        coefs = [1.0 / mwh_per_gw(catalog[t]) if v == NEW and catalog[t].is_res else 0.0 for t, v in columns]
        return [Constraint(tuple(coefs), GE, scenario.capacity_gw - installed, RES_CAPACITY_ROW)]
    raise ScenarioError(f"unknown family {fam!r}")


def compile(scenario: Scenario, catalog: TechCatalog, demand: DemandSpec) -> CompiledModel:
    """Build the LP for one scenario."""
    demand = scenario.demand(demand)
    taxes = scenario.taxes
    columns, costs, upper = [], [], []
    for rec in catalog:
        columns.append((rec.id, EXISTING))
        costs.append(marginal_cost_existing(rec, taxes))
        upper.append(existing_generation_cap(rec))
        if rec.expandable:
            columns.append((rec.id, NEW))
            costs.append(marginal_cost_new(rec, taxes))
            upper.append(rec.new_potential_annual)
    n = len(columns)
    rows = [Constraint((1.0,) * n, GE, demand.mwh, DEMAND_ROW)]
    rows += compile_family(scenario, catalog, columns)
    lp = LinearProgram(
        num_vars=n,
        objective=tuple(costs),
        constraints=tuple(rows),
        lower=(0.0,) * n,
        upper=tuple(upper),
        var_names=tuple(f"{t}.{v}" for t, v in columns),
    )
    return CompiledModel(lp, tuple(columns), scenario, demand)


def _binding_row(model: CompiledModel) -> str:
    """Name the constraint whose removal restores feasibility."""
    lp = model.lp
    for drop in reversed(range(1, len(lp.constraints))):
        kept = lp.constraints[:drop] + lp.constraints[drop + 1 :]
        if lp_core.solve(replace(lp, constraints=kept)).optimal:
            return lp.constraints[drop].name
    return DEMAND_ROW


def run(scenario: Scenario, catalog: TechCatalog, demand: DemandSpec) -> DispatchSolution:
    """Compile and solve one scenario.

    Raises :class:`ScenarioInfeasible` naming the binding row when no
    dispatch satisfies the scenario.
    """
    model = compile(scenario, catalog, demand)
    result = lp_core.solve(model.lp)
    if result.status is lp_core.Status.INFEASIBLE:
        raise ScenarioInfeasible(scenario, _binding_row(model))
    if not result.optimal:
        raise ScenarioError(f"scenario {scenario.name!r}: solver returned {result.status.value}")
    generation = {col: float(x) for col, x in zip(model.columns, result.x)}
    return DispatchSolution(
        scenario=scenario,
        generation=generation,
        objective=result.objective,
        new_capacity=new_capacity(generation, catalog),
        emissions=emissions(generation, catalog),
        shares=class_shares(generation, catalog),
    )

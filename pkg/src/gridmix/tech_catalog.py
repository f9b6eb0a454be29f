"""Aggregated plant types, their cost coefficients, and the bundled dataset."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from importlib import resources
from typing import TYPE_CHECKING, Mapping, Optional, TextIO

if TYPE_CHECKING:
    from .scenario_engine import TaxPolicy

CLASSES = ("fossil_thermal", "nuclear", "hydro", "wind", "solar")
RES_CLASSES = frozenset({"hydro", "wind", "solar"})
ZERO_FUEL_CLASSES = frozenset({"hydro", "wind", "solar"})
ZERO_EMISSION_CLASSES = frozenset({"nuclear", "hydro", "wind", "solar"})

HOURS_PER_YEAR = 8760.0
MWH_PER_TWH = 1e6
KG_PER_TON = 1000.0

COLUMNS = (
    "id",
    "class",
    "alpha_kg_per_mwh",
    "beta_usd_per_kg",
    "gamma_usd_per_mwh",
    "epsilon_usd_per_mwh",
    "delta_usd_per_mwh",
    "emission_t_per_mwh",
    "existing_capacity_gw",
    "capacity_factor",
    "hours_per_year",
    "new_potential_twh",
)

DEFAULT_CATALOG = "india2030.csv"
DEFAULT_DEMAND_TWH = 2499.0


class CatalogError(ValueError):
    """Bad catalog input; ``line`` and ``column`` locate the offending cell."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[str] = None):
        self.line, self.column = line, column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class TechnologyRecord:
    """One aggregated plant type.

    ``new_potential_twh`` is ``None`` for technologies that may not build new
    capacity; otherwise it bounds annual generation from new builds.
    """

    id: str
    tech_class: str
    alpha: float  # fuel use, kg/MWh
    beta: float  # fuel price incl. baseline coal tax, $/kg
    gamma: float  # fixed O&M, $/MWh
    epsilon: float  # variable O&M, $/MWh
    delta: float  # LCOE of new builds, $/MWh
    emission_factor: float  # tCO2/MWh
    existing_capacity: float  # GW
    capacity_factor: float
    hours_per_year: float = HOURS_PER_YEAR
    new_potential_twh: Optional[float] = None

    @property
    def expandable(self) -> bool:
        return self.new_potential_twh is not None

    @property
    def new_potential_annual(self) -> Optional[float]:
        """New-build potential in MWh/year."""
        return None if self.new_potential_twh is None else self.new_potential_twh * MWH_PER_TWH

    @property
    def is_res(self) -> bool:
        return self.tech_class in RES_CLASSES

    def problems(self) -> list[tuple[str, str]]:
        """``(column, message)`` pairs for every violated invariant."""
        out = []
        if self.tech_class not in CLASSES:
            out.append(("class", f"unknown class {self.tech_class!r}"))
        numeric = {
            "alpha_kg_per_mwh": self.alpha,
            "beta_usd_per_kg": self.beta,
            "gamma_usd_per_mwh": self.gamma,
            "epsilon_usd_per_mwh": self.epsilon,
            "delta_usd_per_mwh": self.delta,
            "emission_t_per_mwh": self.emission_factor,
            "existing_capacity_gw": self.existing_capacity,
            "new_potential_twh": self.new_potential_twh,
        }
        for col, v in numeric.items():
            if v is None:
                continue
            if not math.isfinite(v):
                out.append((col, f"non-finite value {v}"))
            elif v < 0:
                out.append((col, f"negative value {v}"))
        if not 0 < self.capacity_factor <= 1:
            out.append(("capacity_factor", f"capacity factor {self.capacity_factor} outside (0, 1]"))
        if not 0 < self.hours_per_year <= HOURS_PER_YEAR:
            out.append(("hours_per_year", f"hours {self.hours_per_year} outside (0, 8760]"))
        if self.tech_class in ZERO_FUEL_CLASSES and self.alpha * self.beta != 0:
            out.append(("alpha_kg_per_mwh", f"{self.tech_class} technology must have alpha*beta = 0"))
        if self.tech_class in ZERO_EMISSION_CLASSES and self.emission_factor != 0:
            out.append(("emission_t_per_mwh", f"{self.tech_class} technology must have zero emissions"))
        return out


@dataclass(frozen=True)
class TechCatalog:
    records: tuple[TechnologyRecord, ...]
    label: str = ""
    currency_year: str = ""

    def __post_init__(self):
        seen = set()
        for rec in self.records:
            if rec.id in seen:
                raise CatalogError(f"duplicate technology id {rec.id!r}")
            seen.add(rec.id)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, tech_id: str) -> TechnologyRecord:
        for rec in self.records:
            if rec.id == tech_id:
                return rec
        raise KeyError(tech_id)

    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    def by_class(self, tech_class: str) -> list[TechnologyRecord]:
        return [r for r in self.records if r.tech_class == tech_class]

    def replace_records(self, **changes: Mapping[str, dict]) -> "TechCatalog":
        """Copy with per-record field overrides, e.g. ``hydro={"delta": 50.0}``."""
        unknown = set(changes) - set(self.ids())
        if unknown:
            raise KeyError(f"unknown technologies: {sorted(unknown)}")
        recs = tuple(replace(r, **changes[r.id]) if r.id in changes else r for r in self.records)
        return replace(self, records=recs)

    def with_potentials(self, potentials_mwh: Mapping[str, float]) -> "TechCatalog":
        """Copy with new-build potentials (MWh/year) replaced for the given techs."""
        return self.replace_records(**{k: {"new_potential_twh": v / MWH_PER_TWH} for k, v in potentials_mwh.items()})

    def scale_potentials(self, factor: float) -> "TechCatalog":
        recs = tuple(
            replace(r, new_potential_twh=r.new_potential_twh * factor) if r.expandable else r for r in self.records
        )
        return replace(self, records=recs)


@dataclass(frozen=True)
class DemandSpec:
    annual_twh: float = DEFAULT_DEMAND_TWH
    year: str = "2030"

    def __post_init__(self):
        if not (math.isfinite(self.annual_twh) and self.annual_twh > 0):
            raise ValueError(f"demand must be positive, got {self.annual_twh}")

    @property
    def mwh(self) -> float:
        return self.annual_twh * MWH_PER_TWH


# -- cost coefficients ------------------------------------------------------


def _coal_surcharge_per_kg(rec: TechnologyRecord, taxes: "TaxPolicy") -> float:
    if rec.id not in taxes.coal_ids:
        return 0.0
    return taxes.coal_tax_usd_per_ton * (taxes.coal_tax_multiplier - 1.0) / KG_PER_TON


def marginal_cost_existing(rec: TechnologyRecord, taxes: "TaxPolicy") -> float:
    """Per-MWh cost of running an existing plant: fuel + O&M + carbon charge."""
    beta = max(rec.beta + _coal_surcharge_per_kg(rec, taxes), 0.0)
    cost = rec.alpha * beta + rec.gamma + rec.epsilon + taxes.scc_usd_per_tco2 * rec.emission_factor
    return max(cost, 0.0)


def marginal_cost_new(rec: TechnologyRecord, taxes: "TaxPolicy") -> float:
    """Per-MWh cost of a new build.

    The LCOE is all-in (capital, O&M and baseline fuel), so only policy
    surcharges are added on top.
    """
    if not rec.expandable:
        raise ValueError(f"technology {rec.id!r} cannot build new capacity")
    cost = rec.delta + taxes.scc_usd_per_tco2 * rec.emission_factor + rec.alpha * _coal_surcharge_per_kg(rec, taxes)
    return max(cost, 0.0)


def mwh_per_gw(rec: TechnologyRecord) -> float:
    """Annual MWh delivered by 1 GW of this technology."""
    return 1e3 * rec.capacity_factor * rec.hours_per_year


def existing_generation_cap(rec: TechnologyRecord) -> float:
    """Annual generation ceiling of the installed fleet, MWh."""
    return rec.existing_capacity * mwh_per_gw(rec)


# -- CSV i/o ----------------------------------------------------------------


def _parse_float(text: str, line: int, column: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise CatalogError(f"not a number: {text!r}", line, column) from None
    if not math.isfinite(v):
        raise CatalogError(f"non-finite value {text!r}", line, column)
    return v


def load_catalog(source: TextIO | str, label: str = "", currency_year: str = "") -> TechCatalog:
    """Parse the catalog CSV. ``source`` is a text stream or the CSV text itself."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise CatalogError("empty catalog", 1) from None
    missing = [c for c in COLUMNS if c not in header]
    if missing:
        raise CatalogError(f"missing required column(s): {', '.join(missing)}", 1)
    extra = [c for c in header if c not in COLUMNS]
    if extra:
        raise CatalogError(f"unexpected column(s): {', '.join(extra)}", 1)
    col = {name: header.index(name) for name in COLUMNS}

    records, seen = [], set()
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise CatalogError(f"expected {len(header)} fields, got {len(row)}", lineno)
        cell = {name: row[i].strip() for name, i in col.items()}
        tech_id = cell["id"]
        if not tech_id:
            raise CatalogError("empty id", lineno, "id")
        if tech_id in seen:
            raise CatalogError(f"duplicate id {tech_id!r}", lineno, "id")
        seen.add(tech_id)
        num = {
            name: _parse_float(cell[name], lineno, name)
            for name in COLUMNS[2:-1]
        }
        potential = cell["new_potential_twh"]
        rec = TechnologyRecord(
            id=tech_id,
            tech_class=cell["class"],
            alpha=num["alpha_kg_per_mwh"],
            beta=num["beta_usd_per_kg"],
            gamma=num["gamma_usd_per_mwh"],
            epsilon=num["epsilon_usd_per_mwh"],
            delta=num["delta_usd_per_mwh"],
            emission_factor=num["emission_t_per_mwh"],
            existing_capacity=num["existing_capacity_gw"],
            capacity_factor=num["capacity_factor"],
            hours_per_year=num["hours_per_year"],
            new_potential_twh=_parse_float(potential, lineno, "new_potential_twh") if potential else None,
        )
        problems = rec.problems()
        if problems:
            column, message = problems[0]
            raise CatalogError(message, lineno, column)
        records.append(rec)
    return TechCatalog(tuple(records), label, currency_year)


def _fmt(v: Optional[float]) -> str:
    if v is None:
        return ""
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def write_catalog(catalog: TechCatalog, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in catalog:
        writer.writerow(
            [r.id, r.tech_class]
            + [
                _fmt(v)
                for v in (
                    r.alpha,
                    r.beta,
                    r.gamma,
                    r.epsilon,
                    r.delta,
                    r.emission_factor,
                    r.existing_capacity,
                    r.capacity_factor,
                    r.hours_per_year,
                    r.new_potential_twh,
                )
            ]
        )


def data_path(name: str):
    """Path to a bundled data file."""
    return resources.files("gridmix") / "data" / name


def default_catalog() -> TechCatalog:
    """The bundled India 2030 placeholder dataset."""
    with data_path(DEFAULT_CATALOG).open(encoding="utf-8") as fh:
        return load_catalog(fh, label="india2030-default", currency_year="USD-2021")

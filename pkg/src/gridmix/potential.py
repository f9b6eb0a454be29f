"""Renewable potential: hourly traces to annual energy, districts up to the nation.

Potentials are new-build generation available per technology, in MWh/year.
They come from an external resource model as CSV files; this module only
annualizes and sums them.
"""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Mapping, Optional, TextIO

import numpy as np

from .tech_catalog import MWH_PER_TWH, TechCatalog, existing_generation_cap

LEVELS = ("district", "state", "region", "nation")
HOURS = 8760
HOURLY_COLUMNS = tuple(f"h{i:04d}" for i in range(1, HOURS + 1))
ANNUAL_COLUMNS = ("unit_id", "level", "parent_id", "tech_id", "annual_potential_twh")


class PotentialError(ValueError):
    pass


@dataclass
class PotentialNode:
    unit_id: str
    level: str
    parent_id: Optional[str] = None
    potentials: dict[str, float] = field(default_factory=dict)  # tech -> MWh/year

    def total(self, tech_id: str) -> float:
        return self.potentials.get(tech_id, 0.0)


@dataclass(frozen=True)
class HourlyTrace:
    tech_id: str
    unit_id: str
    values: np.ndarray  # MWh available in each hour

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (HOURS,):
            raise PotentialError(f"trace {self.unit_id}/{self.tech_id}: expected {HOURS} hourly values, got {values.size}")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise PotentialError(f"trace {self.unit_id}/{self.tech_id}: hourly values must be finite and >= 0")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def annualize(trace: HourlyTrace, regional_cf: float) -> float:
    """Annual MWh from an hourly trace, derated by the regional capacity factor."""
    if not 0 < regional_cf <= 1:
        raise PotentialError(f"regional capacity factor {regional_cf} outside (0, 1]")
    if len(trace.values) != HOURS:
        raise PotentialError(f"expected {HOURS} hourly values, got {len(trace.values)}")
    return regional_cf * math.fsum(trace.values.tolist())


def aggregate(nodes: Iterable[PotentialNode]) -> dict[str, PotentialNode]:
    """Fill every non-leaf node with the exact sum of its children.

    Returns a new ``{unit_id: node}`` mapping; input nodes are not mutated.
    Potentials given on non-leaf nodes are replaced by the children's sum.
    """
    by_id: dict[str, PotentialNode] = {}
    for node in nodes:
        if node.unit_id in by_id:
            raise PotentialError(f"duplicate unit id {node.unit_id!r}")
        if node.level not in LEVELS:
            raise PotentialError(f"unit {node.unit_id!r}: unknown level {node.level!r}")
        if any(v < 0 or not math.isfinite(v) for v in node.potentials.values()):
            raise PotentialError(f"unit {node.unit_id!r}: potentials must be finite and >= 0")
        by_id[node.unit_id] = PotentialNode(node.unit_id, node.level, node.parent_id, dict(node.potentials))

    nations = [n for n in by_id.values() if n.level == "nation"]
    if len(nations) != 1:
        raise PotentialError(f"expected exactly one nation node, found {len(nations)}")

    children: dict[str, list[str]] = defaultdict(list)
    for node in by_id.values():
        if node.level == "nation":
            if node.parent_id:
                raise PotentialError(f"nation {node.unit_id!r} must not have a parent")
            continue
        parent = by_id.get(node.parent_id or "")
        if parent is None:
            raise PotentialError(f"orphan unit {node.unit_id!r}: parent {node.parent_id!r} not found")
        if LEVELS.index(parent.level) != LEVELS.index(node.level) + 1:
            raise PotentialError(
                f"unit {node.unit_id!r} ({node.level}) has parent {parent.unit_id!r} at level {parent.level}"
            )
        children[parent.unit_id].append(node.unit_id)

    # strict level ordering already rules out cycles; walk once to be sure
    for node in by_id.values():
        seen, cur = set(), node
        while cur.parent_id:
            if cur.unit_id in seen:
                raise PotentialError(f"cycle through unit {cur.unit_id!r}")
            seen.add(cur.unit_id)
            cur = by_id[cur.parent_id]

    for level in LEVELS[1:]:
        for node in by_id.values():
            if node.level != level or not children[node.unit_id]:
                continue
            kids = [by_id[k] for k in sorted(children[node.unit_id])]
            techs = sorted({t for k in kids for t in k.potentials})
            node.potentials = {t: math.fsum(k.total(t) for k in kids) for t in techs}
    return by_id


def nation_potential(nodes: Iterable[PotentialNode]) -> dict[str, float]:
    """Technology -> MWh/year at the nation level after aggregation."""
    tree = aggregate(nodes)
    nation = next(n for n in tree.values() if n.level == "nation")
    return dict(nation.potentials)


def utilization_report(
    potential: Mapping[str, float],
    catalog: TechCatalog,
    classes: Iterable[str] = ("hydro", "wind", "solar"),
) -> dict[str, float]:
    """Share of each class's total potential already delivered by the installed fleet.

    ``potential`` maps technology id to nation-level new-build MWh/year;
    technologies missing from it fall back to the catalog's own potential.
    """
    out = {}
    for cls in classes:
        existing = new = 0.0
        for rec in catalog.by_class(cls):
            existing += existing_generation_cap(rec)
            if rec.id in potential:
                new += potential[rec.id]
            elif rec.expandable:
                new += rec.new_potential_annual
        total = existing + new
        if total <= 0:
            raise PotentialError(f"class {cls!r} has zero total potential")
        out[cls] = existing / total
    return out


# -- CSV i/o ----------------------------------------------------------------


def _twh_to_mwh(text: str, line: int) -> float:
    # decimal parsing keeps integer-MWh inputs exact
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise PotentialError(f"line {line}: not a number: {text!r}") from None
    if not value.is_finite() or value < 0:
        raise PotentialError(f"line {line}: potential must be finite and >= 0, got {text!r}")
    return float(value * int(MWH_PER_TWH))


def read_potential_csv(source: TextIO | str) -> list[PotentialNode]:
    """Parse ``unit_id,level,parent_id,tech_id,annual_potential_twh`` rows."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.DictReader(source)
    missing = [c for c in ANNUAL_COLUMNS if c not in (reader.fieldnames or ())]
    if missing:
        raise PotentialError(f"line 1: missing column(s): {', '.join(missing)}")
    nodes: dict[str, PotentialNode] = {}
    for line, row in enumerate(reader, start=2):
        uid, level, parent = row["unit_id"].strip(), row["level"].strip(), row["parent_id"].strip() or None
        node = nodes.get(uid)
        if node is None:
            node = nodes[uid] = PotentialNode(uid, level, parent)
        elif (node.level, node.parent_id) != (level, parent):
            raise PotentialError(f"line {line}: unit {uid!r} redeclared with a different level or parent")
        tech, value = row["tech_id"].strip(), row["annual_potential_twh"].strip()
        if not tech:
            continue  # structural row for an interior node
        if tech in node.potentials:
            raise PotentialError(f"line {line}: duplicate potential for {uid}/{tech}")
        node.potentials[tech] = _twh_to_mwh(value, line)
    return list(nodes.values())


def read_hourly_csv(source: TextIO | str) -> list[HourlyTrace]:
    """Parse ``unit_id,tech_id,h0001..h8760`` rows."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or tuple(header[:2]) != ("unit_id", "tech_id") or tuple(header[2:]) != HOURLY_COLUMNS:
        raise PotentialError("line 1: hourly header must be unit_id,tech_id,h0001..h8760")
    traces = []
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            values = np.array([float(v) for v in row[2:]])
        except ValueError as exc:
            raise PotentialError(f"line {line}: {exc}") from None
        try:
            traces.append(HourlyTrace(row[1], row[0], values))
        except PotentialError as exc:
            raise PotentialError(f"line {line}: {exc}") from None
    return traces


def is_hourly_header(first_line: str) -> bool:
    return first_line.startswith("unit_id,tech_id,h0001")


def write_potential_csv(potentials: Mapping[str, float], stream: TextIO) -> None:
    """Nation-level potentials in catalog units (``tech_id,new_potential_twh``)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["tech_id", "new_potential_twh"])
    for tech in sorted(potentials):
        writer.writerow([tech, repr(potentials[tech] / MWH_PER_TWH)])

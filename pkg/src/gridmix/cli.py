"""Batch front-end: run a scenario bundle against a catalog and write reports.

Exit codes: 0 when every scenario ran (infeasible ones are reported, not
fatal), 1 for bad input, 2 for anything unexpected.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, analysis, potential, scenario_engine
from .lp_core import LPValidationError
from .scenario_engine import ScenarioError, ScenarioInfeasible
from .tech_catalog import DEFAULT_DEMAND_TWH, CatalogError, DemandSpec, data_path, load_catalog

log = logging.getLogger("gridmix")

DATA_ENV = "GRIDMIX_DATA_DIR"
DEFAULT_SCENARIOS = "scenarios.json"
DEFAULT_CATALOG = "india2030.csv"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


@dataclass(frozen=True)
class RunConfig:
    catalog: Path
    scenarios: Path
    out: Optional[Path]
    potential: Optional[Path] = None
    demand_twh: Optional[float] = None
    sweep: tuple[float, ...] = ()
    jobs: int = 1
    dump_lp: Optional[str] = None
    verbosity: int = 0


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gridmix", description=__doc__.splitlines()[0])
    p.add_argument("--catalog", help=f"technology catalog CSV (default: {DEFAULT_CATALOG} in the data root)")
    p.add_argument("--potential", help="renewable potential CSV (hierarchy or hourly)")
    p.add_argument("--scenarios", help=f"scenario bundle JSON (default: {DEFAULT_SCENARIOS} in the data root)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--demand-twh", type=float, help=f"annual demand override (default {DEFAULT_DEMAND_TWH:g})")
    p.add_argument("--sweep", type=_float_list, default=(), help="LCOE factors, e.g. 1.0,0.9,0.8")
    p.add_argument("--jobs", type=int, default=1, help="scenarios solved concurrently")
    p.add_argument("--dump-lp", metavar="NAME", help="print the compiled LP of one scenario and exit")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _data_root() -> Path:
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else Path(str(data_path("")))


def _resolve(path: Optional[str], default: Optional[str]) -> Optional[Path]:
    if path is None:
        return None if default is None else _data_root() / default
    candidate = Path(path)
    if not candidate.exists() and not candidate.is_absolute() and (_data_root() / candidate).exists():
        return _data_root() / candidate
    return candidate


def parse_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.demand_twh is not None and not args.demand_twh > 0:
        raise InputError("--demand-twh must be > 0")
    if args.jobs < 1:
        raise InputError("--jobs must be >= 1")
    if args.out is None and args.dump_lp is None:
        raise InputError("--out is required unless --dump-lp is given")
    if args.out is not None and not args.out.strip():
        raise InputError("--out must not be empty")
    sweep = args.sweep
    if sweep and (sweep[0] != 1.0 or any(not 0 < f <= 1 for f in sweep) or any(b >= a for a, b in zip(sweep, sweep[1:]))):
        raise InputError("--sweep factors must start at 1.0 and strictly decrease within (0, 1]")
    return RunConfig(
        catalog=_resolve(args.catalog, DEFAULT_CATALOG),
        scenarios=_resolve(args.scenarios, DEFAULT_SCENARIOS),
        out=None if args.out is None else Path(args.out),
        potential=_resolve(args.potential, None),
        demand_twh=args.demand_twh,
        sweep=args.sweep,
        jobs=args.jobs,
        dump_lp=args.dump_lp,
        verbosity=args.verbose,
    )


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _load_potential(text: str) -> dict[str, float]:
    if potential.is_hourly_header(text.split("\n", 1)[0]):
        # each hourly unit counts as one region; traces are taken as already derated
        nodes: dict[str, potential.PotentialNode] = {"nation": potential.PotentialNode("nation", "nation")}
        for tr in potential.read_hourly_csv(text):
            node = nodes.setdefault(tr.unit_id, potential.PotentialNode(tr.unit_id, "region", "nation"))
            node.potentials[tr.tech_id] = node.potentials.get(tr.tech_id, 0.0) + potential.annualize(tr, 1.0)
        return potential.nation_potential(nodes.values())
    return potential.nation_potential(potential.read_potential_csv(text))


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _safe_name(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name)


def execute(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    inputs = {}
    text = _read(cfg.catalog)
    inputs["catalog"] = (cfg.catalog, text)
    try:
        catalog = load_catalog(text, label=cfg.catalog.name)
    except CatalogError as exc:
        raise InputError(f"{cfg.catalog}: {exc}") from None

    nation = None
    if cfg.potential is not None:
        text = _read(cfg.potential)
        inputs["potential"] = (cfg.potential, text)
        try:
            nation = _load_potential(text)
            catalog = catalog.with_potentials(nation)
        except (potential.PotentialError, KeyError) as exc:
            raise InputError(f"{cfg.potential}: {exc}") from None

    text = _read(cfg.scenarios)
    inputs["scenarios"] = (cfg.scenarios, text)
    try:
        scenarios = scenario_engine.load_bundle(text)
    except (ScenarioError, ValueError, TypeError) as exc:
        raise InputError(f"{cfg.scenarios}: {exc}") from None

    demand = DemandSpec(cfg.demand_twh) if cfg.demand_twh else DemandSpec()

    if cfg.dump_lp is not None:
        match = [s for s in scenarios if s.name == cfg.dump_lp]
        if not match:
            raise InputError(f"{cfg.scenarios}: no scenario named {cfg.dump_lp!r}")
        stdout.write(scenario_engine.compile(match[0], catalog, demand).lp.to_text())
        return 0

    def run_one(sc):
        try:
            return scenario_engine.run(sc, catalog, demand)
        except ScenarioInfeasible as exc:
            log.warning("%s", exc)
            return exc

    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        outcomes = list(pool.map(run_one, scenarios))
    sweep = analysis.lcoe_sweep(catalog, demand, cfg.sweep) if cfg.sweep else None
    log.info("solved %d scenarios in %.3f s", len(scenarios), time.perf_counter() - started)

    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    rows, statuses = [], {}
    for sc, res in zip(scenarios, outcomes):
        if isinstance(res, ScenarioInfeasible):
            rows.append(sc.name)
            statuses[sc.name] = f"infeasible ({res.row})"
            continue
        with open(out / f"{_safe_name(sc.name)}.csv", "w", encoding="utf-8", newline="") as fh:
            analysis.write_scenario_csv(res, catalog, fh)
        rows.append(analysis.compare([res], catalog)[0])
        statuses[sc.name] = "optimal"
    with open(out / "comparison.csv", "w", encoding="utf-8", newline="") as fh:
        analysis.write_comparison_csv(rows, fh)
    if sweep is not None:
        with open(out / "sweep.csv", "w", encoding="utf-8", newline="") as fh:
            analysis.write_sweep_csv(sweep, fh)
    if nation is not None:
        with open(out / "potential_nation.csv", "w", encoding="utf-8", newline="") as fh:
            potential.write_potential_csv(nation, fh)

    manifest = {
        "tool": "gridmix",
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "inputs": {role: {"path": str(p), "sha256": _sha256(t)} for role, (p, t) in inputs.items()},
        "demand_twh": demand.annual_twh,
        "sweep": list(cfg.sweep),
        "scenarios": statuses,
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    for name, status in statuses.items():
        log.info("%-16s %s", name, status)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
        logging.basicConfig(
            level=logging.WARNING - 10 * min(cfg.verbosity, 2), format="%(levelname)s %(message)s", force=True
        )
        return execute(cfg)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (InputError, LPValidationError, ScenarioError) as exc:
        print(f"gridmix: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"gridmix: internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

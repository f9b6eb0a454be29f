"""Acceptance criteria, one test per criterion, each prints a PASS/FAIL line."""

import random
import time

import numpy as np
import pytest

from gridmix import cli
from gridmix.analysis import SWEEP_TECHS, capacity_for, lcoe_sweep
from gridmix.lp_core import EQ, GE, LE, LinearProgram, enumerate_vertices_oracle, max_violation, solve
from gridmix.potential import PotentialNode, nation_potential
from gridmix.scenario_engine import (
    RES_SHARE_FLOOR,
    Scenario,
    ScenarioInfeasible,
    TaxPolicy,
    builtin,
    builtin_scenarios,
    compile,
    run,
)
from gridmix.tech_catalog import (
    DemandSpec,
    TechnologyRecord,
    default_catalog,
    existing_generation_cap,
    marginal_cost_existing,
    marginal_cost_new,
)


@pytest.fixture(scope="module")
def catalog():
    return default_catalog()


@pytest.fixture(scope="module")
def demand():
    return DemandSpec()


@pytest.fixture(scope="module")
def solutions(catalog, demand):
    return {s.name: run(s, catalog, demand) for s in builtin_scenarios()}


def random_lp(rng: random.Random) -> LinearProgram:
    n, m = rng.randint(1, 5), rng.randint(0, 5)
    rows = [
        ([rng.randint(-6, 6) for _ in range(n)], rng.choice([LE, GE, EQ]), rng.randint(-12, 12)) for _ in range(m)
    ]
    upper = [rng.choice([None, rng.randint(0, 10)]) for _ in range(n)]
    cost = [rng.randint(-6, 6) for _ in range(n)]
    return LinearProgram.build(cost, rows, upper=upper)


def test_c01_lp_oracle_equivalence(criterion):
    rng = random.Random(20300)
    lps = [random_lp(rng) for _ in range(300)]
    started = time.perf_counter()
    mismatches, statuses = 0, set()
    for lp in lps:
        a, b = solve(lp), enumerate_vertices_oracle(lp)
        statuses.add(a.status.value)
        if a.status is not b.status:
            mismatches += 1
        elif a.optimal and abs(a.objective - b.objective) > 1e-8 * max(1.0, abs(a.objective), abs(b.objective)):
            mismatches += 1
    elapsed = time.perf_counter() - started
    ok = mismatches == 0 and elapsed < 5.0 and len(statuses) == 3
    criterion("1 LP oracle equivalence", ok, f"{len(lps)} LPs, {mismatches} mismatches, {elapsed:.2f} s")
    assert ok


def test_c02_feasibility_and_tightness(criterion, catalog, demand, solutions):
    worst, gen_err = 0.0, 0.0
    for sc in builtin_scenarios():
        model = compile(sc, catalog, demand)
        x = solve(model.lp).x
        rhs_scale = max([1.0] + [abs(c.rhs) for c in model.lp.constraints])
        worst = max(worst, max_violation(model.lp, x) / rhs_scale)
        total = solutions[sc.name].total_generation
        gen_err = max(gen_err, abs(total - demand.mwh) / demand.mwh)
    ok = len(solutions) == 9 and worst <= 1e-6 and gen_err <= 1e-6
    criterion("2 feasibility and tightness", ok, f"max rel violation {worst:.1e}, generation rel err {gen_err:.1e}")
    assert ok


def test_c03_full_res_feasible_and_negative_control(criterion, catalog, demand, solutions):
    sol = solutions["res-100"]
    non_res = sum(v for (tech, _), v in sol.generation.items() if not catalog[tech].is_res)
    try:
        run(builtin("res-100"), catalog.scale_potentials(0.5), demand)
        control = "feasible"
    except ScenarioInfeasible as exc:
        control = f"infeasible ({exc.row})"
    ok = non_res == 0.0 and control.startswith("infeasible")
    criterion("3 100% RES feasible, scaled potential infeasible", ok, f"non-RES {non_res} MWh, control {control}")
    assert ok


def test_c04_monotonicity(criterion, catalog, demand):
    sols = [run(Scenario(f"s{s}", RES_SHARE_FLOOR, share=s), catalog, demand) for s in (0.4, 0.6, 0.8, 1.0)]
    costs = [s.objective for s in sols]
    ems = [s.emissions for s in sols]
    ok = (
        all(a <= b for a, b in zip(costs, costs[1:]))
        and all(a >= b for a, b in zip(ems, ems[1:]))
        and ems[-1] == 0.0
    )
    criterion("4 share-floor monotonicity", ok, "emissions Mt " + ", ".join(f"{e / 1e6:.1f}" for e in ems))
    assert ok


def test_c05_coal_tax_neutrality(criterion, solutions):
    bau, tax = solutions["bau"].generation, solutions["coal-tax-200"].generation
    diff = max(abs(bau[k] - tax[k]) for k in bau)
    ok = bau.keys() == tax.keys() and diff <= 1e-9 * max(bau.values())
    criterion("5 coal tax leaves the mix unchanged", ok, f"max generation diff {diff} MWh")
    assert ok


def test_c06_scc_effectiveness(criterion, catalog, solutions):
    coal = catalog["coal"]
    adder = 20.0 * coal.emission_factor
    none = TaxPolicy()
    cheapest_res = min(r.delta for r in catalog if r.is_res and r.expandable)
    # gap to the cheapest renewable new build, for both coal vintages
    gap = cheapest_res - min(marginal_cost_existing(coal, none), marginal_cost_new(coal, none))
    cut = 1.0 - solutions["scc-20"].emissions / solutions["bau"].emissions
    ok = abs(adder - 19.6) < 1e-12 and gap < 19.6 and cut >= 0.5
    criterion("6 SCC cuts emissions", ok, f"adder {adder:.2f} $/MWh, cost gap {gap:.1f} $/MWh, cut {cut:.1%}")
    assert ok


def test_c07_sweep_threshold(criterion, catalog, demand):
    sweep = lcoe_sweep(catalog, demand, [1.0, 0.5])
    full, half = sweep.points
    at_full = sum(full.solution.tech_generation(t) for t in SWEEP_TECHS)
    at_half = sum(half.solution.tech_generation(t) for t in SWEEP_TECHS)
    at_bound = all(half.solution.new_generation(t) == catalog[t].new_potential_annual for t in SWEEP_TECHS)
    ok = at_full == 0.0 and at_half > 0.0 and at_bound
    criterion("7 sweep threshold", ok, f"f=1.0 {at_full / 1e6:g} TWh, f=0.5 {at_half / 1e6:g} TWh, at bound {at_bound}")
    assert ok


def test_c08_capacity_arithmetic(criterion):
    wind = TechnologyRecord("w", "wind", 0, 0, 0, 0, 40, 0, 0, 0.25, new_potential_twh=500)
    gw = capacity_for(wind, 100e6)
    rng = np.random.default_rng(8)
    worst = 0.0
    for cf, cap in zip(rng.uniform(0.01, 1.0, 200), rng.uniform(0.0, 2000.0, 200)):
        rec = TechnologyRecord("t", "solar", 0, 0, 0, 0, 0, 0, float(cap), float(cf))
        worst = max(worst, abs(capacity_for(rec, existing_generation_cap(rec)) - cap) / max(cap, 1.0))
    ok = abs(gw - 45.66) <= 0.01 and worst <= 1e-12
    criterion("8 capacity arithmetic", ok, f"{gw:.4f} GW, round-trip rel err {worst:.1e}")
    assert ok


def test_c09_aggregation_conservation(criterion):
    rng = np.random.default_rng(9)
    techs = ("solar", "wind", "hydro")
    nodes = [PotentialNode("nation", "nation")]
    nodes += [PotentialNode(f"r{i}", "region", "nation") for i in range(5)]
    nodes += [PotentialNode(f"s{i}", "state", f"r{i % 5}") for i in range(10)]
    leaves = [
        PotentialNode(f"d{i}", "district", f"s{i % 10}", {t: float(v) for t, v in zip(techs, rng.lognormal(14, 2, 3))})
        for i in range(50)
    ]
    nation = nation_potential(nodes + leaves)
    worst = max(abs(nation[t] - sum(leaf.potentials[t] for leaf in leaves)) / nation[t] for t in techs)
    ok = worst <= 1e-9
    criterion("9 aggregation conservation", ok, f"50 districts, max rel err {worst:.1e}")
    assert ok


def test_c10_reproducibility(criterion, tmp_path, catalog, demand):
    for run_dir in ("a", "b"):
        assert cli.main(["--out", str(tmp_path / run_dir), "--sweep", "1.0,0.75,0.5"]) == 0
    names = sorted(p.name for p in (tmp_path / "a").glob("*.csv"))
    same = all((tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes() for n in names)
    started = time.perf_counter()
    for sc in builtin_scenarios():
        run(sc, catalog, demand)
    solver_time = time.perf_counter() - started
    ok = same and len(names) == 11 and solver_time < 1.0
    criterion("10 reproducibility", ok, f"{len(names)} CSVs identical {same}, 9 scenarios in {solver_time:.3f} s")
    assert ok

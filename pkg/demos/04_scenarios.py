"""Run the nine built-in policy scenarios and compare their mixes."""
from gridmix.analysis import compare
from gridmix.scenario_engine import builtin_scenarios, run
from gridmix.tech_catalog import DemandSpec, default_catalog

cat = default_catalog()
demand = DemandSpec()  # 2499 TWh

sols = [run(sc, cat, demand) for sc in builtin_scenarios()]
print(f"{'scenario':14} {'thermal':>8} {'hydro':>6} {'wind':>6} {'solar':>6} {'CO2 Mt':>8} {'cost $bn':>9}")
for row, sol in zip(compare(sols, cat), sols):
    s = row.shares
    print(f"{row.scenario:14} {s['thermal']:8.1%} {s['hydro']:6.1%} {s['wind']:6.1%} {s['solar']:6.1%} "
          f"{sol.emissions / 1e6:8.1f} {sol.objective / 1e9:9.2f}")

# tripling the coal tax does nothing here, coal stays cheapest
print(sols[0].generation == sols[1].generation)

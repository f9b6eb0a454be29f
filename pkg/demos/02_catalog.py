"""Inspect the bundled technology catalog and its cost coefficients."""
from gridmix.scenario_engine import TaxPolicy
from gridmix.tech_catalog import default_catalog, existing_generation_cap, marginal_cost_existing, marginal_cost_new

cat = default_catalog()
none = TaxPolicy()
scc = TaxPolicy(scc_usd_per_tco2=20)

print(f"{'tech':18} {'class':15} {'TWh cap':>8} {'$/MWh':>7} {'LCOE':>6} {'+SCC':>6}")
for r in cat:
    cap = existing_generation_cap(r) / 1e6
    new = f"{marginal_cost_new(r, none):6.1f}" if r.expandable else "     -"
    print(f"{r.id:18} {r.tech_class:15} {cap:8.1f} {marginal_cost_existing(r, none):7.2f} {new} "
          f"{marginal_cost_existing(r, scc):6.1f}")

# tweak one record without touching the shipped file
cheap_csp = cat.replace_records(csp={"delta": 45.0})
print(cheap_csp["csp"].delta, cat["csp"].delta)

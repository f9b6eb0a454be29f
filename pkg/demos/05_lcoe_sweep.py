"""How cheap must offshore wind and CSP get before a 100% RES system uses them?"""
import numpy as np

from gridmix.analysis import lcoe_sweep
from gridmix.tech_catalog import DemandSpec, default_catalog

cat = default_catalog()
factors = np.round(np.arange(1.0, 0.45, -0.05), 2)
sweep = lcoe_sweep(cat, DemandSpec(), list(factors))

for p in sweep.points:
    off, csp = p.share_of("wind_offshore"), p.share_of("csp")
    bar = "#" * int(round(100 * (off + csp)))
    print(f"{p.factor:4.2f}  offshore {off:6.2%}  csp {csp:6.2%}  {bar}")

# with half the potential the 100% RES floor cannot be met at any price
tight = lcoe_sweep(cat.scale_potentials(0.5), DemandSpec(), [1.0, 0.5])
print([(p.factor, p.infeasible_row) for p in tight.points])

"""Roll district-level renewable potential up to the nation."""
import numpy as np

from gridmix.potential import HourlyTrace, PotentialNode, aggregate, annualize, read_potential_csv
from gridmix.tech_catalog import data_path

# an hourly trace becomes an annual figure via the regional capacity factor
hours = np.arange(8760)
solar = np.clip(np.sin((hours % 24 - 6) / 12 * np.pi), 0, None) * 1000.0  # MWh each hour
print(annualize(HourlyTrace("solar_pv_ground", "d1", solar), 0.9) / 1e6, "TWh")

nodes = [
    PotentialNode("in", "nation"),
    PotentialNode("south", "region", "in"),
    PotentialNode("tn", "state", "south"),
    PotentialNode("d1", "district", "tn", {"wind_onshore": 4e6}),
    PotentialNode("d2", "district", "tn", {"wind_onshore": 6e6, "solar_pv_ground": 2e6}),
]
tree = aggregate(nodes)
print(tree["tn"].potentials, tree["in"].potentials)

# the bundled 50-district file sums to exactly the catalog potentials
with data_path("india_potential_districts.csv").open() as fh:
    bundled = aggregate(read_potential_csv(fh))
for tech, mwh in sorted(bundled["india"].potentials.items()):
    print(f"{tech:18} {mwh / 1e6:8.1f} TWh")

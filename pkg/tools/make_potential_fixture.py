"""Regenerate the synthetic district-level potential fixture.

National totals match the bundled catalog's new-build potentials exactly;
the split across 5 regions / 10 states / 50 districts is random but seeded.
Values are whole MWh so aggregation is exact.

    python tools/make_potential_fixture.py > src/gridmix/data/india_potential_districts.csv
"""

import sys

import numpy as np

from gridmix.tech_catalog import default_catalog

REGIONS = ("northern", "eastern", "western", "southern", "northeastern")
TECHS = ("hydro", "wind_onshore", "wind_offshore", "solar_pv_ground", "solar_pv_rooftop", "csp")


def split(total: int, weights: np.ndarray) -> list[int]:
    raw = np.floor(total * weights / weights.sum()).astype(np.int64)
    raw[-1] += total - raw.sum()
    return raw.tolist()


def twh(mwh: int) -> str:
    return f"{mwh // 10**6}.{mwh % 10**6:06d}"


def main(out=sys.stdout) -> None:
    rng = np.random.default_rng(2030)
    catalog = default_catalog()
    districts = []
    out.write("unit_id,level,parent_id,tech_id,annual_potential_twh\n")
    out.write("india,nation,,,\n")
    for r in REGIONS:
        out.write(f"{r},region,india,,\n")
        for s in range(2):
            state = f"{r}-s{s + 1}"
            out.write(f"{state},state,{r},,\n")
            districts += [(f"{state}-d{d + 1}", state) for d in range(5)]
    shares = {t: split(round(catalog[t].new_potential_annual), rng.gamma(2.0, size=len(districts))) for t in TECHS}
    for i, (d, state) in enumerate(districts):
        for t in TECHS:
            out.write(f"{d},district,{state},{t},{twh(shares[t][i])}\n")


if __name__ == "__main__":
    main()

import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridmix.scenario_engine import TaxPolicy
from gridmix.tech_catalog import (
    COLUMNS,
    CatalogError,
    DemandSpec,
    TechnologyRecord,
    data_path,
    default_catalog,
    existing_generation_cap,
    load_catalog,
    marginal_cost_existing,
    marginal_cost_new,
    write_catalog,
)

HEADER = ",".join(COLUMNS)


def csv_text(*rows):
    return "\n".join((HEADER,) + rows) + "\n"


def rec(**kw):
    base = dict(
        id="t",
        tech_class="fossil_thermal",
        alpha=0.0,
        beta=0.0,
        gamma=0.0,
        epsilon=0.0,
        delta=0.0,
        emission_factor=0.0,
        existing_capacity=1.0,
        capacity_factor=1.0,
    )
    base.update(kw)
    return TechnologyRecord(**base)


@pytest.fixture(scope="module")
def catalog():
    return default_catalog()


def test_default_installed_capacities(catalog):
    assert catalog["coal"].existing_capacity == 203
    assert catalog["hydro"].existing_capacity == 51
    assert catalog["wind_onshore"].existing_capacity == 40
    solar = sum(r.existing_capacity for r in catalog.by_class("solar"))
    assert solar == 46


def test_default_has_every_class(catalog):
    assert {r.tech_class for r in catalog} == {"fossil_thermal", "nuclear", "hydro", "wind", "solar"}


def test_default_demand():
    assert DemandSpec().annual_twh == 2499
    assert DemandSpec().mwh == 2.499e9
    with pytest.raises(ValueError):
        DemandSpec(0)


def test_capacity_factor_out_of_range():
    row = "x,solar,0,0,1,1,40,0,1,1.3,8760,10"
    with pytest.raises(CatalogError) as info:
        load_catalog(csv_text(row))
    assert info.value.line == 2
    assert info.value.column == "capacity_factor"


@pytest.mark.parametrize(
    "rows, column",
    [
        (("a,solar,0,0,1,1,40,0,1,0.2,8760,", "a,wind,0,0,1,1,40,0,1,0.2,8760,"), "id"),
        (("a,solar,0,0,-1,1,40,0,1,0.2,8760,",), "gamma_usd_per_mwh"),
        (("a,geothermal,0,0,1,1,40,0,1,0.2,8760,",), "class"),
        (("a,solar,0,0,1,1,40,0.5,1,0.2,8760,",), "emission_t_per_mwh"),
        (("a,solar,0,0,1,1,abc,0,1,0.2,8760,",), "delta_usd_per_mwh"),
    ],
)
def test_load_errors_locate_the_cell(rows, column):
    with pytest.raises(CatalogError) as info:
        load_catalog(csv_text(*rows))
    assert info.value.column == column
    assert info.value.line == 1 + len(rows)


def test_missing_column():
    text = HEADER.replace(",hours_per_year", "") + "\n"
    with pytest.raises(CatalogError, match="hours_per_year"):
        load_catalog(text)


def test_empty_potential_means_not_expandable():
    cat = load_catalog(csv_text("n,nuclear,0.02,100,10,2,120,0,7,0.8,8760,"))
    assert not cat["n"].expandable
    assert cat["n"].new_potential_annual is None


def test_round_trip_reproduces_bundled_file():
    source = data_path("india2030.csv").read_text(encoding="utf-8")
    out = io.StringIO()
    write_catalog(load_catalog(source), out)
    assert out.getvalue() == source


def test_file_order_is_preserved(catalog):
    source = data_path("india2030.csv").read_text(encoding="utf-8")
    ids = [line.split(",")[0] for line in source.splitlines()[1:]]
    assert catalog.ids() == ids


# -- cost coefficients ------------------------------------------------------


def test_baseline_coal_tax_component():
    # beta is nothing but the 5.3 $/ton baseline tax: 600 kg/MWh * 0.0053 $/kg
    coal = rec(id="coal", alpha=600.0, beta=5.3 / 1000)
    assert marginal_cost_existing(coal, TaxPolicy()) == pytest.approx(3.18, rel=1e-12)


def test_zero_fuel_existing_cost_is_om_only(catalog):
    pv = catalog["solar_pv_ground"]
    assert marginal_cost_existing(pv, TaxPolicy()) == pv.gamma + pv.epsilon


def test_scc_adds_carbon_charge_to_coal(catalog):
    coal = catalog["coal"]
    assert coal.emission_factor == 0.98
    base = marginal_cost_existing(coal, TaxPolicy())
    taxed = marginal_cost_existing(coal, TaxPolicy(scc_usd_per_tco2=20))
    assert taxed - base == pytest.approx(19.6, rel=1e-12)
    assert marginal_cost_new(coal, TaxPolicy(scc_usd_per_tco2=20)) == pytest.approx(coal.delta + 19.6, rel=1e-12)


def test_coal_tax_multiplier_surcharge(catalog):
    coal = catalog["coal"]
    # 200% increase on 5.3 $/ton = +10.6 $/ton = +0.0106 $/kg
    surcharge = 600 * 10.6 / 1000
    assert marginal_cost_existing(coal, TaxPolicy(coal_tax_multiplier=3)) == pytest.approx(
        marginal_cost_existing(coal, TaxPolicy()) + surcharge, rel=1e-12
    )
    assert marginal_cost_new(coal, TaxPolicy(coal_tax_multiplier=3)) == pytest.approx(coal.delta + surcharge)


def test_new_build_cost_without_taxes_is_lcoe(catalog):
    wind = catalog["wind_onshore"]
    assert marginal_cost_new(wind, TaxPolicy()) == wind.delta


def test_new_build_cost_on_non_expandable(catalog):
    with pytest.raises(ValueError, match="nuclear"):
        marginal_cost_new(catalog["nuclear"], TaxPolicy())


def test_marginal_cost_never_negative():
    cheap = rec(id="coal", alpha=600.0, beta=0.001)
    assert marginal_cost_existing(cheap, TaxPolicy(coal_tax_multiplier=0.0)) == 0.0


def test_default_dataset_cost_ordering(catalog):
    """Relationships the placeholder dataset is built to satisfy."""
    none = TaxPolicy()
    assert marginal_cost_new(catalog["csp"], none) > marginal_cost_new(catalog["solar_pv_ground"], none)
    res_new = {r.id: r.delta for r in catalog if r.is_res and r.expandable}
    top_two = sorted(res_new, key=res_new.get)[-2:]
    assert set(top_two) == {"csp", "wind_offshore"}
    assert catalog["nuclear"].delta == max(r.delta for r in catalog)
    existing = {r.id: marginal_cost_existing(r, none) for r in catalog if r.tech_class == "fossil_thermal"}
    assert min(existing, key=existing.get) == "coal"
    new = {r.id: r.delta for r in catalog if r.expandable}
    assert min(new, key=new.get) == "coal"


# -- generation caps --------------------------------------------------------


def test_existing_generation_cap_coal():
    coal = rec(existing_capacity=203, capacity_factor=0.6)
    assert existing_generation_cap(coal) == pytest.approx(203e3 * 0.6 * 8760, rel=1e-12)
    assert existing_generation_cap(coal) / 1e6 == pytest.approx(1067, abs=0.5)


def test_existing_generation_cap_trivial():
    assert existing_generation_cap(rec(existing_capacity=1, capacity_factor=1.0)) == 8.76e6
    assert existing_generation_cap(rec(existing_capacity=0)) == 0


@given(st.floats(0, 500), st.floats(0, 500))
def test_existing_generation_cap_is_linear(a, b):
    ra, rb, rab = rec(existing_capacity=a), rec(existing_capacity=b), rec(existing_capacity=a + b)
    assert existing_generation_cap(rab) == pytest.approx(
        existing_generation_cap(ra) + existing_generation_cap(rb), rel=1e-12, abs=1e-6
    )


@given(st.floats(0, 200), st.floats(0, 200), st.floats(0, 10), st.floats(0, 10))
def test_marginal_cost_monotone_in_taxes(scc1, scc2, mult1, mult2):
    lo_scc, hi_scc = sorted((scc1, scc2))
    lo_m, hi_m = sorted((mult1, mult2))
    coal = rec(id="coal", alpha=600.0, beta=0.035, gamma=4, epsilon=3, emission_factor=0.98)
    pv = rec(id="pv", tech_class="solar", gamma=4, epsilon=1)
    low, high = TaxPolicy(coal_tax_multiplier=lo_m, scc_usd_per_tco2=lo_scc), TaxPolicy(
        coal_tax_multiplier=hi_m, scc_usd_per_tco2=hi_scc
    )
    assert marginal_cost_existing(coal, low) <= marginal_cost_existing(coal, high)
    assert marginal_cost_existing(pv, low) == marginal_cost_existing(pv, high)

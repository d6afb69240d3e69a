from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nocmap.energy import (ebit_per_hop_path, edynoc_cdcm, edynoc_cdcm_breakdown, edynoc_cwm, enoc, estnoc,
                           pstnoc, resource_label, route_resources)
from nocmap.model import Mapping, Mesh, ModelError, NocParams, cwg_from_cdcg
from nocmap.sim import simulate

from conftest import random_instance

PJ = Fraction(1, 10**12)


def test_figure1_dynamic_energy_is_equal_for_both_mappings(fig1_app, fig1_platform, mapping_c, mapping_d):
    mesh, params = fig1_platform
    for m in (mapping_c, mapping_d):
        assert edynoc_cdcm(fig1_app, m, mesh, params) == 390 * PJ
        assert edynoc_cwm(cwg_from_cdcg(fig1_app), m, mesh, params).edy_noc == 390 * PJ


def test_single_packet_energy_matches_per_bit_formula():
    params = NocParams(erbit=3e-12, elbit=1e-12, ecbit=5e-13, ps_router=0, clock_period=1e-9, tr=1, tl=1,
                       flit_width=8)
    mesh = Mesh(4, 4)
    for src, dst in [(1, 16), (6, 6 + 1), (13, 4)]:
        eta = len(route_resources(mesh, src, dst)[0])
        per_bit = ebit_per_hop_path(eta, params)
        assert per_bit == eta * Fraction(3, 10**12) + (eta - 1) * Fraction(1, 10**12) + 2 * Fraction(5, 10**13)


def test_breakdown_charges_every_resource_on_route(fig1_app, fig1_platform, mapping_c):
    mesh, params = fig1_platform
    br = edynoc_cdcm_breakdown(fig1_app, mapping_c, mesh, params)
    # mapping (c): E on 4, A on 2; both E->A packets (35 bits) use routers 4 and 2 and link 4->2
    assert br.per_resource_bits[("L", 4, 2)] == 35
    assert br.per_resource_bits[("R", 4)] == 35
    assert sum(br.per_resource.values()) == br.edy_noc
    assert resource_label(("L", 4, 2)) == "τ4→τ2"
    assert resource_label(("Cin", 4)) == "core→τ4"
    assert resource_label(("Cout", 3)) == "τ3→core"


def test_static_energy_reproduces_one_percent_gap():
    params = NocParams(erbit=1e-12, elbit=1e-12, ps_router=1e-4, clock_period=1e-9, tr=2, tl=1, flit_width=1)
    pst = pstnoc(Mesh(2, 2), params)
    assert pst == Fraction(4, 10**4)  # 0.1 pJ/ns per router, four routers
    e100 = enoc(estnoc(pst, Fraction(100, 10**9)), 390 * PJ)
    e90 = enoc(estnoc(pst, Fraction(90, 10**9)), 390 * PJ)
    assert (e100, e90) == (430 * PJ, 426 * PJ)
    assert abs(float(e100 / e90) - 1.009) <= 0.001


def test_estnoc_rejects_negative_time():
    with pytest.raises(ValueError):
        estnoc(Fraction(1), Fraction(-1))


def test_ebit_rejects_zero_routers():
    with pytest.raises(ValueError):
        ebit_per_hop_path(0, NocParams(1e-12, 1e-12, 0, 1e-9, 1, 1, 1))


def test_unmapped_core_is_a_model_error(fig1_app, fig1_platform):
    mesh, params = fig1_platform
    with pytest.raises(ModelError):
        edynoc_cdcm(fig1_app, Mapping.from_dict({0: 1, 1: 2, 2: 3}), mesh, params)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_models_agree_on_dynamic_energy(seed):
    app, mesh, params, mapping = random_instance(seed)
    cdcm = edynoc_cdcm(app, mapping, mesh, params)
    assert cdcm == edynoc_cwm(cwg_from_cdcg(app), mapping, mesh, params).edy_noc
    assert cdcm == simulate(app, mapping, mesh, params).edy_noc

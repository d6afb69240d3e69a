from dataclasses import replace

import pytest

from nocmap import formats, profiles


@pytest.mark.parametrize("name, share", [("t035", 0.005), ("t007", 0.20)])
def test_static_share_on_reference_workload(name, share):
    _, params = formats.resolve_platform(name)
    got = float(profiles.static_share(params, *profiles.reference_workload()))
    assert got == pytest.approx(share, rel=0.01)


@pytest.mark.parametrize("name, share", [("t035", 0.005), ("t007", 0.20)])
def test_calibration_reproduces_shipped_leakage(name, share):
    _, params = formats.resolve_platform(name)
    assert profiles.calibrate_ps_router(replace(params, ps_router=0.0), share) == params

"""Technology profiles and the workload used to calibrate their static power."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

from .benchgen import generate, preset
from .energy import edynoc_cdcm
from .model import Cdcg, Mapping, Mesh, NocParams
from .sim import simulate

REFERENCE_PRESET = "3x3-3"


def reference_workload():
    """The 3x3 benchmark preset with cores placed on tiles in id order."""
    cfg = preset(REFERENCE_PRESET)
    app = generate(cfg)
    mesh = Mesh(*cfg.mesh)
    mapping = Mapping.from_vector(sorted(c.id for c in app.cores), range(1, len(app.cores) + 1))
    return app, mesh, mapping


def static_share(params: NocParams, app: Cdcg, mesh: Mesh, mapping: Mapping) -> Fraction:
    report = simulate(app, mapping, mesh, params)
    return report.est_noc / report.enoc


def calibrate_ps_router(params: NocParams, share: float, digits: int = 3) -> NocParams:
    """Router leakage giving ``share`` of static energy on the reference workload."""
    app, mesh, mapping = reference_workload()
    unit = replace(params, ps_router=1.0)
    report = simulate(app, mapping, mesh, unit)
    edy = edynoc_cdcm(app, mapping, mesh, unit)
    per_watt = report.est_noc  # static energy at 1 W per router
    ps = float(Fraction(share) / (1 - Fraction(share)) * edy / per_watt)
    return replace(params, ps_router=float(f"{ps:.{digits - 1}e}"))

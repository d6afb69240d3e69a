"""CWM versus CDCM: search both objectives and score both winners on the simulator."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import formats
from .mapper import CDCM, CWM, DEFAULT_ENUMERATION_LIMIT, Objective, SaParams, search
from .model import Cdcg, Mapping, Mesh, NocParams, cwg_from_cdcg
from .sim import simulate

DEFAULT_PROFILES = ("t035", "t007")
DEFAULT_ETR_PROFILE = "t007"


@dataclass
class ComparisonRow:
    """One application's outcome; ``ecs`` and ``etr`` are exact fractions."""

    app: str
    noc_size: str
    etr: Optional[Fraction]
    ecs_per_profile: Dict[str, Fraction]
    etr_per_profile: Dict[str, Fraction]
    cpu_time_ratio: Optional[float]
    ncc: int
    ndp: int
    error: Optional[str] = None
    mappings: Dict[str, Dict[str, Mapping]] = field(default_factory=dict)


def reduction(baseline, improved) -> Fraction:
    """``(baseline - improved) / baseline``; zero when the baseline is zero."""
    baseline, improved = Fraction(baseline), Fraction(improved)
    if baseline == 0:
        return Fraction(0)
    return (baseline - improved) / baseline


def ncc(app: Cdcg) -> int:
    return len(cwg_from_cdcg(app).edges)


def ndp(app: Cdcg) -> int:
    return len(app.packets) + len(app.deps)


def score(app: Cdcg, mesh: Mesh, params: NocParams, cwm_map: Mapping, cdcm_map: Mapping) -> Tuple[Fraction, Fraction]:
    """(ETR, ECS) of the CDCM mapping against the CWM mapping, both simulated."""
    a = simulate(app, cwm_map, mesh, params)
    b = simulate(app, cdcm_map, mesh, params)
    return reduction(a.texec, b.texec), reduction(a.enoc, b.enoc)


def compare_app(app: Cdcg, mesh: Mesh, profiles: Dict[str, NocParams], method: str = "sa",
                sa: SaParams = SaParams(), etr_profile: Optional[str] = None,
                timings: bool = False, limit: int = DEFAULT_ENUMERATION_LIMIT) -> ComparisonRow:
    etr_profile = etr_profile or (DEFAULT_ETR_PROFILE if DEFAULT_ETR_PROFILE in profiles else sorted(profiles)[0])
    if etr_profile not in profiles:
        raise KeyError(f"ETR profile {etr_profile!r} is not among {sorted(profiles)}")
    ecs, etr, maps = {}, {}, {}
    wall = {CWM: 0.0, CDCM: 0.0}
    for name in sorted(profiles):
        params = profiles[name]
        found = {}
        for kind in (CWM, CDCM):
            t0 = time.perf_counter()
            found[kind] = search(app, mesh, Objective(kind, params), method, sa, limit).best_mapping
            wall[kind] += time.perf_counter() - t0
        etr[name], ecs[name] = score(app, mesh, params, found[CWM], found[CDCM])
        maps[name] = found
    ratio = wall[CDCM] / wall[CWM] if timings and wall[CWM] > 0 else None
    return ComparisonRow(app=app.name, noc_size=str(mesh), etr=etr[etr_profile], ecs_per_profile=ecs,
                         etr_per_profile=etr, cpu_time_ratio=ratio, ncc=ncc(app), ndp=ndp(app), mappings=maps)


def row_doc(row: ComparisonRow) -> dict:
    doc = {"app": row.app, "noc_size": row.noc_size, "ncc": row.ncc, "ndp": row.ndp}
    if row.error is not None:
        doc["error"] = row.error
        return doc
    doc["etr"] = formats.ratio_value(row.etr)
    doc["ecs"] = {k: formats.ratio_value(v) for k, v in sorted(row.ecs_per_profile.items())}
    doc["etr_per_profile"] = {k: formats.ratio_value(v) for k, v in sorted(row.etr_per_profile.items())}
    doc["mappings"] = {p: {kind: [[c, t] for c, t in m.assignment] for kind, m in sorted(found.items())}
                       for p, found in sorted(row.mappings.items())}
    if row.cpu_time_ratio is not None:
        doc["cpu_time_ratio"] = row.cpu_time_ratio
    return doc


def recompute(doc: dict, app: Cdcg, mesh: Mesh, profiles: Dict[str, NocParams]) -> Dict[str, Tuple[str, str]]:
    """ETR/ECS per profile rebuilt from the mappings stored in a row document."""
    out = {}
    for p, found in doc["mappings"].items():
        cwm_map = Mapping.from_dict(dict(found[CWM]))
        cdcm_map = Mapping.from_dict(dict(found[CDCM]))
        e, s = score(app, mesh, profiles[p], cwm_map, cdcm_map)
        out[p] = (formats.ratio_value(e), formats.ratio_value(s))
    return out


def average(rows: Sequence[ComparisonRow]) -> Optional[ComparisonRow]:
    ok = [r for r in rows if r.error is None]
    if not ok:
        return None
    k = len(ok)
    profiles = sorted(ok[0].ecs_per_profile)
    ratios = [r.cpu_time_ratio for r in ok if r.cpu_time_ratio is not None]
    return ComparisonRow(
        app="average", noc_size="-",
        etr=sum((r.etr for r in ok), Fraction(0)) / k,
        ecs_per_profile={p: sum((r.ecs_per_profile[p] for r in ok), Fraction(0)) / k for p in profiles},
        etr_per_profile={p: sum((r.etr_per_profile[p] for r in ok), Fraction(0)) / k for p in profiles},
        cpu_time_ratio=sum(ratios) / len(ratios) if len(ratios) == k else None,
        ncc=round(sum(r.ncc for r in ok) / k), ndp=round(sum(r.ndp for r in ok) / k))


def _job(args):
    app, mesh, profiles, method, sa, etr_profile, timings, limit, outdir = args
    try:
        row = compare_app(app, mesh, profiles, method, sa, etr_profile, timings, limit)
    except Exception as exc:  # reported in the table, the batch goes on
        row = ComparisonRow(app=app.name, noc_size=str(mesh), etr=None, ecs_per_profile={},
                            etr_per_profile={}, cpu_time_ratio=None, ncc=ncc(app), ndp=ndp(app),
                            error=f"{type(exc).__name__}: {exc}")
    if outdir is not None:
        Path(outdir, f"{app.name}.json").write_text(formats.dumps(row_doc(row)), encoding="utf-8")
    return row


def compare_batch(apps: Sequence[Tuple[Cdcg, Mesh]], profiles: Dict[str, NocParams], method: str = "sa",
                  sa: SaParams = SaParams(), etr_profile: Optional[str] = None, timings: bool = False,
                  limit: int = DEFAULT_ENUMERATION_LIMIT, jobs: int = 1,
                  outdir: Optional[os.PathLike] = None) -> List[ComparisonRow]:
    """Rows sorted by application name whatever order the workers finish in."""
    names = [a.name for a, _ in apps]
    if len(set(names)) != len(names):
        raise ValueError("application names must be unique within a comparison")
    if outdir is not None:
        Path(outdir).mkdir(parents=True, exist_ok=True)
    work = [(a, m, profiles, method, sa, etr_profile, timings, limit, outdir) for a, m in apps]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_job, work))
    else:
        rows = [_job(w) for w in work]
    return sorted(rows, key=lambda r: r.app)


def _pct(x: Optional[Fraction]) -> str:
    return "-" if x is None else f"{float(x) * 100:.2f}%"


def table(rows: Sequence[ComparisonRow]) -> str:
    """Fixed-width text table with an average row."""
    rows = list(rows)
    profiles = sorted({p for r in rows for p in r.ecs_per_profile})
    avg = average(rows)
    show_cpu = any(r.cpu_time_ratio is not None for r in rows)
    head = ["app", "noc", "ETR"] + [f"ECS_{p}" for p in profiles] + ["NCC", "NDP"]
    if show_cpu:
        head.append("cpu_cdcm/cwm")
    body = []
    for r in rows + ([avg] if avg else []):
        if r.error is not None:
            body.append([r.app, r.noc_size, "error: " + r.error])
            continue
        line = [r.app, r.noc_size, _pct(r.etr)] + [_pct(r.ecs_per_profile.get(p)) for p in profiles]
        line += [str(r.ncc), str(r.ndp)]
        if show_cpu:
            line.append("-" if r.cpu_time_ratio is None else f"{r.cpu_time_ratio:.2f}")
        body.append(line)
    widths = [max(len(x[i]) for x in [head] + body if i < len(x)) for i in range(len(head))]
    fmt = lambda cells: "  ".join(c.ljust(widths[i]) if i < len(widths) else c for i, c in enumerate(cells)).rstrip()
    return "\n".join([fmt(head)] + [fmt(b) for b in body]) + "\n"

"""``nocmap`` command line: generate, map, evaluate, compare, trace.

Exit codes: 0 success, 1 compare finished with failed applications,
2 bad command line, 3 infeasible generator config or exhaustive search too
large, 4 invalid input file or model error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Tuple

from . import benchgen, compare, formats, trace
from .benchgen import BenchConfig, InfeasibleConfig
from .energy import edynoc_cwm, resource_label
from .mapper import DEFAULT_ENUMERATION_LIMIT, InstanceTooLarge, Objective, SaParams, search
from .model import Mesh, ModelError, cwg_from_cdcg
from .sim import contention_stats, simulate

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_INVALID = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _pair(text: str, sep: str = "x") -> Tuple[int, int]:
    try:
        a, b = text.lower().split(sep)
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers like 3{sep}4, got {text!r}") from None


def _range(text: str) -> Tuple[int, int]:
    return _pair(text, ":")


def _resolve_mesh(flag: Optional[Tuple[int, int]], *found) -> Mesh:
    """``--mesh`` wins; otherwise the meshes named in the input files, which must agree."""
    if flag is not None:
        return Mesh(*flag)
    meshes = {(m.width, m.height) if isinstance(m, Mesh) else tuple(m) for m in found if m is not None}
    if len(meshes) > 1:
        raise ModelError(f"input files disagree on the mesh: {sorted(meshes)}")
    if not meshes:
        raise UsageError("no mesh given; pass --mesh WxH or use files that name one")
    return Mesh(*meshes.pop())


def _emit(text: str, out: Optional[str]) -> None:
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------

def cmd_generate(args) -> int:
    if args.preset:
        cfg = benchgen.preset(args.preset, seed=args.seed)
    else:
        if args.cores is None or args.packets is None:
            raise UsageError("give --preset, or both --cores and --packets")
        cfg = BenchConfig(n_cores=args.cores, n_packets=args.packets, volume_range=args.volume,
                          comp_range=args.comp, max_fanout=args.fanout, seed=args.seed or 0,
                          total_bits=args.total_bits, name=args.name or f"random-{args.seed or 0}",
                          mesh=args.mesh)
    if args.name:
        cfg = replace(cfg, name=args.name)
    if args.mesh and args.preset:
        cfg = replace(cfg, mesh=args.mesh)
    cfg.check()
    app = benchgen.generate(cfg)
    _emit(formats.dumps(formats.application_doc(app, cfg.mesh)), args.output)
    return EXIT_OK


def _load_inputs(args, allow_empty=False):
    app, app_mesh = formats.load_application_with_mesh(args.app, allow_empty)
    plat_mesh, params = formats.resolve_platform(args.platform)
    return app, params, (app_mesh, plat_mesh)


def cmd_map(args) -> int:
    app, params, meshes = _load_inputs(args)
    mesh = _resolve_mesh(args.mesh, *meshes)
    sa = SaParams(seed=args.seed, restarts=args.restarts, workers=args.workers)
    result = search(app, mesh, Objective(args.model, params), args.search, sa, args.limit)
    formats.store_mapping(result.best_mapping, args.output, mesh)
    report = {
        "command": "map",
        "app": app.name,
        "platform": params.name,
        "mesh": str(mesh),
        "model": args.model,
        "search": args.search,
        "seed": args.seed if args.search == "sa" else None,
        "restarts": args.restarts if args.search == "sa" else None,
        "cost_aj": formats.energy_value(result.best_cost),
        "texec_cycles": result.texec,
        "evaluations": result.evaluations,
        "mapping": {app.core(c).label: t for c, t in result.best_mapping.assignment},
    }
    if args.timings:
        report["wall_time_s"] = result.wall_time
    if args.report:
        formats.store_report(report, args.report)
    sys.stdout.write(formats.dumps(report))
    return EXIT_OK


def evaluation_report(app, mapping, mesh, params) -> dict:
    rep = simulate(app, mapping, mesh, params)
    stats = contention_stats(rep)
    cwm = edynoc_cwm(cwg_from_cdcg(app), mapping, mesh, params)
    return {
        "command": "evaluate",
        "app": app.name,
        "platform": params.name,
        "mesh": str(mesh),
        "mapping": {app.core(c).label: t for c, t in mapping.assignment},
        "texec_cycles": rep.texec,
        "texec_ns": formats.ratio_value(rep.texec_seconds * 10**9),
        "edynoc_aj": formats.energy_value(rep.edy_noc),
        "edynoc_cwm_aj": formats.energy_value(cwm.edy_noc),
        "estnoc_aj": formats.energy_value(rep.est_noc),
        "enoc_aj": formats.energy_value(rep.enoc),
        "contention": {
            "wait_cycles": stats.total_wait,
            "contended_pairs": stats.contended_pairs,
            "per_resource": {resource_label(r): c for r, c in sorted(stats.per_resource.items())},
        },
    }


def cmd_evaluate(args) -> int:
    app, params, meshes = _load_inputs(args)
    mapping_doc = formats.load_mapping(args.mapping)
    mesh = _resolve_mesh(args.mesh, *meshes)
    report = evaluation_report(app, mapping_doc, mesh, params)
    if args.report:
        formats.store_report(report, args.report)
    sys.stdout.write(formats.dumps(report))
    return EXIT_OK


def cmd_compare(args) -> int:
    names = args.platform or list(compare.DEFAULT_PROFILES)
    profiles = {}
    for name in names:
        _, params = formats.resolve_platform(name)
        profiles[params.name or Path(name).stem] = params
    apps = []
    for path in args.apps:
        app, app_mesh = formats.load_application_with_mesh(path)
        if not app.name:
            app = replace(app, name=Path(path).stem)
        apps.append((app, _resolve_mesh(args.mesh, app_mesh)))
    sa = SaParams(seed=args.seed, restarts=args.restarts)
    rows = compare.compare_batch(apps, profiles, args.search, sa, args.etr_profile, args.timings,
                                 args.limit, args.jobs, args.outdir)
    if args.json:
        docs = [compare.row_doc(r) for r in rows]
        avg = compare.average(rows)
        doc = {"format": "nocmap.comparison", "format_version": formats.FORMAT_VERSION,
               "rows": docs, "average": compare.row_doc(avg) if avg else None}
        Path(args.json).write_text(formats.dumps(doc), encoding="utf-8")
    _emit(compare.table(rows), args.output)
    return EXIT_PARTIAL if any(r.error for r in rows) else EXIT_OK


def cmd_trace(args) -> int:
    app, params, meshes = _load_inputs(args, allow_empty=True)
    if not app.packets:
        report = trace.empty_report(params)
    else:
        if args.mapping is None:
            raise UsageError("trace needs a mapping file")
        mapping = formats.load_mapping(args.mapping)
        report = simulate(app, mapping, _resolve_mesh(args.mesh, *meshes), params)
    _emit(trace.render(report, app, args.format), args.output)
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nocmap", description=__doc__.splitlines()[0],
                                epilog="exit codes: 0 ok, 1 partial compare failure, 2 usage, "
                                       "3 infeasible or too large, 4 invalid input")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random application")
    g.add_argument("--preset", help="benchmark preset such as 3x3-2 or 8x8")
    g.add_argument("--cores", type=int)
    g.add_argument("--packets", type=int)
    g.add_argument("--volume", type=_range, default=(8, 512), metavar="LO:HI", help="bits per packet")
    g.add_argument("--comp", type=_range, default=(1, 100), metavar="LO:HI", help="computation cycles")
    g.add_argument("--fanout", type=int, default=2, help="max predecessors per packet")
    g.add_argument("--total-bits", type=int)
    g.add_argument("--mesh", type=_pair, metavar="WxH")
    g.add_argument("--name")
    g.add_argument("--seed", type=int)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    def common(sp, mapping=False):
        sp.add_argument("app", help="application file")
        sp.add_argument("platform", help="platform file or profile name")
        if mapping:
            sp.add_argument("mapping", help="mapping file")
        sp.add_argument("--mesh", type=_pair, metavar="WxH", help="overrides the mesh in the files")

    m = sub.add_parser("map", help="search for a mapping")
    common(m)
    m.add_argument("--model", choices=["cwm", "cdcm"], default="cdcm")
    m.add_argument("--search", choices=["sa", "exhaustive"], default="sa")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--restarts", type=int, default=SaParams.restarts)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--limit", type=int, default=DEFAULT_ENUMERATION_LIMIT, help="exhaustive candidate limit")
    m.add_argument("-o", "--output", required=True, help="mapping file to write")
    m.add_argument("--report", help="append the JSON report to this file")
    m.add_argument("--timings", action="store_true", help="include wall-clock time")
    m.set_defaults(func=cmd_map)

    e = sub.add_parser("evaluate", help="simulate a mapping and report energy and timing")
    common(e, mapping=True)
    e.add_argument("--report", help="append the JSON report to this file")
    e.set_defaults(func=cmd_evaluate)

    c = sub.add_parser("compare", help="CWM against CDCM on a set of applications")
    c.add_argument("apps", nargs="+")
    c.add_argument("--platform", action="append", help="profile name or file (repeatable; default t035 and t007)")
    c.add_argument("--mesh", type=_pair, metavar="WxH")
    c.add_argument("--search", choices=["sa", "exhaustive"], default="sa")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--restarts", type=int, default=SaParams.restarts)
    c.add_argument("--limit", type=int, default=DEFAULT_ENUMERATION_LIMIT)
    c.add_argument("--etr-profile", help="profile whose mappings define ETR (default t007)")
    c.add_argument("--jobs", type=int, default=1, help="applications processed in parallel")
    c.add_argument("--outdir", help="write one row document per application here")
    c.add_argument("--json", help="write all rows and the average as one document")
    c.add_argument("--timings", action="store_true", help="add the CDCM/CWM search time ratio")
    c.add_argument("-o", "--output", help="table file (default stdout)")
    c.set_defaults(func=cmd_compare)

    t = sub.add_parser("trace", help="timing diagram of a mapping")
    common(t)
    t.add_argument("mapping", nargs="?", help="mapping file (not needed for an empty application)")
    t.add_argument("--format", choices=list(trace.FORMATS), default="text")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_trace)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with 2
    except (InfeasibleConfig, InstanceTooLarge) as exc:
        print(f"nocmap: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except KeyError as exc:
        print(f"nocmap: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (formats.FormatError, ModelError, ValueError) as exc:
        print(f"nocmap: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface: ``fanoclass <command> ...``.

Exit codes: 0 success, 2 bad input, 3 bad configuration, 4 acceptance
failure.  Errors are reported on stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from pathlib import Path

from . import __version__
from .classify import (
    ConfigError,
    RunConfig,
    classify,
    compare_with_table,
    special_facets,
)
from .invariants import anticanonical_degree, hilbert_series
from .laurent import LaurentParseError, load_fixtures, parse_laurent, period_prefix
from .lattice import (
    Polygon,
    PolygonError,
    area2,
    boundary_count,
    interior_count,
    normal_form,
)
from .mutation import (
    MutationSpec,
    NotAdmissible,
    minimality_witnesses,
    minimize,
    mutate,
    mutate_by,
)
from .render import render_svg
from .singularity import (
    BasketNotResidual,
    BasketSyntaxError,
    cone_singularity,
    edge_singularity_content,
    max_local_index,
    singularity_content,
)

log = logging.getLogger("fanoclass")

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_ACCEPTANCE = 0, 2, 3, 4


class InputError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def read_polygon(source: str) -> Polygon:
    """Read a polygon from a file path, ``-`` for stdin, or inline text.

    Accepted forms: ``{"vertices": [[x, y], ...]}``, a JSON list of pairs,
    or text such as ``(-1,3), (1,3), (0,-1)``.
    """
    if source == "-":
        text = sys.stdin.read()
    elif Path(source).is_file():
        text = Path(source).read_text()
    else:
        text = source
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        pairs = re.findall(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)", text)
        if not pairs:
            raise InputError("ParseError", f"no vertices found in {source!r}")
        data = [[int(x), int(y)] for x, y in pairs]
    if isinstance(data, dict):
        data = data.get("vertices")
    if not isinstance(data, list) or not all(
            isinstance(v, list) and len(v) == 2 and all(isinstance(c, int) for c in v) for v in data):
        raise InputError("ParseError", "vertices must be a list of integer pairs")
    return Polygon(data)


def analyze_report(p: Polygon) -> dict:
    sc = singularity_content(p)
    hs = hilbert_series(p)
    edges = []
    special = {(e.start, e.end) for e in special_facets(p)}
    for e in p.edges():
        n, res = edge_singularity_content(e)
        edges.append({
            "start": list(e.start), "end": list(e.end),
            "inner_normal": list(e.inner_normal), "height": e.height, "length": e.length,
            "cone": str(cone_singularity(e)), "n": n,
            "residue": str(res) if res else None,
            "special": (e.start, e.end) in special,
        })
    w = minimality_witnesses(p)
    return {
        "vertices": [list(v) for v in p.vertices],
        "normal_form": [list(v) for v in normal_form(p).vertices],
        "sc": {"n": sc.n, "basket": [str(s) for s in sc.multiset()], "text": str(sc)},
        "degree": str(anticanonical_degree(p)),
        "hilbert": {**hs.to_json(), "text": str(hs),
                           "coefficients": [str(c) for c in hs.series(8)]},
        "boundary_points": boundary_count(p),
        "interior_points": interior_count(p),
        "area2": area2(p),
        "max_local_index": max_local_index(p),
        "edges": edges,
        "special_facets": [[list(e.start), list(e.end)] for e in special_facets(p)],
        "minimal": w.minimal,
        "minimality": {"boundary": w.boundary, "interior": w.interior, "volume": w.volume,
                       "edge_levels": w.edge_levels},
    }


def cmd_analyze(args) -> int:
    sys.stdout.write(_dump(analyze_report(read_polygon(args.polygon))))
    return EXIT_OK


def _pair(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*\(?\s*(-?\d+)\s*,\s*(-?\d+)\s*\)?\s*", text)
    if not m:
        raise InputError("ParseError", f"expected an integer pair, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def cmd_mutate(args) -> int:
    p = read_polygon(args.polygon)
    if args.edge is not None:
        edges = p.edges()
        if not 0 <= args.edge < len(edges):
            raise InputError("EdgeIndex", f"edge index {args.edge} out of range 0..{len(edges) - 1}")
        spec = MutationSpec.for_edge(edges[args.edge])
        trace = mutate(p, spec)
    else:
        if args.omega is None or args.factor is None:
            raise InputError("ParseError", "give --edge or both --omega and --factor")
        trace = mutate_by(p, MutationSpec(_pair(args.omega), _pair(args.factor)))
    out = trace.to_json()
    out["target_normal_form"] = [list(v) for v in normal_form(trace.target).vertices]
    out["boundary_points"] = [boundary_count(p), boundary_count(trace.target)]
    sys.stdout.write(_dump(out))
    return EXIT_OK


def cmd_minimize(args) -> int:
    p = read_polygon(args.polygon)
    low, path = minimize(p)
    sys.stdout.write(_dump({
        "source": [list(v) for v in p.vertices],
        "minimal": [list(v) for v in low.vertices],
        "normal_form": [list(v) for v in normal_form(low).vertices],
        "boundary_points": [boundary_count(p), boundary_count(low)],
        "path": [t.to_json() for t in path],
    }))
    return EXIT_OK


def _write_tables(run, out: Path):
    rows = run.table_rows()
    (out / "table.json").write_text(_dump(rows))
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    (out / "table.csv").write_text(buf.getvalue())
    for c in run.classes:
        p = Polygon(c.display)
        (out / f"class_{c.number:02d}.svg").write_text(render_svg(p, f"class {c.number}"))


def cmd_classify(args) -> int:
    cfg = RunConfig(args.basket, n_max=args.n_max, mult_max=args.mult_max,
                    height_extra=args.height_extra, bfs_cap_factor=args.bfs_cap_factor,
                    bfs_depth=args.bfs_depth, max_nodes=args.max_nodes,
                    region_margin=args.region_margin)
    cfg.validate()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    run_path = out / "run.json"
    resume = None
    if args.resume:
        try:
            resume = json.loads(Path(args.resume).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError("ResumeError", f"cannot read {args.resume}: {exc}")

    def checkpoint(inputs):
        partial = {"format": 1, "config": cfg.to_json(), "config_hash": cfg.digest(),
                   "inputs": [r.to_json() for r in inputs], "classes": [], "partial": True}
        run_path.write_text(json.dumps(partial, indent=1, sort_keys=True))

    run = classify(cfg, threads=args.threads, resume=resume, checkpoint=checkpoint,
                   stop_after=args.stop_after)
    if not run.timing["complete"]:
        log.warning("stopped early after %d inputs; resume with --resume %s",
                    len(run.inputs), run_path)
        return EXIT_OK
    run_path.write_text(run.dumps())
    _write_tables(run, out)
    summary = {"classes": len(run.classes), "out": str(out), "config_hash": cfg.digest(),
               "unresolved": sum(s.kind == "UNRESOLVED" for s in run.separations)}
    fam = cfg.family()
    if fam is not None:
        try:
            summary["reference"] = compare_with_table(run, fam.name).to_json()
        except ConfigError:
            pass
    sys.stdout.write(_dump(summary))
    return EXIT_OK


def cmd_period(args) -> int:
    if args.fixture:
        fixtures = load_fixtures()
        if args.fixture not in fixtures:
            raise InputError("UnknownFixture", f"no period fixture for row {args.fixture}")
        fx = fixtures[args.fixture]
        prefix = fx.period(args.n_max)
        source = fx.provenance
    else:
        text = Path(args.laurent).read_text() if Path(args.laurent).is_file() else args.laurent
        prefix = period_prefix(parse_laurent(text), args.n_max)
        source = args.laurent
    sys.stdout.write(_dump({
        "source": source,
        "period": [{"n": n, "value": str(v), "terms": v.to_json()} for n, v in enumerate(prefix.values)],
    }))
    return EXIT_OK


def cmd_render(args) -> int:
    svg = render_svg(read_polygon(args.polygon))
    if args.output == "-":
        sys.stdout.write(svg)
    else:
        Path(args.output).write_text(svg)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import run_acceptance

    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_acceptance(threads=args.threads, only=only)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_ACCEPTANCE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fanoclass", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="singularity content, degree, Hilbert series, minimality")
    p.add_argument("polygon", help="polygon file, '-' for stdin, or inline vertex text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mutate", help="mutate a polygon")
    p.add_argument("polygon")
    p.add_argument("--edge", "--edge-index", dest="edge", type=int, help="mutate with respect to this edge (clockwise index)")
    p.add_argument("--omega", help="grading u,v (write --omega=-1,-1 for negative entries)")
    p.add_argument("--factor", help="factor direction x,y")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("minimize", help="greedy descent to a minimal polygon")
    p.add_argument("polygon")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("classify", help="classify minimal polygons with a given basket")
    p.add_argument("--basket", required=True,
                   help="e.g. '1x1/6(1,1)', '1/3(1,1) + 1/6(1,1)' or 'family:1/3+1/6'")
    p.add_argument("--n-max", type=int)
    p.add_argument("--mult-max", type=int)
    p.add_argument("--height-extra", type=int, default=1,
                   help="allowed edge height above the basket maximum (default 1)")
    p.add_argument("--bfs-cap-factor", type=int, default=3)
    p.add_argument("--bfs-depth", type=int, default=8)
    p.add_argument("--max-nodes", type=int, default=20_000_000)
    p.add_argument("--region-margin", type=int, default=0)
    p.add_argument("--threads", type=int, help="worker processes (default FANO_THREADS or all cores)")
    p.add_argument("--resume", help="saved run.json to continue from")
    p.add_argument("--stop-after", type=int, help=argparse.SUPPRESS)
    p.add_argument("--out", default="classification", help="output directory")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("period", help="period prefix of a Laurent polynomial")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("laurent", nargs="?", help="file or inline polynomial")
    src.add_argument("--fixture", help="table row with a shipped period fixture, e.g. 1.7")
    p.add_argument("--n-max", type=int, default=5)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("render", help="draw a polygon as SVG")
    p.add_argument("polygon")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_verify)
    return ap


def _error(code: str, message: str, status: int) -> int:
    sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        return _error("ConfigError", str(exc), EXIT_CONFIG)
    except InputError as exc:
        return _error(exc.code, str(exc), EXIT_INPUT)
    except (PolygonError, NotAdmissible, BasketSyntaxError, BasketNotResidual,
            LaurentParseError) as exc:
        return _error(getattr(exc, "code", type(exc).__name__), str(exc), EXIT_INPUT)
    except ValueError as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``latticetiles verify|family|enumerate|render|region|classify``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .classify import classify
from .decagons import enumerate_q10, write_audit
from .errors import (
    BolleFailed,
    ClosureViolated,
    GeometryError,
    MultiplicityMismatch,
    NonIntegerMultiplicity,
    NotStrictlyConvex,
    ParameterOutOfRange,
    RankDeficientGenerators,
    TilingError,
)
from .families import (
    FAMILY_ANCHORS,
    FAMILY_MIDPOINTS,
    OCTAGON_FAMILIES,
    PUBLISHED_REGIONS,
    MidpointSpec,
    decagon_from_midpoints,
    freedom_region,
)
from .geometry import Lattice, Rat2, rat
from .io import InputFormatError, dumps, lattice_from_json, point_json, polygon_from_json, polygon_to_json
from .octagons import enumerate_octagons
from .render import render_svg
from .tiling import bolle_check, search_tiling_lattices, verify_kfold

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_INTERNAL = 0, 1, 2, 3

OCTAGON_NAMES = {fam.name: key for key, fam in OCTAGON_FAMILIES.items()}
DECAGON_NAMES = {f"decagon-{name}": name for name in FAMILY_MIDPOINTS}


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _polygon(path):
    try:
        return polygon_from_json(_read_json(path))
    except (InputFormatError, GeometryError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _lattice(path):
    try:
        return lattice_from_json(_read_json(path))
    except (InputFormatError, GeometryError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _point(text: str) -> Rat2:
    try:
        x, y = text.split(",")
        return Rat2(rat(x.strip()), rat(y.strip()))
    except (ValueError, GeometryError, ZeroDivisionError):
        raise InputError(f"expected a point such as \"-1/8,5/6\", got {text!r}") from None


def _report(command: str, inputs: dict, verdict: str, started: float, **extra) -> dict:
    return {"command": command, "inputs": inputs, "verdict": verdict, **extra,
            "seconds": round(time.perf_counter() - started, 3), "version": __version__}


def _emit(args, report: dict, text: str) -> None:
    print(dumps(report) if args.json else text)


def certificate_json(cert) -> dict:
    out = {
        "verdict": "pass",
        "k": cert.k,
        "lattice": [point_json(b) for b in cert.lattice.basis],
        "edges": [{"edge": ev.edge, "kind": ev.kind, "midpoint": point_json(ev.midpoint),
                   "witness": point_json(ev.witness) if ev.witness else None} for ev in cert.evidence],
    }
    if cert.oracle is not None:
        out["oracle"] = {"points_tested": cert.oracle.points_tested, "rejected": cert.oracle.rejected,
                         "multiplicities": {str(k): v for k, v in cert.oracle.multiplicities.items()},
                         "seed": cert.oracle.seed}
    return out


def failure_json(report) -> dict:
    return {
        "verdict": "fail",
        "area_over_det": str(report.ratio),
        "failures": [{"edge": ev.edge, "midpoint": point_json(ev.midpoint), "reason": ev.reason} for ev in report.failures],
    }


# --- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    P = _polygon(args.polygon)
    inputs = {"polygon": polygon_to_json(P), "samples": args.samples, "seed": args.seed}
    if args.search_k is not None:
        inputs["search_k"] = args.search_k
        search = search_tiling_lattices(P, args.search_k)
        if not search.lattices:
            rep = _report("verify", inputs, "no certifying lattice", t0, complete=search.complete)
            _emit(args, rep, f"no certifying lattice for k={args.search_k}"
                  + ("" if search.complete else " (search incomplete: rank-deficient generator choices)"))
            return EXIT_FAIL
        certs = [verify_kfold(P, L, args.search_k, args.samples, args.seed) for L in search.lattices]
        rep = _report("verify", inputs, "pass", t0, certificates=[certificate_json(c) for c in certs])
        lines = [f"pass: {len(certs)} certifying lattice(s) for k={args.search_k}"]
        lines += [f"  basis {point_json(c.lattice.basis[0])} {point_json(c.lattice.basis[1])}" for c in certs]
        _emit(args, rep, "\n".join(lines))
        return EXIT_OK
    if args.lattice is None:
        raise InputError("give a lattice file or --search-k K")
    L = _lattice(args.lattice)
    inputs["lattice"] = {"basis": [point_json(b) for b in L.basis]}
    report = bolle_check(P, L)
    if not report.passed:
        rep = _report("verify", inputs, "fail", t0, report=failure_json(report))
        bad = report.failures[0]
        _emit(args, rep, f"fail: edge {bad.edge} (midpoint {point_json(bad.midpoint)}): {bad.reason}")
        return EXIT_FAIL
    k = args.k if args.k is not None else report.k
    cert = verify_kfold(P, L, k, args.samples, args.seed)
    rep = _report("verify", inputs, "pass", t0, certificate=certificate_json(cert))
    oracle = f", oracle {cert.oracle.points_tested}/{cert.oracle.points_tested} points at {k}" if cert.oracle else ""
    _emit(args, rep, f"pass: k={cert.k}{oracle}")
    return EXIT_OK


# --- family -----------------------------------------------------------------


def cmd_family(args) -> int:
    name = args.name
    if name in OCTAGON_NAMES:
        fam = OCTAGON_FAMILIES[OCTAGON_NAMES[name]]
        if args.param is None:
            raise InputError(f"{name} needs --param ({fam.symbol} in ({fam.interval[0]}, {fam.interval[1]}))")
        t = _rational(args.param)
        try:
            P = fam.instantiate(t)
        except ParameterOutOfRange as exc:
            raise InputError(str(exc)) from None
        info = {"family": name, fam.symbol: str(t)}
    elif name in DECAGON_NAMES:
        spec = FAMILY_MIDPOINTS[DECAGON_NAMES[name]]
        anchor = FAMILY_ANCHORS[DECAGON_NAMES[name]] if args.anchor is None else args.anchor
        region = freedom_region(spec, anchor)
        w = region.interior_point() if args.free_vertex is None else _point(args.free_vertex)
        try:
            P = decagon_from_midpoints(spec, w, anchor)
        except NotStrictlyConvex as exc:
            if region.on_boundary(w):
                raise InputError(f"free vertex on region boundary: {point_json(w)}") from None
            raise InputError(f"free vertex outside the region: {exc}") from None
        info = {"family": name, "free_vertex": point_json(w), "anchor": anchor}
    else:
        raise InputError(f"unknown family {name!r}; choose from {sorted(OCTAGON_NAMES) + sorted(DECAGON_NAMES)}")
    out = {**polygon_to_json(P), **info, "area": str(P.area)}
    if args.certify:
        try:
            out["certificate"] = certificate_json(verify_kfold(P, Lattice.integer(), int(P.area), args.samples, args.seed))
        except BolleFailed as exc:
            out["certificate"] = failure_json(exc.report)
    print(dumps(out))
    return EXIT_OK


def _rational(text: str):
    try:
        return rat(text)
    except GeometryError as exc:
        raise InputError(str(exc)) from None


# --- enumerate --------------------------------------------------------------


def cmd_enumerate(args) -> int:
    t0 = time.perf_counter()
    inputs = {"target": args.target, "k": args.k, "samples": args.samples, "seed": args.seed}
    budget = min(args.samples, 200) if args.samples else None
    if args.target == "decagons":
        sweep = enumerate_q10(args.k, budget, args.seed)
        classes = [c.to_json() for c in sweep.classes]
        rep = _report("enumerate", inputs, sweep.summary(), t0, classes=classes, counts=sweep.counts,
                      horizontal_g1_possible=sweep.horizontal_g1_possible)
        lines = [sweep.summary()]
        for c in sweep.classes:
            labels = ", ".join(sorted({f.label for f in c.frames if f.label})) or "unlabelled"
            lines.append(f"  Q10 {' '.join(str(tuple(v.to_strings())) for v in c.representative.half)}"
                         f"  area {c.representative.area}  cases {labels}  matches {', '.join(c.families) or '-'}")
        lines.append(f"  counts {sweep.counts}")
    else:
        sweep = enumerate_octagons(args.k, budget, args.seed)
        rep = _report("enumerate", inputs, sweep.summary(), t0, families=[f.to_json() for f in sweep.families],
                      isolated=len(sweep.isolated), degenerate=len(sweep.degenerate), counts=sweep.counts,
                      bounds=sweep.bounds)
        lines = [sweep.summary()]
        for f in sweep.families:
            lines.append(f"  {f.family.name}: {f.family.symbol} in ({f.interval[0]}, {f.interval[1]})"
                         f"  matched {f.matched or 'none'}")
        lines.append(f"  counts {sweep.counts}")
        lines.append(f"  bounds {sweep.bounds}")
    if args.audit:
        write_audit(sweep.audit, args.audit)
        rep["audit"] = str(args.audit)
        lines.append(f"  audit log: {args.audit} ({len(sweep.audit)} records)")
    lines.append(f"  {rep['seconds']} s")
    _emit(args, rep, "\n".join(lines))
    return EXIT_OK


# --- render -----------------------------------------------------------------


def cmd_render(args) -> int:
    P = _polygon(args.polygon)
    L = _lattice(args.lattice)
    report = bolle_check(P, L)
    warning = None
    if not report.passed:
        warning = "warning: polygon and lattice do not form a multiple tiling"
        print(warning, file=sys.stderr)
    k = report.k if report.passed else round(report.ratio) or None
    res = render_svg(P, L, _rational(args.window), heat=not args.no_heat, k=k, cells=args.cells, warning=warning)
    Path(args.out).write_text(res.svg)
    msg = f"wrote {args.out}: {res.translates} translates, multiplicities {res.counts}"
    if args.json:
        print(dumps({"command": "render", "out": str(args.out), "translates": res.translates,
                     "multiplicities": {str(k): v for k, v in res.counts.items()}, "certified": report.passed,
                     "version": __version__}))
    else:
        print(msg)
    return EXIT_OK


# --- region -----------------------------------------------------------------


def _spec_from_text(text: str) -> MidpointSpec:
    return MidpointSpec(tuple(_point(chunk) for chunk in text.split(";") if chunk.strip()))


def cmd_region(args) -> int:
    t0 = time.perf_counter()
    if args.midpoints:
        spec, name = _spec_from_text(args.midpoints), "custom"
    else:
        spec, name = FAMILY_MIDPOINTS[args.family], args.family
    try:
        spec.check_closure()
    except ClosureViolated as exc:
        raise InputError(str(exc)) from None
    anchors = range(spec.m) if args.anchor is None else [args.anchor]
    regions = [freedom_region(spec, a) for a in anchors]
    preferred = FAMILY_ANCHORS.get(name) if args.anchor is None else args.anchor
    out = []
    for r in regions:
        entry = {"anchor": r.anchor, "vertices": [point_json(v) for v in r.vertices], "area": str(r.area),
                 "bounded": r.bounded}
        if name in PUBLISHED_REGIONS and r.anchor == preferred:
            entry["matches_published"] = r.same_vertices(PUBLISHED_REGIONS[name])
        out.append(entry)
    rep = _report("region", {"family": name, "midpoints": [point_json(u) for u in spec.midpoints]}, "ok", t0,
                  preferred_anchor=preferred, regions=out)
    lines = []
    for e in out:
        mark = " *" if e["anchor"] == preferred else ""
        lines.append(f"anchor {e['anchor']}{mark}: " + (" ".join("(" + ",".join(v) + ")" for v in e["vertices"]) or "empty")
                     + (f"  matches published: {e['matches_published']}" if "matches_published" in e else ""))
    if args.svg:
        Path(args.svg).write_text(_region_svg([r for r in regions if r.anchor == (preferred or 0)] or regions))
        lines.append(f"wrote {args.svg}")
    _emit(args, rep, "\n".join(lines))
    return EXIT_OK


def _region_svg(regions) -> str:
    pts = [v for r in regions for v in r.vertices] or [Rat2(0, 0)]
    xs, ys = [p.x for p in pts], [p.y for p in pts]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y) or 1
    pad = span / 10

    def tx(x):
        return f"{float((x - lo_x + pad) / (span + 2 * pad) * 400):.3f}"

    def ty(y):
        return f"{float((hi_y - y + pad) / (span + 2 * pad) * 400):.3f}"

    parts = ['<svg xmlns="http://www.w3.org/2000/svg" width="400" height="400" viewBox="0 0 400 400">',
             '<rect x="0" y="0" width="400" height="400" fill="white"/>']
    for r in regions:
        if r.vertices:
            poly = " ".join(f"{tx(v.x)},{ty(v.y)}" for v in r.vertices)
            parts.append(f'<polygon points="{poly}" fill="#aec7e8" stroke="#1f77b4" stroke-width="2"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# --- classify ---------------------------------------------------------------


def cmd_classify(args) -> int:
    t0 = time.perf_counter()
    P = _polygon(args.polygon)
    res = classify(P)
    rep = _report("classify", {"polygon": polygon_to_json(P)}, res.verdict, t0, classification=res.to_json())
    _emit(args, rep, res.verdict)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", type=int, default=0, help="oracle sampling seed (default 0)")
    common.add_argument("--samples", type=int, default=1000, help="oracle sample points (default 1000)")

    parser = argparse.ArgumentParser(prog="latticetiles", description="Exact multiple lattice tiling tools.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="certify a polygon and lattice")
    p.add_argument("polygon", help="polygon JSON file, or - for stdin")
    p.add_argument("lattice", nargs="?", help="lattice JSON file")
    p.add_argument("--search-k", type=int, help="search every lattice giving this multiplicity")
    p.add_argument("--k", type=int, help="expected multiplicity")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("family", parents=[common], help="instantiate a known family")
    p.add_argument("name", help="octagon6, octagon6-tall, octagon6-printed, octagon5-beta, octagon5-alpha, decagon-A, decagon-B, decagon-five")
    p.add_argument("--param", help="family parameter, e.g. 1/10")
    p.add_argument("--free-vertex", help="decagon free vertex, e.g. \"-1/8,5/6\"")
    p.add_argument("--anchor", type=int, help="junction index of the free vertex")
    p.add_argument("--certify", action="store_true", help="attach a certificate on the integer lattice")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("enumerate", parents=[common], help="run an exhaustive search")
    p.add_argument("--target", choices=["decagons", "octagons"], required=True)
    p.add_argument("--k", type=int, choices=[5, 6], required=True)
    p.add_argument("--audit", help="write line-delimited JSON audit records here")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("render", parents=[common], help="draw translates as SVG")
    p.add_argument("polygon")
    p.add_argument("lattice")
    p.add_argument("--window", default="6", help="side of the square window (default 6)")
    p.add_argument("--out", required=True)
    p.add_argument("--cells", type=int, default=40, help="heat grid resolution")
    p.add_argument("--no-heat", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("region", parents=[common], help="free-vertex region of a decagon midpoint set")
    p.add_argument("--family", choices=sorted(FAMILY_MIDPOINTS), default="A")
    p.add_argument("--midpoints", help="custom half-cycle midpoints \"x,y; x,y; ...\"")
    p.add_argument("--anchor", type=int)
    p.add_argument("--svg", help="also draw the region")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("classify", parents=[common], help="classify a polygon")
    p.add_argument("polygon")
    p.set_defaults(func=cmd_classify)
    return parser


# options whose values may start with "-" (negative rationals)
VALUE_OPTIONS = ("--free-vertex", "--param", "--midpoints", "--window")


def _join_values(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        if argv[i] in VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_values(list(sys.argv[1:] if argv is None else argv)))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MultiplicityMismatch, NonIntegerMultiplicity) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except BolleFailed as exc:
        print(f"fail: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except RankDeficientGenerators as exc:
        print(f"fail: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (GeometryError, TilingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

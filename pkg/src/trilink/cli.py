"""Command line entry point: ``trilink <command> ...``.

Exit status is 0 on success, 1 on a domain error (bad input, failed check)
and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from . import bounds as bnd
from .complex import dual_graph, validate
from .diagram import crossing_count, generic_direction, linking_matrix, project, render_svg
from .generators import (
    cyclic_polytope_boundary,
    join_of_triangles,
    simplex_boundary,
    stacked_sphere,
    walk,
)
from .io import coords_from_obj, coords_to_obj, dumps, load_json, parse_q, read_triangulation
from .linkset import check_link, enumerate_links
from .moves import ExpansionSpec, MoveRecord, contract_edge, expand, stellar_subdivide, transport_link
from .realize import Realization3, schlegel, verify_embedding
from .shelling import DEFAULT_BUDGET, find_shelling, verify_shelling

log = logging.getLogger("trilink")


class CommandFailed(Exception):
    """A domain-level failure with a message for the user."""


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


OUTPUT_KEYS = ("output", "out_dir", "coords_out", "record_out", "figure")


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func" and not callable(v)}
    digests = {}
    for key, val in cfg.items():
        if key in OUTPUT_KEYS or val is None:
            continue
        if isinstance(val, str) and Path(val).is_file():
            digests[key] = hashlib.sha256(Path(val).read_bytes()).hexdigest()
    cfg = {k: list(v) if isinstance(v, tuple) else v for k, v in cfg.items()}
    if digests:
        cfg["input_sha256"] = digests
    return cfg


def _header(args) -> dict:
    # where the artifacts go does not change their content
    cfg = {k: v for k, v in _config(args).items() if k not in OUTPUT_KEYS and k != "quiet"}
    blob = json.dumps(cfg, sort_keys=True).encode()
    return {"tool": "trilink", "version": __version__, "config_sha256": hashlib.sha256(blob).hexdigest()}


def _emit(args, text: str, path: str | None = None):
    path = path if path is not None else getattr(args, "output", None)
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj: dict, path: str | None = None):
    _emit(args, dumps(obj, _header(args)), path)


def _load_tri(args):
    return read_triangulation(args.tri, strict=not args.normalize)


def _load_link(t, path):
    obj = load_json(path)
    return check_link(t, obj["components"])


def _realization(args, t) -> Realization3:
    if getattr(args, "coords3", None):
        obj = load_json(args.coords3)
        coords = coords_from_obj(obj, "coords3", 3)
        omitted = tuple(obj["omitted_facet"]) if obj.get("omitted_facet") else None
        c4 = coords_from_obj(load_json(args.coords), "coords4", 4) if getattr(args, "coords", None) else None
        return Realization3(coords, t, omitted, c4)
    if getattr(args, "coords", None):
        c4 = coords_from_obj(load_json(args.coords), "coords4", 4)

        class _G:
            triangulation = t
            coords4 = c4

        return schlegel(_G, getattr(args, "facet", None))
    raise CommandFailed("need --coords (4D witness) or --coords3 (3D embedding)")


def _realization_obj(r: Realization3) -> dict:
    obj = coords_to_obj(r.coords, "coords3")
    obj["omitted_facet"] = list(r.omitted_facet) if r.omitted_facet else None
    return obj


# --- commands ----------------------------------------------------------------

GENERATORS = {
    "simplex": lambda a: simplex_boundary(),
    "cyclic": lambda a: cyclic_polytope_boundary(a.m),
    "join": lambda a: join_of_triangles(),
    "stacked": lambda a: stacked_sphere(a.steps, a.seed),
    "walk": lambda a: walk(a.steps, a.seed),
}


def cmd_gen(args):
    g = GENERATORS[args.kind](args)
    obj = g.triangulation.to_json_obj()
    obj["provenance"] = g.provenance
    _emit_json(args, obj)
    if args.coords_out:
        if g.coords4 is None:
            raise CommandFailed(f"{g.provenance} carries no coordinates")
        _emit_json(args, coords_to_obj(g.coords4, "coords4"), args.coords_out)
    return 0


def cmd_validate(args):
    t = _load_tri(args)
    rep = validate(t)
    obj = rep.to_json_obj()
    if rep.is_closed_pseudomanifold:
        degrees = dual_graph(t).degrees()
        obj["dual_graph"] = {"nodes": len(degrees), "arcs": sum(degrees.values()) // 2,
                             "four_regular": set(degrees.values()) == {4}}
    if args.format == "text":
        lines = [f"valid: {rep.valid}", f"f-vector: {rep.f_vector}", f"euler characteristic: {rep.euler_characteristic}"]
        lines += [f"defect: {f}" for f in rep.failures]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit_json(args, obj)
    if not rep.valid:
        for f in rep.failures:
            log.error("%s: %s", args.tri, f)
        return 1
    return 0


def cmd_links_enum(args):
    t = _load_tri(args)
    links = [l.to_json_obj()["components"] for l in enumerate_links(t, args.max_comp, args.max_edges)]
    _emit_json(args, {"links": links, "count": len(links)})
    return 0


def cmd_links_check(args):
    t = _load_tri(args)
    l = _load_link(t, args.link)
    obj = l.to_json_obj()
    obj["k"] = l.k
    _emit_json(args, obj)
    return 0


def cmd_realize(args):
    t = _load_tri(args)
    r = _realization(args, t)
    check = verify_embedding(r)
    if not check:
        raise CommandFailed(check.describe())
    _emit_json(args, _realization_obj(r))
    return 0


def cmd_verify_embedding(args):
    t = _load_tri(args)
    r = _realization(args, t)
    check = verify_embedding(r)
    obj = {"ok": check.ok, "pairs_checked": check.pairs_checked,
           "degenerate": [list(s) for s in check.degenerate],
           "overlapping": [[list(a), list(b)] for a, b in check.overlapping]}
    _emit_json(args, obj)
    if not check:
        log.error("%s", check.describe())
        return 1
    return 0


def _diagram(args, t, l, r):
    if args.direction == "auto":
        d = generic_direction(r, l)
    else:
        parts = args.direction.split(",")
        if len(parts) != 3:
            raise CommandFailed(f"direction must have three components, got {args.direction!r}")
        d = tuple(parse_q(x) for x in parts)
    return project(r, l, d)


def cmd_diagram(args):
    t = _load_tri(args)
    l = _load_link(t, args.link)
    r = _realization(args, t)
    check = verify_embedding(r)
    if not check:
        raise CommandFailed(check.describe())
    dg = _diagram(args, t, l, r)
    if args.out == "svg":
        _emit(args, render_svg(dg))
    elif args.out == "pd":
        _emit(args, dg.pd_text())
    elif args.out == "gauss":
        _emit(args, "".join(" ".join(str(x) for x in g) + "\n" for g in dg.gauss_code))
    else:
        obj = dg.to_json_obj()
        obj["linking_matrix"] = [list(row) for row in linking_matrix(dg).matrix]
        _emit_json(args, obj)
    if args.figure:
        from .plotting import plot_diagram

        plot_diagram(dg, args.figure)
    return 0


def _write_move(args, t_out, rec):
    _emit_json(args, t_out.to_json_obj())
    if args.record_out:
        _emit_json(args, rec.to_json_obj(), args.record_out)


def cmd_move_contract(args):
    t = _load_tri(args)
    if len(args.edge) != 2:
        raise CommandFailed("--edge needs exactly two vertices")
    _write_move(args, *contract_edge(t, args.edge))
    return 0


def cmd_move_expand(args):
    t = _load_tri(args)
    spec = ExpansionSpec.from_json_obj(load_json(args.spec))
    _write_move(args, *expand(t, spec))
    return 0


def cmd_move_stellar(args):
    t = _load_tri(args)
    _write_move(args, *stellar_subdivide(t, args.simplex))
    return 0


def cmd_move_transport(args):
    t = _load_tri(args)
    l = _load_link(t, args.link)
    rec = MoveRecord.from_json_obj(load_json(args.record))
    out = transport_link(l, rec)
    obj = out.to_json_obj()
    obj["k"] = out.k
    _emit_json(args, obj)
    return 0


def cmd_shelling_find(args):
    t = _load_tri(args)
    res = find_shelling(t, args.budget)
    obj = {"status": res.status, "nodes": res.nodes,
           "order": [list(x) for x in res.order] if res.order else None}
    _emit_json(args, obj)
    return 0 if res.status == "found" else 1


def cmd_shelling_verify(args):
    t = _load_tri(args)
    order = load_json(args.order)["order"]
    res = verify_shelling(t, order)
    _emit_json(args, {"ok": res.ok, "failed_at": res.failed_at, "reason": res.reason})
    return 0 if res.ok else 1


def _report_outputs(args, rep, dg=None):
    if args.format == "text":
        lines = [f"n = {rep.n}, k = {rep.k}, certificate = {rep.certificate}",
                 f"p in [{rep.p_interval[0]}, {rep.p_interval[1]}]"]
        for key, val in rep.cr_bounds.items():
            mark = "*" if key in rep.applicable else " "
            shown = val if isinstance(val, int) and val.bit_length() < 200 else f"<{type(val).__name__}>"
            lines.append(f" {mark} {key}: {shown}")
        lines.append(f"achieved: {rep.achieved}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit_json(args, rep.to_json_obj())
    if getattr(args, "figure", None):
        from .plotting import plot_bounds

        plot_bounds(rep, args.figure)


def cmd_bounds_report(args):
    t = _load_tri(args)
    l = _load_link(t, args.link)
    r = _realization(args, t) if (args.coords or args.coords3) else None
    order = load_json(args.shelling)["order"] if args.shelling else None
    dg = None
    if args.diagram:
        obj = load_json(args.diagram)
        if r is None:
            raise CommandFailed("--diagram needs the realization it was drawn from (--coords or --coords3)")
        dg = project(r, l, tuple(parse_q(x) for x in obj["direction"]))
        if len(dg.crossings) != obj.get("crossing_count", len(dg.crossings)):
            raise CommandFailed("diagram file does not match its recomputation")
    rep = bnd.report(t, l, r, order, dg)
    _report_outputs(args, rep, dg)
    return 0


DEMO_FIXTURES = {
    "simplex": (simplex_boundary, [(1, 2, 3)]),
    "join": (join_of_triangles, [(1, 2, 3), (4, 5, 6)]),
    "cyclic6": (lambda: cyclic_polytope_boundary(6), [(1, 2, 3), (4, 5, 6)]),
    "stacked": (lambda: stacked_sphere(4, 1), [(1, 2, 3)]),
}


def cmd_demo_thm1(args):
    make, comps = DEMO_FIXTURES[args.fixture]
    g = make()
    t = g.triangulation
    rep_v = validate(t)
    if not rep_v.valid:  # pragma: no cover - generators are valid by construction
        raise CommandFailed("; ".join(rep_v.failures))
    r = schlegel(g, args.facet)
    check = verify_embedding(r)
    if not check:  # pragma: no cover
        raise CommandFailed(check.describe())
    l = check_link(t, comps)
    dg = project(r, l, generic_direction(r, l))
    rep = bnd.report(t, l, r, None, dg, generated=True)
    log.info("fixture %s: n=%d, k=%d, crossings=%d, linking=%s", args.fixture, t.n, l.k,
             crossing_count(dg), linking_matrix(dg).matrix)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        tri = t.to_json_obj()
        tri["provenance"] = g.provenance
        _emit_json(args, tri, str(out / "triangulation.json"))
        _emit_json(args, coords_to_obj(g.coords4, "coords4"), str(out / "coords4.json"))
        _emit_json(args, _realization_obj(r), str(out / "coords3.json"))
        _emit_json(args, l.to_json_obj(), str(out / "link.json"))
        dobj = dg.to_json_obj()
        dobj["linking_matrix"] = [list(row) for row in linking_matrix(dg).matrix]
        _emit_json(args, dobj, str(out / "diagram.json"))
        (out / "diagram.svg").write_text(render_svg(dg))
        (out / "diagram.pd").write_text(dg.pd_text())
        _emit_json(args, rep.to_json_obj(), str(out / "report.json"))
        from .plotting import plot_bounds, plot_diagram

        plot_diagram(dg, out / "diagram.png", f"{args.fixture}: {crossing_count(dg)} crossings")
        plot_bounds(rep, out / "bounds.png")
    _report_outputs(args, rep, dg)
    return 0


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trilink", description="Links in triangulated 3-spheres and crossing-number bounds.")
    p.add_argument("--version", action="version", version=f"trilink {__version__}")
    p.add_argument("-q", "--quiet", action="store_true", help="only log warnings and errors")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="only log warnings and errors")
    sub = p.add_subparsers(dest="command", required=True)

    def tri_opts(sp, required=True):
        sp.add_argument("--tri", required=required, help="triangulation JSON")
        sp.add_argument("--normalize", action="store_true", help="accept and re-canonicalize unsorted input")
        sp.add_argument("--output", "-o", help="output file (default: stdout)")

    def coord_opts(sp):
        sp.add_argument("--coords", help="4D coordinates sidecar (polytope witness)")
        sp.add_argument("--coords3", help="3D coordinates sidecar (straight-line embedding)")
        sp.add_argument("--facet", type=_ints, help="facet removed by the Schlegel projection")

    g = sub.add_parser("gen", parents=[common], help="generate a reference triangulation")
    g.add_argument("kind", choices=sorted(GENERATORS))
    g.add_argument("--m", type=int, default=6)
    g.add_argument("--steps", type=int, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", "-o")
    g.add_argument("--coords-out", help="write the 4D coordinates sidecar here")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", parents=[common], help="check a closed 3-manifold triangulation")
    tri_opts(v)
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.set_defaults(func=cmd_validate)

    links = sub.add_parser("links", parents=[common], help="enumerate or check edge links")
    lsub = links.add_subparsers(dest="links_command", required=True)
    le = lsub.add_parser("enum", parents=[common])
    tri_opts(le)
    le.add_argument("--max-comp", type=int, default=1)
    le.add_argument("--max-edges", type=int, default=3)
    le.set_defaults(func=cmd_links_enum)
    lc = lsub.add_parser("check", parents=[common])
    tri_opts(lc)
    lc.add_argument("--link", required=True)
    lc.set_defaults(func=cmd_links_check)

    r = sub.add_parser("realize", parents=[common], help="Schlegel projection to a 3D straight-line complex")
    tri_opts(r)
    coord_opts(r)
    r.set_defaults(func=cmd_realize)

    ve = sub.add_parser("verify-embedding", parents=[common], help="exactly verify a straight-line embedding")
    tri_opts(ve)
    coord_opts(ve)
    ve.set_defaults(func=cmd_verify_embedding)

    d = sub.add_parser("diagram", parents=[common], help="project a link to a diagram")
    tri_opts(d)
    coord_opts(d)
    d.add_argument("--link", required=True)
    d.add_argument("--direction", default="auto", help='"auto" or "a,b,c"')
    d.add_argument("--out", choices=("svg", "pd", "gauss", "json"), default="json")
    d.add_argument("--figure", help="also draw the diagram with matplotlib to this file")
    d.set_defaults(func=cmd_diagram)

    m = sub.add_parser("move", parents=[common], help="contractions, expansions, stellar subdivisions, link transport")
    msub = m.add_subparsers(dest="move_command", required=True)
    mc = msub.add_parser("contract", parents=[common])
    tri_opts(mc)
    mc.add_argument("--edge", type=_ints, required=True)
    mc.add_argument("--record-out")
    mc.set_defaults(func=cmd_move_contract)
    me = msub.add_parser("expand", parents=[common])
    tri_opts(me)
    me.add_argument("--spec", required=True)
    me.add_argument("--record-out")
    me.set_defaults(func=cmd_move_expand)
    ms = msub.add_parser("stellar", parents=[common])
    tri_opts(ms)
    ms.add_argument("--simplex", type=_ints, required=True)
    ms.add_argument("--record-out")
    ms.set_defaults(func=cmd_move_stellar)
    mt = msub.add_parser("transport", parents=[common])
    tri_opts(mt)
    mt.add_argument("--link", required=True)
    mt.add_argument("--record", required=True)
    mt.set_defaults(func=cmd_move_transport)

    s = sub.add_parser("shelling", parents=[common], help="find or verify shelling orders")
    ssub = s.add_subparsers(dest="shelling_command", required=True)
    sf = ssub.add_parser("find", parents=[common])
    tri_opts(sf)
    sf.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sf.set_defaults(func=cmd_shelling_find)
    sv = ssub.add_parser("verify", parents=[common])
    tri_opts(sv)
    sv.add_argument("--order", required=True)
    sv.set_defaults(func=cmd_shelling_verify)

    b = sub.add_parser("bounds", parents=[common], help="crossing-number bound reports")
    bsub = b.add_subparsers(dest="bounds_command", required=True)
    br = bsub.add_parser("report", parents=[common])
    tri_opts(br)
    coord_opts(br)
    br.add_argument("--link", required=True)
    br.add_argument("--shelling", help="shelling order JSON")
    br.add_argument("--diagram", help="diagram JSON (recomputed from its direction)")
    br.add_argument("--format", choices=("json", "text"), default="json")
    br.add_argument("--figure", help="bar chart of the bounds (matplotlib)")
    br.set_defaults(func=cmd_bounds_report)

    demo = sub.add_parser("demo", parents=[common], help="end-to-end pipelines")
    dsub = demo.add_subparsers(dest="demo_command", required=True)
    d1 = dsub.add_parser("thm1", parents=[common], help="polytopal fixture -> Schlegel -> diagram -> bound report")
    d1.add_argument("--fixture", choices=sorted(DEMO_FIXTURES), default="join")
    d1.add_argument("--facet", type=_ints)
    d1.add_argument("--out-dir", help="write all artifacts and figures here")
    d1.add_argument("--format", choices=("json", "text"), default="json")
    d1.add_argument("--output", "-o")
    d1.set_defaults(func=cmd_demo_thm1)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.propagate = False
    log.setLevel(logging.WARNING if args.quiet else logging.INFO)
    log.info("config: %s", json.dumps(_config(args), sort_keys=True))
    try:
        return args.func(args)
    except (CommandFailed, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        log.error("%s", msg if not isinstance(exc, KeyError) else f"missing key {msg!r}")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line front end.  Each subcommand is a thin wrapper over one library call.

Exit codes: 0 success, 1 usage, 2 invalid input or validation failure,
3 decomposition incomplete.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import io
from .decompose import DecomposeConfig, RetriesExhausted, decompose_all, node_link
from .hexmesh import HexMesh, MeshError, validate
from .meshgen import cone_hexification, cone_mesh, link_for
from .quality import OptimizeParams, optimize, quality_report
from .singular import trace_curves
from .spheretri.catalog import CatalogError
from .spheretri.plan import PlanError, decomposition_plan
from .spheretri.triangulation import (
    SphereTriangulation,
    TriangulationError,
    format_signature,
    is_isomorphic,
    join,
    signature,
    split,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INCOMPLETE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _seed(args) -> int:
    env = os.environ.get("HEXSING_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"HEXSING_SEED must be an integer, got {env!r}") from None
    return args.seed


def _read_hex(path: str, strict=False) -> HexMesh:
    if not Path(path).exists():
        raise UsageError(f"no such file: {path}")
    mesh = io.read_mesh(path, strict=strict)
    if not isinstance(mesh, HexMesh):
        raise UsageError(f"{path} is a triangulation, expected a hex mesh")
    return mesh


def _read_tri(spec: str) -> SphereTriangulation:
    """An OFF path, a signature like ``(4,0,0)``, or a solid name."""
    if Path(spec).exists():
        return io.read_mesh(spec, io.MeshFileFormat.OFF)
    try:
        return link_for(spec)
    except (CatalogError, KeyError, ValueError) as exc:
        raise UsageError(f"{spec!r} is neither a file nor a known triangulation: {exc}") from None


def _parse_cycle(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"bad cycle {text!r}; expected vertex indices like \"0 1 2 3\"") from None


# -- subcommands -------------------------------------------------------------------------


def analyze_report(mesh: HexMesh) -> dict:
    report = validate(mesh)
    graph = trace_curves(mesh)
    q = quality_report(mesh)
    nodes = {}
    for v in graph.nodes:
        try:
            nodes[str(v)] = format_signature(signature(node_link(mesh, v)))
        except TriangulationError:
            nodes[str(v)] = None  # link is not a sphere
    return {
        "vertices": mesh.n_vertices,
        "hexes": mesh.n_hexes,
        "validation": report.to_dict(),
        "singular": graph.to_dict(mesh),
        "node_signatures": nodes,
        "quality": {"minimum": q.minimum, "mean": q.mean, "worst_hex": q.worst_hex,
                    "bound": q.bound, "bound_reason": q.bound_reason},
    }


def cmd_analyze(args) -> int:
    mesh = _read_hex(args.input)
    data = analyze_report(mesh)
    print(f"{data['hexes']} hexes, {data['vertices']} vertices")
    print(f"singular edges: {data['singular']['singular_edges']}, curves: {len(data['singular']['curves'])}, "
          f"nodes: {len(data['singular']['nodes'])}")
    for v, sig in data["node_signatures"].items():
        print(f"  node {v}: {sig}")
    print(f"min scaled Jacobian: {data['quality']['minimum']:.6g}")
    if args.report:
        io.write_json(data, args.report)
    if args.export_singular:
        io.write_singular_obj(mesh, args.export_singular)
    if not data["validation"]["ok"]:
        print(f"validation failed: {', '.join(sorted(validate(mesh).kinds()))}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_decompose(args) -> int:
    mesh = _read_hex(args.input, strict=True)
    config = DecomposeConfig(
        seed=_seed(args),
        max_retries=args.max_retries,
        pad=True if args.pad else None,
        node_order=args.node_order,
        thickness=args.thickness,
    )
    code = EXIT_OK
    try:
        out, log = decompose_all(mesh, config)
    except RetriesExhausted as exc:
        print(f"decomposition incomplete: {exc}", file=sys.stderr)
        out, log = exc.mesh, exc.log
        code = EXIT_INCOMPLETE
    io.write_mesh(out, args.output)
    if args.log:
        io.write_json(log, args.log)
    print(f"{len(log.steps)} inflations, {len(log.remaining_nodes)} nodes left, {out.n_hexes} hexes")
    return code


def cmd_quality(args) -> int:
    mesh = _read_hex(args.input)
    if args.optimize:
        params = OptimizeParams(mode=args.mode, max_iters=args.max_iters, tol=args.tol,
                                restarts=args.restarts, seed=_seed(args))
        mesh, report = optimize(mesh, params)
        if args.output:
            io.write_mesh(mesh, args.output)
    else:
        report = quality_report(mesh)
    bound = f" (bound {report.bound:.6g}, {report.bound_reason})" if report.bound is not None else ""
    print(f"min scaled Jacobian: {report.minimum:.6g}{bound}")
    print(f"mean scaled Jacobian: {report.mean:.6g}")
    if args.report:
        io.write_json(report, args.report)
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.tri:
        t = _read_tri(args.tri)
        mesh, _ = cone_hexification(t)
        if args.pad:
            from .hexmesh import pad_boundary
            mesh = pad_boundary(mesh, args.thickness)
    else:
        try:
            mesh = cone_mesh(args.signature, pad=args.pad, thickness=args.thickness)
        except (CatalogError, KeyError, ValueError) as exc:
            raise UsageError(f"unknown signature {args.signature!r}: {exc}") from None
    io.write_mesh(mesh, args.output)
    print(f"{mesh.n_hexes} hexes, {mesh.n_vertices} vertices -> {args.output}")
    return EXIT_OK


def cmd_tri(args) -> int:
    if args.action == "signature":
        print(format_signature(signature(_read_tri(args.input))))
    elif args.action == "split":
        t = _read_tri(args.input)
        a, b = split(t, _parse_cycle(args.cycle))
        for half, path in zip((a, b), args.output):
            io.write_mesh(half, path, io.MeshFileFormat.OFF)
        print(f"{format_signature(signature(a))} {format_signature(signature(b))}")
    elif args.action == "join":
        t = join(_read_tri(args.first), args.apex1, _read_tri(args.second), args.apex2, args.offset)
        if args.output:
            io.write_mesh(t, args.output, io.MeshFileFormat.OFF)
        print(format_signature(signature(t)))
    elif args.action == "decompose":
        plan = decomposition_plan(_read_tri(args.input))
        if args.json:
            io.write_json(plan, args.json)
        _print_plan(plan)
    elif args.action == "isomorphic":
        print("true" if is_isomorphic(_read_tri(args.first), _read_tri(args.second)) else "false")
    return EXIT_OK


def _print_plan(node, depth=0):
    line = "  " * depth + format_signature(node.signature)
    if node.cycle is not None:
        line += f"  split {list(node.cycle)} ({node.how})"
    print(line)
    for child in node.children:
        _print_plan(child, depth + 1)


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hexsing", description="Singular-node decomposition for hexahedral meshes.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="validate a mesh and report its singular structure")
    a.add_argument("input")
    a.add_argument("--report", help="write a JSON report")
    a.add_argument("--export-singular", help="write singular curves as OBJ polylines")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("decompose", help="remove all singular nodes by sheet inflation")
    d.add_argument("input")
    d.add_argument("-o", "--output", required=True)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--max-retries", type=int, default=DecomposeConfig.max_retries)
    d.add_argument("--pad", action="store_true", help="pad the boundary first")
    d.add_argument("--node-order", choices=("random", "index"), default="random")
    d.add_argument("--thickness", type=float, default=DecomposeConfig.thickness)
    d.add_argument("--log", help="write the decomposition log as JSON")
    d.set_defaults(func=cmd_decompose)

    q = sub.add_parser("quality", help="scaled Jacobian report, optionally after optimization")
    q.add_argument("input")
    q.add_argument("--optimize", action="store_true")
    q.add_argument("--mode", choices=("free", "fixed-boundary"), default="free")
    q.add_argument("--max-iters", type=int, default=OptimizeParams.max_iters)
    q.add_argument("--tol", type=float, default=OptimizeParams.tol)
    q.add_argument("--restarts", type=int, default=OptimizeParams.restarts)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("-o", "--output", help="write the optimized mesh")
    q.add_argument("--report", help="write a JSON report")
    q.set_defaults(func=cmd_quality)

    g = sub.add_parser("generate", help="cone mesh whose center realizes a vertex link")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--signature", help='e.g. "(4,0,0)"')
    src.add_argument("--tri", help="OFF triangulation")
    g.add_argument("--pad", action="store_true")
    g.add_argument("--thickness", type=float, default=0.3)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("tri", help="sphere triangulation operations")
    tsub = t.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = tsub.add_parser("split")
    s.add_argument("input", help="OFF file, signature or solid name")
    s.add_argument("--cycle", required=True, help='vertex indices, e.g. "0 1 2 3"')
    s.add_argument("-o", "--output", nargs=2, required=True, metavar=("FIRST", "SECOND"))
    j = tsub.add_parser("join")
    j.add_argument("first")
    j.add_argument("apex1", type=int)
    j.add_argument("second")
    j.add_argument("apex2", type=int)
    j.add_argument("--offset", type=int, default=0)
    j.add_argument("-o", "--output")
    sg = tsub.add_parser("signature")
    sg.add_argument("input")
    dp = tsub.add_parser("decompose")
    dp.add_argument("input")
    dp.add_argument("--json", help="write the plan tree as JSON")
    iso = tsub.add_parser("isomorphic")
    iso.add_argument("first")
    iso.add_argument("second")
    t.set_defaults(func=cmd_tri)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (io.ParseError, io.MeshValidationError, MeshError, TriangulationError, PlanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

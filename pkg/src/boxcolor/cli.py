"""Command-line interface.

Exit codes: 0 success / sat / pass, 1 unsat / fail, 2 usage or bad input,
3 internal error or timeout.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bounds, certify, conflict, constructions, solver
from .errors import BoxColorError, InvalidArrangement, PreconditionViolated
from .geometry import Arrangement, validate

log = logging.getLogger("boxcolor")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text)


def _load(path: str):
    """Read an arrangement JSON or an edge-list graph JSON."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if "boxes" in data:
        try:
            return Arrangement.from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{path}: malformed arrangement: {exc}") from exc
    if "vertices" in data and "edges" in data:
        return conflict.ConflictGraph.from_edges(data["vertices"], [tuple(e) for e in data["edges"]])
    raise UsageError(f"{path}: neither an arrangement nor a graph")


def _graph_of(obj):
    if isinstance(obj, Arrangement):
        return conflict.build_graph(obj)
    return obj


def _jobs(args) -> int:
    return 1 if args.single_worker else max(1, args.jobs)


def cmd_gen(args):
    kind = args.kind
    if kind == "random":
        if args.seed is None:
            raise UsageError("gen random requires --seed")
        arr = constructions.gen_random_guillotine(args.seed, args.count, tuple(args.bbox), args.min_side)
    elif kind == "z-abstract":
        g, zs = constructions.build_z_abstract()
        payload = {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges], "structure": zs.to_dict()}
        _write(json.dumps(payload), args.output)
        return EXIT_OK
    else:
        arr = {
            "x": constructions.build_gadget_x,
            "y": constructions.build_gadget_y,
            "z-geometric": constructions.build_z_geometric,
            "figure1": constructions.build_figure1,
        }[kind]()
    _write(arr.to_json(indent=None), args.output)
    return EXIT_OK


def cmd_graph(args):
    g = _graph_of(_load(args.input))
    text = conflict.export_dot(g) if args.format == "dot" else conflict.export_edges_json(g)
    _write(text, args.output)
    return EXIT_OK


def cmd_chromatic(args):
    g = _graph_of(_load(args.input))
    chi, witness = solver.chromatic_number(g, node_limit=args.node_limit)
    print(chi)
    if args.output:
        _write(solver.coloring_to_json(g, witness), args.output)
    return EXIT_OK


def cmd_kcolor(args):
    g = _graph_of(_load(args.input))
    seed = not args.no_seed
    if args.cnf:
        Path(args.cnf).write_text(solver.export_cnf(g, args.k, seed_clique=seed))
    outcome = solver.k_colorable_outcome(g, args.k, seed_clique=seed, node_limit=args.node_limit)
    verdict = outcome.sat
    print(f"internal: {'SAT' if verdict else 'UNSAT'} ({outcome.nodes} nodes)")
    if args.sat_cmd:
        ext_sat, model = solver.run_external_sat(solver.export_cnf(g, args.k, seed_clique=seed), args.sat_cmd)
        print(f"external: {'SAT' if ext_sat else 'UNSAT'}")
        if ext_sat:
            decoded = solver.decode_model(g, args.k, model)
            if solver.verify_coloring(g, decoded) is not None:
                log.error("external model does not decode to a proper colouring")
                return EXIT_ERROR
        if ext_sat != verdict:
            log.error("internal and external verdicts disagree")
            return EXIT_ERROR
    if verdict and args.output:
        _write(solver.coloring_to_json(g, outcome.coloring), args.output)
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_color(args):
    arr = _load(args.input)
    if not isinstance(arr, Arrangement):
        raise UsageError("color needs an arrangement, not a bare graph")
    jobs = _jobs(args)
    if args.strategy == "level":
        ell = args.ell if args.ell is not None else max(b.side(args.axis) for b in arr.boxes)
        c, rep = bounds.color_by_level(arr, args.axis, ell, jobs=jobs)
    elif args.strategy == "own-dim":
        ell = args.ell if args.ell is not None else max(b.min_side for b in arr.boxes)
        c, rep = bounds.color_by_own_dim(arr, ell, jobs=jobs)
    elif args.strategy == "surface":
        s = args.s if args.s is not None else max(b.surface for b in arr.boxes)
        c, rep = bounds.color_by_surface(arr, s, jobs=jobs)
    else:
        v = args.v if args.v is not None else max(b.volume for b in arr.boxes)
        c, rep = bounds.color_by_volume(arr, v, jobs=jobs)
    _write(rep.to_json(indent=2), args.report)
    if args.output:
        _write(solver.coloring_to_json(conflict.build_graph(arr), c), args.output)
    return EXIT_OK


def cmd_verify_coloring(args):
    g = _graph_of(_load(args.input))
    try:
        graph_hash, colouring = solver.coloring_from_json(Path(args.coloring).read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read colouring: {exc}") from exc
    if graph_hash and graph_hash != g.content_hash():
        log.warning("colouring was produced for a different graph")
    bad = solver.verify_coloring(g, colouring)
    if bad is None:
        print(f"ok ({solver.palette_size(colouring)} colours)")
        return EXIT_OK
    print(f"violation: {bad[0]} -- {bad[1]} share colour {colouring[bad[0]]}")
    return EXIT_FAIL


def cmd_check_claim1(args):
    x = _load(args.input) if args.input else constructions.build_gadget_x()
    r = certify.check_claim1(x)
    print(json.dumps({"passed": r.passed, "colorings": r.colorings, "counter_signature": r.counter_signature}))
    return EXIT_OK if r.passed else EXIT_FAIL


def cmd_check_claim2(args):
    y = _load(args.input) if args.input else constructions.build_gadget_y()
    r = certify.check_claim2(y, node_limit=args.node_limit)
    print(json.dumps({"passed": r.passed, "nodes": r.nodes}))
    return EXIT_OK if r.passed else EXIT_FAIL


def cmd_certify_z(args):
    if args.recheck:
        try:
            cert = json.loads(Path(args.recheck).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read certificate: {exc}") from exc
        problems = certify.recheck_certificate(cert)
        for p in problems:
            print(f"FAIL {p}")
        if not problems:
            print("certificate re-check: pass")
        return EXIT_FAIL if problems else EXIT_OK
    cert = certify.certify_z(jobs=_jobs(args), cnf_path=args.cnf)
    _write(json.dumps(cert), args.output)
    print(f"chi(Z) = {cert['conclusion']['chi']}", file=sys.stderr)
    return EXIT_OK


def cmd_stats(args):
    obj = _load(args.input)
    g = _graph_of(obj)
    out = {"vertices": len(g), "edges": len(g.edges)}
    if isinstance(obj, Arrangement):
        out["valid"] = validate(obj).ok
        out["floors"] = obj.floors()
        out["regions"] = {k: len(v) for k, v in obj.regions.items()}
    out["degeneracy"] = conflict.degeneracy(g)[0]
    out["components"] = len(conflict.components(g))
    out["max_clique"] = conflict.max_clique(g)
    print(json.dumps(out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boxcolor", description=__doc__.splitlines()[0])
    p.add_argument("--jobs", type=int, default=1, help="worker threads for independent components")
    p.add_argument("--single-worker", action="store_true", help="force one worker (deterministic witnesses)")
    p.add_argument("--node-limit", type=int, default=solver.DEFAULT_NODE_LIMIT, help="search budget before timeout")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an arrangement")
    g.add_argument("kind", choices=["x", "y", "z-abstract", "z-geometric", "figure1", "random"])
    g.add_argument("-o", "--output")
    g.add_argument("--seed", type=int)
    g.add_argument("--count", type=int, default=50)
    g.add_argument("--bbox", type=int, nargs=3, default=[16, 16, 16])
    g.add_argument("--min-side", type=int, default=1)
    g.set_defaults(func=cmd_gen)

    g = sub.add_parser("graph", help="export the conflict graph")
    g.add_argument("-i", "--input", required=True)
    g.add_argument("--format", choices=["dot", "json"], default="dot")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_graph)

    g = sub.add_parser("chromatic", help="exact chromatic number")
    g.add_argument("-i", "--input", required=True)
    g.add_argument("-o", "--output", help="write the witness colouring")
    g.set_defaults(func=cmd_chromatic)

    g = sub.add_parser("kcolor", help="decide k-colourability")
    g.add_argument("-i", "--input", required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--cnf", help="also write the DIMACS encoding here")
    g.add_argument("--sat-cmd", help="external DIMACS solver; the CNF path is appended")
    g.add_argument("--no-seed", action="store_true", help="skip clique seeding")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_kcolor)

    g = sub.add_parser("color", help="colour with a bounded-palette strategy")
    g.add_argument("-i", "--input", required=True)
    g.add_argument("--strategy", choices=["level", "own-dim", "surface", "volume"], required=True)
    g.add_argument("--axis", type=int, default=2, choices=[0, 1, 2])
    g.add_argument("--ell", type=int)
    g.add_argument("--s", type=float)
    g.add_argument("--v", type=float)
    g.add_argument("-o", "--output", help="write the colouring")
    g.add_argument("--report", help="write the report here instead of stdout")
    g.set_defaults(func=cmd_color)

    g = sub.add_parser("verify-coloring", help="check a colouring against an arrangement")
    g.add_argument("-i", "--input", required=True)
    g.add_argument("--coloring", required=True)
    g.set_defaults(func=cmd_verify_coloring)

    g = sub.add_parser("check-claim1", help="exhaustive signature check on gadget X")
    g.add_argument("-i", "--input")
    g.set_defaults(func=cmd_check_claim1)

    g = sub.add_parser("check-claim2", help="capped colouring search on gadget Y")
    g.add_argument("-i", "--input")
    g.set_defaults(func=cmd_check_claim2)

    g = sub.add_parser("certify-z", help="certify chi(Z) = 8")
    g.add_argument("-o", "--output")
    g.add_argument("--cnf", help="write the 7-colourability CNF of abstract Z")
    g.add_argument("--recheck", help="replay an existing certificate instead")
    g.set_defaults(func=cmd_certify_z)

    g = sub.add_parser("stats", help="summary measures of an arrangement or graph")
    g.add_argument("-i", "--input", required=True)
    g.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (InvalidArrangement, PreconditionViolated) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except BoxColorError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

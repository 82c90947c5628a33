"""Command line front end.

Exit codes are part of the contract: 0 success, 1 validation or
instance failure, 2 size guard, 3 oracle mismatch, 4 certificate over
budget, 5 certificate inadmissible (including broken ring holonomy).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from ..blocks import ShadowKind, classify
from ..coorient import conflicts, verify_certificate
from ..embed import derive_embedding
from ..gauss import covering_depth, gauss_obstruction, pt_bounds, \
    rotation_number
from ..model import ShadowError, validate_shadow
from ..solve import Solution, mu, mu_loc, solve_bruteforce, solve_cactus
from .experiment import (load_experiment, parse_generator, build_generator,
                         rows_to_csv, run_experiment)
from .render import render_svg
from .schema import (dumps_shadow, load_certificate, load_profile,
                     load_shadow, solution_to_dict)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_GUARD = 2
EXIT_ORACLE = 3
EXIT_BUDGET = 4
EXIT_INADMISSIBLE = 5

_REASON_CODES = {"OVER_BUDGET": EXIT_BUDGET,
                 "INADMISSIBLE": EXIT_INADMISSIBLE,
                 "HOLONOMY": EXIT_INADMISSIBLE}


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _witness_string(witness) -> str:
    return "".join("I" if c.value == "in" else "O" for c in witness)


def _conflict_lines(shadow, witness, index) -> list[str]:
    rep = conflicts(shadow, witness, index)
    spots = [f"vertex {v} transition {t}"
             for v, pair in enumerate(rep.per_transition)
             for t, hit in enumerate(pair) if hit]
    if not spots:
        return ["conflicts: none"]
    return ["conflicts: " + "; ".join(spots)]


def _cmd_validate(args) -> int:
    shadow = load_shadow(args.shadow)
    index = validate_shadow(shadow)
    kind = classify(shadow, index).kind.value
    rot = rotation_number(shadow, index)
    print(f"ok: vertices={shadow.n_vertices} arcs={shadow.n_arcs} "
          f"kind={kind} rot={rot:+d}")
    return EXIT_OK


def _oracle_solution(shadow, index, embedding, mode: str,
                     kind: ShadowKind) -> Optional[Solution]:
    if mode == "local":
        return solve_bruteforce(shadow, index, embedding,
                                enforce_holonomy=False)
    if mode == "necklace" or kind is ShadowKind.TREE_NECKLACE:
        rings = classify(shadow, index).rings
        return solve_bruteforce(shadow, index, embedding,
                                enforce_holonomy=True, rings=rings)
    if kind is ShadowKind.TREE_LIKE:
        return solve_bruteforce(shadow, index, embedding,
                                enforce_holonomy=False)
    return None  # brute force already was the method


def _cmd_solve(args) -> int:
    shadow = load_shadow(args.shadow)
    index = validate_shadow(shadow)
    embedding = derive_embedding(shadow, index)
    if args.mode == "local":
        sol = mu_loc(shadow, index, embedding)
    elif args.mode == "necklace":
        sol = solve_cactus(shadow, index, embedding)
    else:
        sol = mu(shadow, index, embedding)
    if args.oracle:
        kind = classify(shadow, index).kind
        ref = _oracle_solution(shadow, index, embedding, args.mode, kind)
        if ref is not None and ref.value != sol.value:
            print(f"oracle mismatch: got {sol.value}, "
                  f"brute force says {ref.value}", file=sys.stderr)
            return EXIT_ORACLE
    if args.json:
        print(json.dumps(solution_to_dict(sol), indent=1))
        return EXIT_OK
    print(f"mu = {sol.value} ({sol.status})")
    if sol.witness is not None:
        print(f"witness: {_witness_string(sol.witness)} (arc order)")
        for line in _conflict_lines(shadow, sol.witness, index):
            print(line)
    if sol.note:
        print(f"note: {sol.note}")
    return EXIT_OK


def _cmd_certify(args) -> int:
    shadow = load_shadow(args.shadow)
    index = validate_shadow(shadow)
    coor, file_budget = load_certificate(args.certificate, shadow.n_arcs)
    budget = args.budget if args.budget is not None else file_budget
    res = verify_certificate(shadow, coor, budget, index, mode=args.mode)
    if res.ok:
        cap = "no budget" if budget is None else f"budget {budget}"
        print(f"ok: {res.conflicts} conflicts within {cap}")
        if res.note:
            print(f"note: {res.note}")
        return EXIT_OK
    print(f"rejected: {res.reason} ({res.conflicts} conflicts)")
    if res.note:
        print(f"note: {res.note}")
    return _REASON_CODES.get(res.reason, EXIT_INVALID)


def _cmd_gauss(args) -> int:
    if args.what == "rot":
        shadow = load_shadow(args.shadow)
        print(f"rot = {rotation_number(shadow):+d}")
        return EXIT_OK
    if args.what == "depth":
        profile = load_profile(args.profile)
        depth, witness = covering_depth(profile, projective=args.projective)
        space = "line directions" if args.projective else "directions"
        print(f"depth = {depth} over {space}, witness angle {witness:.6f}")
        return EXIT_OK
    shadow = load_shadow(args.shadow)
    index = validate_shadow(shadow)
    if args.profile is None:
        b = pt_bounds(shadow, index)
        print(f"parallel tangents >= {b.lower}, parity {b.parity} "
              f"(rot = {b.rot:+d})")
        if b.note:
            print(f"note: {b.note}")
        return EXIT_OK
    report = gauss_obstruction(shadow, load_profile(args.profile), index)
    verdict = "obstruction" if report.implied else "inconclusive"
    print(f"{verdict}: {report.reason}")
    if report.depth is not None:
        print(f"depth = {report.depth}, witness angle {report.witness:.6f}")
    return EXIT_OK


def _cmd_render(args) -> int:
    shadow = load_shadow(args.shadow)
    coor = None
    if args.certificate:
        coor, _ = load_certificate(args.certificate, shadow.n_arcs)
    svg, _ = render_svg(shadow, coor)
    _emit(svg, args.out)
    return EXIT_OK


def _cmd_gen(args) -> int:
    entry: dict = {"kind": args.kind, "seed": args.seed}
    if args.n is not None:
        entry["n"] = args.n
    if args.m is not None:
        entry["m"] = args.m
    if args.attach_random is not None:
        entry["attach"] = args.attach_random
    elif args.attach:
        pairs = []
        for tok in args.attach:
            arc, _, side = tok.partition(":")
            if not arc.isdigit() or side not in ("left", "right"):
                raise ShadowError("E_SPEC",
                                  f"attach wants ARC:left|right, got {tok!r}")
            pairs.append([int(arc), side])
        entry["attach"] = pairs
    shadow = build_generator(parse_generator(entry))
    _emit(dumps_shadow(shadow, include_embedding=args.embed), args.out)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    try:
        specs = load_experiment(args.spec)
        rows = run_experiment(specs, timed=args.timing)
    except ShadowError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    _emit(rows_to_csv(rows), args.out)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="shadowmin",
        description="Minimum inflection counts for curves with a "
                    "prescribed tree-like or necklace shadow.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a shadow file")
    p.add_argument("shadow")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("solve", help="minimize normalized inflections")
    p.add_argument("shadow")
    p.add_argument("--mode", choices=("auto", "local", "necklace"),
                   default="auto")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against brute force")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("certify", help="verify a coorientation witness")
    p.add_argument("shadow")
    p.add_argument("certificate")
    p.add_argument("--budget", type=int, default=None,
                   help="conflict cap; overrides the certificate's own")
    p.add_argument("--mode", choices=("local", "necklace"),
                   default="necklace",
                   help="local skips the ring holonomy check")
    p.set_defaults(fn=_cmd_certify)

    p = sub.add_parser("gauss", help="tangent-map invariants")
    p.add_argument("what", choices=("rot", "depth", "bounds"))
    p.add_argument("shadow", nargs="?",
                   help="shadow file (rot and bounds)")
    p.add_argument("--profile", help="turning profile JSON")
    p.add_argument("--projective", action="store_true",
                   help="depth over line directions")
    p.set_defaults(fn=_cmd_gauss)

    p = sub.add_parser("render", help="SVG picture of a shadow")
    p.add_argument("shadow")
    p.add_argument("--certificate",
                   help="draw this coorientation and its conflicts")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("gen", help="write a generated shadow file")
    p.add_argument("--kind", required=True,
                   choices=("TreeLikeRandom", "CurlChain", "Necklace",
                            "FigureEight", "Curl", "Trefoil"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=None,
                   help="crossings (TreeLikeRandom)")
    p.add_argument("--m", type=int, default=None,
                   help="loops (CurlChain) or beads (Necklace)")
    p.add_argument("--attach", action="append", default=[],
                   metavar="ARC:SIDE", help="splice a loop onto a necklace")
    p.add_argument("--attach-random", type=int, default=None,
                   metavar="K", help="K seeded random splices instead")
    p.add_argument("--embed", action="store_true",
                   help="include the derived embedding block")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("experiment", help="batch solve to CSV")
    p.add_argument("spec", help="experiment description JSON")
    p.add_argument("--timing", action="store_true",
                   help="fill wall_ms with real measurements; the column "
                        "is 0.000 by default so output bytes are "
                        "reproducible")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(fn=_cmd_experiment)
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "gauss":
        if args.what == "depth" and not args.profile:
            print("error: gauss depth needs --profile", file=sys.stderr)
            return EXIT_INVALID
        if args.what in ("rot", "bounds") and not args.shadow:
            print("error: gauss rot/bounds needs a shadow file",
                  file=sys.stderr)
            return EXIT_INVALID
    try:
        return args.fn(args)
    except ShadowError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD if e.code == "E_TOO_LARGE" else EXIT_INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

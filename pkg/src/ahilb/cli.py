"""Command line interface.

    ahilb report   "1/11(1,2,8)" [--json PATH]
    ahilb fan      "1/11(1,2,8)" [--json PATH]
    ahilb draw     "1/11(1,2,8)" --svg PATH [--ratios]
    ahilb clusters "1/11(1,2,8)" [--triangle ID] [--json PATH]
    ahilb verify   ["1/11(1,2,8)"] [--random N --max-order B --seed S]

Exit codes: 0 success, 1 invalid group specification, 2 a cross-check or
invariant failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .clusters import cluster_system, equations_text
from .draw import render_svg
from .errors import GroupSpecError, InvariantError
from .fan import build_fan, dp6_count, surface_census
from .lattice import LatticeContext, lattice_context, parse_group_spec
from .monomials import dual_basis, triangle_ratios
from .partition import build_partition
from .verify import run_checks, run_random_suite


def _tag_json(tag) -> list:
    return list(tag)


def build_document(ctx: LatticeContext) -> dict:
    """The full report with deterministic field and element order."""
    part = build_partition(ctx)
    fan = build_fan(ctx, part)
    parents = [triangle_ratios(ctx, tri) for tri in part.triangles]
    census = surface_census(ctx, fan, part)

    doc = {
        "group": ctx.spec.canonical_text,
        "denominator": ctx.n,
        "order": ctx.order,
        "corners": [
            {
                "corner": i,
                "vectors": [list(v) for v in part.fans[i].vectors],
                "strengths": list(part.fans[i].strengths),
            }
            for i in (1, 2, 3)
        ],
        "cyclic_word": [
            {"value": e.value, "tag": _tag_json(e.tag), "vector": list(e.vector)}
            for e in part.word.entries
        ],
    }
    if part.long_side is not None:
        doc["long_side"] = {"side": part.long_side[0], "c": part.long_side[1]}
    owner = {}
    for side, members in part.catchment.items():
        for t in members:
            owner[t] = side
    doc["partition"] = [
        {
            "vertices": [list(v) for v in tri.vertices],
            "side": tri.r,
            "case": parents[t].case,
            "catchment": owner.get(t),
            "lines": [_tag_json(tag) for tag in tri.side_lines],
        }
        for t, tri in enumerate(part.triangles)
    ]
    champ = {"kind": part.champions.kind}
    if part.champions.point is not None:
        champ["point"] = list(part.champions.point)
    if part.champions.triangle_key is not None:
        champ["triangle"] = part.triangle_index(part.champions.triangle_key)
    if part.champions.side is not None:
        champ["side"] = part.champions.side
        champ["c"] = part.champions.c
    doc["champions"] = champ
    doc["fan"] = {
        "rays": [list(r) for r in fan.rays],
        "cones": [
            {
                "vertices": [list(v) for v in c.vertices],
                "kind": c.kind,
                "parent": c.parent,
            }
            for c in fan.cones
        ],
    }
    doc["census"] = [
        {
            "vertex": list(s.vertex),
            "valency": s.valency,
            "b": list(s.b),
            "label": s.label,
        }
        for s in census
    ]
    doc["dp6_count"] = dp6_count(part)
    clusters = []
    for idx, cell in enumerate(fan.cones):
        db = dual_basis(ctx, part.triangles[cell.parent], parents[cell.parent],
                        cell)
        sysm = cluster_system(ctx, db)
        clusters.append(
            {
                "cone": idx,
                "mode": sysm.mode,
                "exponents": dict(
                    zip("abcdeflmn", sysm.exponents())
                ),
            }
        )
    doc["clusters"] = clusters
    return doc


def _dump(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, separators=(",", ":"))
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _cmd_report(args) -> int:
    ctx = lattice_context(parse_group_spec(args.spec))
    _dump(build_document(ctx), args.json)
    return 0


def _cmd_fan(args) -> int:
    ctx = lattice_context(parse_group_spec(args.spec))
    doc = build_document(ctx)
    _dump(
        {
            "group": doc["group"],
            "denominator": doc["denominator"],
            "order": doc["order"],
            "fan": doc["fan"],
        },
        args.json,
    )
    return 0


def _cmd_draw(args) -> int:
    ctx = lattice_context(parse_group_spec(args.spec))
    part = build_partition(ctx)
    fan = build_fan(ctx, part)
    svg = render_svg(ctx, part, fan, ratios=args.ratios)
    with open(args.svg, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return 0


def _cmd_clusters(args) -> int:
    ctx = lattice_context(parse_group_spec(args.spec))
    part = build_partition(ctx)
    fan = build_fan(ctx, part)
    parents = [triangle_ratios(ctx, tri) for tri in part.triangles]
    if args.triangle is not None and not 0 <= args.triangle < len(fan.cones):
        sys.stderr.write(
            f"triangle id out of range; valid ids are 0..{len(fan.cones) - 1}\n"
        )
        return 1
    wanted = (
        range(len(fan.cones)) if args.triangle is None else [args.triangle]
    )
    docs = []
    for idx in wanted:
        cell = fan.cones[idx]
        db = dual_basis(ctx, part.triangles[cell.parent], parents[cell.parent],
                        cell)
        sysm = cluster_system(ctx, db)
        docs.append(
            {
                "cone": idx,
                "vertices": [list(v) for v in cell.vertices],
                "mode": sysm.mode,
                "exponents": dict(zip("abcdeflmn", sysm.exponents())),
                "equations": equations_text(sysm),
            }
        )
    if args.json:
        _dump({"group": ctx.spec.canonical_text, "systems": docs}, args.json)
    else:
        for d in docs:
            sys.stdout.write(
                f"cone {d['cone']} ({d['mode']}, vertices {d['vertices']}):\n"
            )
            for line in d["equations"]:
                sys.stdout.write(f"  {line}\n")
    return 0


def _cmd_verify(args) -> int:
    if args.spec is None and not args.random:
        sys.stderr.write("verify needs a group spec or --random N\n")
        return 1
    failures = []
    if args.spec is not None:
        ctx = lattice_context(parse_group_spec(args.spec))
        results = run_checks(ctx, seed=args.seed)
        for res in results:
            status = "pass" if res.ok else f"FAIL ({res.detail})"
            sys.stdout.write(f"{res.name}: {status}\n")
        failures += [r for r in results if not r.ok]
        part = build_partition(ctx)
        if part.long_side:
            s, c = part.long_side
            names = {1: "e1e2", 2: "e2e3", 3: "e3e1"}
            sys.stdout.write(
                f"long side {names[s]} c={c}; its catchment is empty\n"
            )
    if args.random:
        count, bad = run_random_suite(args.random, args.max_order, args.seed)
        sys.stdout.write(
            f"random suite: {count} groups of order <= {args.max_order}, "
            f"{len(bad)} failures\n"
        )
        for line in bad:
            sys.stdout.write(f"  {line}\n")
        failures += bad
    return 2 if failures else 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ahilb",
        description=(
            "Exact partition, resolution fan, invariant ratios and cluster "
            "systems for a finite diagonal subgroup of SL(3,C)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="full JSON report")
    p.add_argument("spec")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(fn=_cmd_report)

    p = sub.add_parser("fan", help="fan rays and cones as JSON")
    p.add_argument("spec")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(fn=_cmd_fan)

    p = sub.add_parser("draw", help="SVG figure of the partition")
    p.add_argument("spec")
    p.add_argument("--svg", metavar="PATH", required=True)
    p.add_argument("--ratios", action="store_true",
                   help="label interior edges with invariant ratios")
    p.set_defaults(fn=_cmd_draw)

    p = sub.add_parser("clusters", help="cluster equation systems")
    p.add_argument("spec")
    p.add_argument("--triangle", type=int, metavar="ID",
                   help="basic triangle id (default: all)")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(fn=_cmd_clusters)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("spec", nargs="?")
    p.add_argument("--random", type=int, metavar="N", default=0)
    p.add_argument("--max-order", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GroupSpecError as exc:
        sys.stderr.write(f"invalid group: {exc}\n")
        return 1
    except InvariantError as exc:
        sys.stderr.write(f"internal invariant violated: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

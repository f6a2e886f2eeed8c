"""Deterministic SVG rendering of the partitioned simplex.

The simplex is drawn as an equilateral triangle via the barycentric map
(p1,p2,p3)/n -> (p2 + p3/2, p3*sqrt(3)/2), applied at render time only;
all upstream geometry stays exact.  Solid lines show the partition with
strength labels, dotted lines the tesselation; optional labels show the
invariant ratio on every interior edge.
"""

from __future__ import annotations

from math import sqrt

from .fan import Fan
from .lattice import LatticeContext, Vec3, primitive_vector, smul, vadd, vsub
from .monomials import primitive_in_monomial_lattice, ratio_str
from .partition import Partition

SIZE = 520.0
MARGIN = 45.0


def _project(q: Vec3, n: int) -> tuple[float, float]:
    x = (q[1] + q[2] / 2.0) / n
    y = (q[2] * sqrt(3.0) / 2.0) / n
    return (MARGIN + x * SIZE, MARGIN + (sqrt(3.0) / 2.0) * SIZE - y * SIZE)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(ctx: LatticeContext, part: Partition, fan: Fan,
               ratios: bool = False) -> str:
    n = ctx.n
    width = 2 * MARGIN + SIZE
    height = 2 * MARGIN + SIZE * sqrt(3.0) / 2.0
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
    ]

    solid = _partition_edges(ctx, part)
    dotted = sorted(
        tuple(sorted(e)) for e in fan.edges if tuple(sorted(e)) not in solid
    )
    for a, b in dotted:
        xa, ya = _project(a, n)
        xb, yb = _project(b, n)
        out.append(
            f'<line x1="{_fmt(xa)}" y1="{_fmt(ya)}" x2="{_fmt(xb)}" '
            f'y2="{_fmt(yb)}" stroke="#888888" stroke-width="1" '
            f'stroke-dasharray="4 3"/>'
        )
    for a, b in sorted(solid):
        xa, ya = _project(a, n)
        xb, yb = _project(b, n)
        out.append(
            f'<line x1="{_fmt(xa)}" y1="{_fmt(ya)}" x2="{_fmt(xb)}" '
            f'y2="{_fmt(yb)}" stroke="black" stroke-width="2"/>'
        )

    # Strength labels on the interior lines, placed a third of the way out.
    for tag in sorted(t for t in part.lines if t[0] == "corner"):
        line = part.lines[tag]
        end = line.defeat_point
        xa, ya = _project(line.anchor, n)
        xb, yb = _project(end, n)
        lx, ly = xa + (xb - xa) / 3.0, ya + (yb - ya) / 3.0
        out.append(
            f'<text x="{_fmt(lx + 4)}" y="{_fmt(ly - 4)}" '
            f'font-size="13" fill="#c0392b">{line.strength}</text>'
        )

    if ratios:
        inner_edges = sorted(
            tuple(sorted(e)) for e in fan.edges
            if not _boundary_edge(tuple(sorted(e)))
        )
        for a, b in inner_edges:
            label = ratio_str(_edge_ratio(ctx, a, b))
            xa, ya = _project(a, n)
            xb, yb = _project(b, n)
            mx, my = (xa + xb) / 2.0, (ya + yb) / 2.0
            out.append(
                f'<text x="{_fmt(mx + 3)}" y="{_fmt(my - 3)}" '
                f'font-size="10" fill="#2c3e50">{label}</text>'
            )

    for q in fan.rays:
        x, y = _project(q, n)
        out.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="2.4" fill="black"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _boundary_edge(edge) -> bool:
    a, b = edge
    return any(a[t] == 0 and b[t] == 0 for t in range(3))


def _edge_ratio(ctx: LatticeContext, a: Vec3, b: Vec3) -> Vec3:
    from .monomials import _cross3

    m = primitive_in_monomial_lattice(ctx, _cross3(a, b))
    nz = next(x for x in m if x)
    return m if nz > 0 else smul(-1, m)


def _partition_edges(ctx: LatticeContext, part: Partition) -> set:
    """Unit edges lying on partition triangle sides (and hence drawn
    solid); the tesselation subdivides every side at its lattice points."""
    edges = set()
    for tri in part.triangles:
        for t in range(3):
            a, b = tri.side_of(t)
            step = primitive_vector(ctx, vsub(b, a))
            cur = a
            while cur != b:
                nxt = vadd(cur, step)
                edges.add(tuple(sorted((cur, nxt))))
                cur = nxt
    return edges

"""Tesselation of regular triangles into basic triangles, the resolution
fan, crepancy checks and the census of exceptional surfaces."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from itertools import combinations
from math import comb

from .errors import InvariantError
from .lattice import (
    LatticeContext,
    Vec3,
    chart,
    cross2,
    dot,
    smul,
    vadd,
    vsub,
)
from .partition import Partition, RegularTriangle


@dataclass(frozen=True)
class BasicTriangle:
    """One unimodular cell of a regular triangle's tesselation.

    steps = (i, j, k) counts how far the three sides of the parent were
    pushed inwards: i+j+k = r-1 for an "up" cell (a shrunken parallel copy
    of the parent), i+j+k = r+1 with i,j,k > 0 for a "down" cell (an
    inverted copy).  vertices[t] has parent-barycentric coordinate t
    extremal, matching the parent's vertex order.
    """

    parent: int  # index into Partition.triangles
    kind: str  # "up" | "down"
    steps: tuple[int, int, int]
    vertices: tuple[Vec3, Vec3, Vec3]

    def key(self) -> tuple[Vec3, Vec3, Vec3]:
        return tuple(sorted(self.vertices))


def tesselate(ctx: LatticeContext, tri: RegularTriangle,
              parent_index: int = 0) -> list[BasicTriangle]:
    """The r^2 unimodular cells of a side-r regular triangle."""
    r = tri.r
    w1, w2, w3 = tri.vertices
    u = _grid_step(ctx, w1, w2, r)
    w = _grid_step(ctx, w1, w3, r)

    def grid(alpha: int, beta: int, gamma: int) -> Vec3:
        # Barycentric steps (alpha, beta, gamma), alpha+beta+gamma = r.
        return vadd(vadd(w1, smul(beta, u)), smul(gamma, w))

    cells = []
    for i in range(r):
        for j in range(r - i):
            k = r - 1 - i - j
            cells.append(BasicTriangle(
                parent_index, "up", (i, j, k),
                (grid(i + 1, j, k), grid(i, j + 1, k), grid(i, j, k + 1)),
            ))
    for i in range(1, r + 1):
        for j in range(1, r + 1 - i):
            k = r + 1 - i - j
            if k < 1:
                continue
            cells.append(BasicTriangle(
                parent_index, "down", (i, j, k),
                (grid(i - 1, j, k), grid(i, j - 1, k), grid(i, j, k - 1)),
            ))
    ups = sum(1 for c in cells if c.kind == "up")
    downs = len(cells) - ups
    if ups != comb(r + 1, 2) or downs != comb(r, 2):
        raise InvariantError("tesselation cell counts are off")
    return cells


def _grid_step(ctx: LatticeContext, frm: Vec3, to: Vec3, r: int) -> Vec3:
    v = vsub(to, frm)
    if any(c % r for c in v):
        raise InvariantError("triangle side is not divisible by its length")
    step = (v[0] // r, v[1] // r, v[2] // r)
    if not ctx.is_translation(step):
        raise InvariantError("tesselation step leaves the lattice")
    return step


def barycentric_steps(ctx: LatticeContext, tri: RegularTriangle,
                      point: Vec3) -> tuple[int, int, int]:
    """Integer barycentrics of a lattice point w.r.t. a regular triangle:
    component t is the number of lattice steps from the side opposite
    vertex t; the components sum to r."""
    w1, w2, w3 = tri.vertices
    r = tri.r
    u = ctx.plane_coords(vsub(w2, w1))
    w = ctx.plane_coords(vsub(w3, w1))
    p = ctx.plane_coords(vsub(point, w1))
    d = cross2(u, w)
    beta_num = cross2(p, w)
    gamma_num = cross2(u, p)
    if d < 0:
        beta_num, gamma_num, d = -beta_num, -gamma_num, -d
    if beta_num * r % d or gamma_num * r % d:
        raise InvariantError("point is not on the triangle's step grid")
    beta = beta_num * r // d
    gamma = gamma_num * r // d
    return (r - beta - gamma, beta, gamma)


@dataclass(frozen=True)
class Fan:
    """The junior-plane cross-section of the resolution fan."""

    rays: tuple[Vec3, ...]  # all cone generators, scaled by n
    cones: tuple[BasicTriangle, ...]
    edges: frozenset[frozenset]  # two-element frozensets of ray points
    boundary_rays: frozenset[Vec3]


def build_fan(ctx: LatticeContext, part: Partition) -> Fan:
    """Merge the tesselations of all partition triangles."""
    cones: list[BasicTriangle] = []
    for t, tri in enumerate(part.triangles):
        cones.extend(tesselate(ctx, tri, t))
    if len(cones) != ctx.order:
        raise InvariantError("cone count differs from the group order")
    verts = sorted({v for c in cones for v in c.vertices})
    edges: dict[frozenset, int] = {}
    for c in cones:
        for a, b in combinations(c.vertices, 2):
            edges[frozenset((a, b))] = edges.get(frozenset((a, b)), 0) + 1
    boundary = set()
    for e, mult in edges.items():
        if mult > 2:
            raise InvariantError("an edge borders more than two cones")
        if mult == 1:
            a, b = tuple(e)
            if not _on_simplex_boundary(a, b):
                raise InvariantError(
                    f"interior edge {tuple(e)} borders only one cone: "
                    "tesselations do not match across triangles"
                )
            boundary.update((a, b))
    return Fan(tuple(verts), tuple(cones), frozenset(edges), frozenset(boundary))


def _on_simplex_boundary(a: Vec3, b: Vec3) -> bool:
    return any(a[t] == 0 and b[t] == 0 for t in range(3))


def verify_fan(ctx: LatticeContext, fan: Fan) -> list[str]:
    """Crepancy and smoothness checks; returns violations (empty = pass)."""
    out = []
    n = ctx.n
    for p in fan.rays:
        if sum(p) != n:
            out.append(f"ray {p} is off the junior plane")
        elif not ctx.is_lattice_point(p):
            out.append(f"ray {p} is not a lattice point")
    if len(fan.cones) != ctx.order:
        out.append(
            f"cone count {len(fan.cones)} differs from group order {ctx.order}"
        )
    for c in fan.cones:
        # Unimodular in the overlattice: pairing with the monomial basis
        # has determinant +-1.
        m = [
            [dot(row, p) // n for row in ctx.monomial_basis]
            for p in c.vertices
        ]
        for p, col in zip(c.vertices, m):
            for row, val in zip(ctx.monomial_basis, col):
                if dot(row, p) != val * n:
                    out.append(f"cone vertex {p} pairs fractionally")
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        if det not in (1, -1):
            out.append(f"cone {c.vertices} is not unimodular (det {det})")
    # Unit areas exhausting the simplex.
    total = 0
    for c in fan.cones:
        a, b, d = c.vertices
        try:
            total += abs(
                cross2(ctx.plane_coords(vsub(b, a)),
                       ctx.plane_coords(vsub(d, a)))
            )
        except InvariantError as exc:
            out.append(f"cone {c.vertices}: {exc}")
    covol = abs(
        cross2(
            ctx.plane_coords(vsub(ctx.corner(2), ctx.corner(1))),
            ctx.plane_coords(vsub(ctx.corner(3), ctx.corner(1))),
        )
    )
    if total != covol:
        out.append("cone areas do not exhaust the simplex")
    return out


@dataclass(frozen=True)
class SurfaceClass:
    """The compact exceptional surface at one interior vertex, read off
    from the cyclically ordered star.

    Around vertex v with neighbors u_0..u_{t-1} the integers b_t satisfy
    u_{t-1} + u_{t+1} = b_t * u_t - c_t * v with c_t = b_t - 2; the b_t are
    the negatives of the self-intersections of the curves of the star.
    """

    vertex: Vec3
    valency: int
    neighbors: tuple[Vec3, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]
    label: str


def vertex_stars(ctx: LatticeContext, fan: Fan) -> dict[Vec3, tuple[Vec3, ...]]:
    """Cyclically ordered neighbor lists of the interior vertices."""
    nbrs: dict[Vec3, set[Vec3]] = {}
    for e in fan.edges:
        a, b = tuple(e)
        nbrs.setdefault(a, set()).add(b)
        nbrs.setdefault(b, set()).add(a)
    out = {}
    for v in fan.rays:
        if 0 in v:
            continue  # boundary of the simplex

        def around(p, q):
            ca = chart(vsub(p, v))
            cb = chart(vsub(q, v))
            ha = (ca[1], -ca[0]) > (0, 0)
            hb = (cb[1], -cb[0]) > (0, 0)
            if ha != hb:
                return -1 if ha else 1
            c = cross2(ca, cb)
            return 0 if c == 0 else (-1 if c > 0 else 1)

        out[v] = tuple(sorted(nbrs[v], key=cmp_to_key(around)))
    return out


def surface_census(ctx: LatticeContext, fan: Fan,
                   part: Partition) -> list[SurfaceClass]:
    """Classify the surface at every interior vertex of the fan."""
    out = []
    for v, star in sorted(vertex_stars(ctx, fan).items()):
        t = len(star)
        if not 3 <= t <= 6:
            raise InvariantError(f"vertex {v} has valency {t}")
        bs = []
        for idx in range(t):
            lhs = vadd(
                vsub(star[(idx - 1) % t], v), vsub(star[(idx + 1) % t], v)
            )
            mid = vsub(star[idx], v)
            b = _exact_multiple(ctx, lhs, mid)
            bs.append(b)
        cs = tuple(b - 2 for b in bs)
        label = _surface_label(ctx, part, v, t, bs)
        out.append(SurfaceClass(v, t, star, tuple(bs), cs, label))
    return out


def _exact_multiple(ctx: LatticeContext, lhs: Vec3, mid: Vec3) -> int:
    a = ctx.plane_coords(lhs)
    m = ctx.plane_coords(mid)
    if cross2(a, m) != 0:
        raise InvariantError("star relation is not parallel")
    for t in range(2):
        if m[t]:
            if a[t] % m[t]:
                raise InvariantError("star relation is fractional")
            return a[t] // m[t]
    raise InvariantError("zero star direction")


def _interior_to_some_tesselation(ctx: LatticeContext, part: Partition,
                                  v: Vec3) -> bool:
    for tri in part.triangles:
        try:
            a, b, c = barycentric_steps(ctx, tri, v)
        except InvariantError:
            continue
        if a > 0 and b > 0 and c > 0:
            return True
    return False


def _surface_label(ctx, part, v, valency, bs) -> str:
    if valency == 3:
        if bs != [-1, -1, -1]:
            raise InvariantError(f"valency-3 star at {v} is not a plane")
        return "P2"
    if valency == 4:
        n = max(abs(b) for b in bs)
        if sorted(bs) != sorted([0, n, 0, -n]):
            raise InvariantError(f"valency-4 star at {v} is not a scroll: {bs}")
        return f"F{n}"
    if valency == 5:
        return "scroll-blowup-1"
    if _interior_to_some_tesselation(ctx, part, v):
        if bs != [1] * 6:
            raise InvariantError(
                f"tesselation-interior vertex {v} without hexagonal star"
            )
        return "dP6"
    return "scroll-blowup-2"


def dp6_count(part: Partition) -> int:
    """Count interior tesselation points by the binomial formula; must
    agree with the census labels."""
    return sum(comb(tri.r - 1, 2) for tri in part.triangles)

"""Invariant monomial ratios attached to lines and triangles, dual bases of
basic triangles, and the exponent form of the knock-out rule.

A ratio is stored as a signed Laurent exponent triple: positive entries
make the numerator, negative entries the denominator.  Every emitted ratio
is invariant under the group and primitive in the invariant lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd

from .errors import InvariantError
from .fan import BasicTriangle, barycentric_steps
from .lattice import (
    LatticeContext,
    Vec3,
    dot,
    smul,
    vadd,
    vneg,
    vsub,
)
from .partition import Line, RegularTriangle

_PERMS = tuple(sorted(permutations(range(3))))


def _cross3(u: Vec3, v: Vec3) -> Vec3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _content(v: Vec3) -> int:
    return gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2]))


def primitive_in_monomial_lattice(ctx: LatticeContext, m: Vec3) -> Vec3:
    """Scale m to the primitive invariant exponent vector on its ray."""
    if m == (0, 0, 0):
        raise InvariantError("zero exponent vector")
    g = _content(m)
    base = (m[0] // g, m[1] // g, m[2] // g)
    # The primitive invariant multiple divides the group order.
    for k in range(1, ctx.order + 1):
        if ctx.order % k:
            continue
        cand = smul(k, base)
        if ctx.is_invariant_monomial(cand):
            return cand
    raise InvariantError("no invariant multiple up to the group order")


def line_ratio(ctx: LatticeContext, line: Line, positive_side: Vec3) -> Vec3:
    """Primitive invariant generator of the exponents vanishing on the
    line, signed to evaluate positively on positive_side."""
    raw = _cross3(line.anchor, vadd(line.anchor, line.direction))
    if raw == (0, 0, 0):
        raise InvariantError("line data is degenerate")
    m = primitive_in_monomial_lattice(ctx, raw)
    val = dot(m, positive_side)
    if val == 0:
        raise InvariantError("positive_side is parallel to the line")
    return m if val > 0 else vneg(m)


def parallel_ratio(base: Vec3, i: int) -> Vec3:
    """Ratio of the i-th parallel lattice line on the base's positive side.

    A point P there has base.P = i*n, so the shifted exponents
    base - i*(1,1,1) vanish on it; successive tesselation lines of a
    triangle arise this way.
    """
    return vsub(base, (i, i, i))


def _permute(perm, v: Vec3) -> Vec3:
    return (v[perm[0]], v[perm[1]], v[perm[2]])


def _unpermute(perm, v: Vec3) -> Vec3:
    out = [0, 0, 0]
    for t in range(3):
        out[perm[t]] = v[t]
    return tuple(out)


@dataclass(frozen=True)
class TriangleRatios:
    """The three side ratios of a regular triangle in normal form.

    case "a" is the corner-style orientation, case "b" the cyclic
    (champion-style) one.  perm maps normal-form coordinates to the
    original ones; roles[t] is the side index (opposite-vertex index in
    the triangle) playing the role t of (0 = x-like, 1 = y-like,
    2 = z-like).  The integers satisfy, with r the triangle side,
    d - a = e - b - c = f = r   (case a)
    d - a = e - b = f - c = r   (case b)
    and the side directions are the normal-form triples divided by the
    common constant K.
    """

    case: str
    perm: tuple[int, int, int]
    roles: tuple[int, int, int]
    ratios: tuple[Vec3, Vec3, Vec3]  # original coordinates, role order
    a: int
    b: int
    c: int
    d: int
    e: int
    f: int
    r: int
    K: int


def _side_ratios(ctx: LatticeContext, tri: RegularTriangle) -> list[Vec3]:
    """Ratio of each side, positive on the triangle, indexed like vertices."""
    out = []
    for t in range(3):
        p, q = tri.side_of(t)
        raw = _cross3(p, q)
        m = primitive_in_monomial_lattice(ctx, raw)
        val = dot(m, tri.vertices[t])
        if val == 0:
            raise InvariantError("side ratio vanishes on the opposite vertex")
        out.append(m if val > 0 else vneg(m))
    return out


def _match_case(ctx, tri, side_ratios, perm, case):
    """Try to read the permuted side ratios in the given normal form."""
    permuted = [_permute(perm, m) for m in side_ratios]
    roles = [None, None, None]
    for t, m in enumerate(permuted):
        pos = [u for u in range(3) if m[u] > 0]
        if len(pos) != 1:
            return None
        if roles[pos[0]] is not None:
            return None
        roles[pos[0]] = t
    xi, eta, zeta = (permuted[roles[0]], permuted[roles[1]], permuted[roles[2]])
    if case == "a":
        if xi[2] or eta[2] or zeta[0]:
            return None
        d, b = xi[0], -xi[1]
        a, e = -eta[0], eta[1]
        c, f = -zeta[1], zeta[2]
    else:
        if xi[2] or eta[0] or zeta[1]:
            return None
        d, b = xi[0], -xi[1]
        e, c = eta[1], -eta[2]
        a, f = -zeta[0], zeta[2]
    if min(a, b, c, d, e, f) < 0:
        return None
    r = tri.r
    if case == "a":
        if not (d - a == e - b - c == f == r):
            return None
        raws = [(b, d, -(b + d)), (e, a, -(a + e)), (c + f, -f, -c)]
    else:
        if not (d - a == e - b == f - c == r):
            return None
        raws = [(b, d, -(b + d)), (-(c + e), c, e), (f, -(a + f), a)]
    # The proportionality constants tying the side directions to the
    # normal-form triples must be integral and all equal.
    ks = []
    for role in range(3):
        v = _permute(perm, tri.side_directions[roles[role]])
        k = _positive_multiple(raws[role], v)
        if k is None:
            return None
        ks.append(k)
    if len(set(ks)) != 1:
        return None
    K = ks[0]
    # Side directions are scaled by n, so the unscaled proportionality
    # constant de-ab (= the other two minor sums) equals K*n.
    if case == "a" and not (
        K * ctx.n == d * e - a * b == a * c + a * f + e * f
        == b * f + c * d + d * f
    ):
        return None
    return TriangleRatios(
        case=case,
        perm=perm,
        roles=tuple(roles),
        ratios=tuple(side_ratios[roles[t]] for t in range(3)),
        a=a, b=b, c=c, d=d, e=e, f=f, r=r, K=K,
    )


def _positive_multiple(target: Vec3, v: Vec3) -> int | None:
    """k > 0 with target = k*v or target = -k*v, else None."""
    for sign in (1, -1):
        w = smul(sign, v)
        for t in range(3):
            if w[t]:
                k, rem = divmod(target[t], w[t])
                break
        if rem == 0 and k > 0 and smul(k, w) == target:
            return k
    return None


def triangle_ratios(ctx: LatticeContext, tri: RegularTriangle) -> TriangleRatios:
    """Normal form of the triangle's invariant side ratios.

    Searches the six coordinate permutations, corner case first; ties are
    canonicalized to the corner case with the smallest permutation.
    """
    side_ratios = _side_ratios(ctx, tri)
    for case in ("a", "b"):
        for perm in _PERMS:
            res = _match_case(ctx, tri, side_ratios, perm, case)
            if res is not None:
                return res
    raise InvariantError(
        f"triangle {tri.vertices} fits neither ratio normal form"
    )


@dataclass(frozen=True)
class DualBasis:
    """Monomial basis dual to a basic triangle's cone, with monomials[t]
    pairing to n exactly on vertices[t] of the cell."""

    cell: BasicTriangle
    monomials: tuple[Vec3, Vec3, Vec3]
    steps: tuple[int, int, int]  # role-aligned tesselation depths


def _direct_dual(ctx: LatticeContext, cell: BasicTriangle) -> list[Vec3]:
    p = cell.vertices
    det = (
        p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1])
        - p[1][0] * (p[0][1] * p[2][2] - p[0][2] * p[2][1])
        + p[2][0] * (p[0][1] * p[1][2] - p[0][2] * p[1][1])
    )
    if det == 0:
        raise InvariantError("degenerate cone")
    rows = []
    for s in range(3):
        u, w = p[(s + 1) % 3], p[(s + 2) % 3]
        cof = _cross3(u, w)
        row = tuple(Fraction(ctx.n * c, det) for c in cof)
        if not all(f.denominator == 1 for f in row):
            raise InvariantError("dual basis is not integral")
        rows.append(tuple(int(f) for f in row))
    return rows


def formula_dual(ctx: LatticeContext, parent: TriangleRatios,
                 cell: BasicTriangle,
                 steps: tuple[int, int, int]) -> list[Vec3]:
    """Closed-form dual basis from the parent normal form and the cell's
    role-aligned depths (i, j, k)."""
    i, j, k = steps
    a, b, c, d, e, f = parent.a, parent.b, parent.c, parent.d, parent.e, parent.f
    if parent.case == "a":
        up = [
            (d - i, -(b + i), -i),
            (-(a + j), e - j, -j),
            (-k, -(c + k), f - k),
        ]
    else:
        up = [
            (d - i, -(b + i), -i),
            (-j, e - j, -(c + j)),
            (-(a + k), -k, f - k),
        ]
    if cell.kind == "down":
        up = [vneg(m) for m in up]
    return [_unpermute(parent.perm, m) for m in up]


def cell_steps(ctx: LatticeContext, tri: RegularTriangle,
               parent: TriangleRatios, cell: BasicTriangle) -> tuple[int, int, int]:
    """Role-aligned inward depths of a cell: component t counts lattice
    steps from the side playing role t (plus one for down cells)."""
    shift = 1 if cell.kind == "down" else 0
    out = []
    for role in range(3):
        side_idx = parent.roles[role]
        depth = min(
            barycentric_steps(ctx, tri, v)[side_idx] for v in cell.vertices
        )
        out.append(depth + shift)
    total = sum(out)
    want = tri.r - 1 if cell.kind == "up" else tri.r + 1
    if total != want:
        raise InvariantError("cell depths do not sum to the expected value")
    return tuple(out)


def dual_basis(ctx: LatticeContext, tri: RegularTriangle,
               parent: TriangleRatios, cell: BasicTriangle) -> DualBasis:
    """Dual basis of a basic triangle, computed by exact linear solve and
    by the closed formulas; a disagreement is a hard error."""
    direct = _direct_dual(ctx, cell)
    steps = cell_steps(ctx, tri, parent, cell)
    formula = formula_dual(ctx, parent, cell, steps)
    if sorted(direct) != sorted(formula):
        raise InvariantError(
            f"dual bases disagree on cell {cell.vertices}: "
            f"solve {sorted(direct)} vs formulas {sorted(formula)}"
        )
    for m in direct:
        if not ctx.is_invariant_monomial(m):
            raise InvariantError("dual basis vector is not invariant")
    # Pairing with the cone is the identity by construction of the solve.
    n = ctx.n
    for s, m in enumerate(direct):
        for t, p in enumerate(cell.vertices):
            if dot(m, p) != (n if s == t else 0):
                raise InvariantError("dual pairing is not the identity")
    total = vadd(vadd(direct[0], direct[1]), direct[2])
    if total != (1, 1, 1):
        raise InvariantError("dual basis does not multiply to xyz")
    return DualBasis(cell, tuple(direct), steps)


def crossing_rule_check(ctx: LatticeContext, l1: Line, l2: Line) -> tuple | None:
    """Which of two crossing interior lines continues past the meet, read
    off from the invariant ratios: after relabeling the pair of corners
    to (e1, e3), the line with the strictly smaller exponent of the third
    coordinate continues; equal exponents kill both."""
    if l1.tag[0] != "corner" or l2.tag[0] != "corner":
        raise InvariantError("the exponent rule applies to interior lines")
    i, k = l1.tag[1], l2.tag[1]
    if i == k:
        raise InvariantError("lines from one corner never cross inside")
    by_corner = {i: l1, k: l2}
    # The corner that cyclically follows the other plays e1.
    first = k if i % 3 + 1 == k else i
    last = i + k - first  # plays e3
    shared = next(t for t in range(3) if t not in (first - 1, last - 1))

    def normalized(line):
        own = line.tag[1] - 1
        pos_coord = (own + 2) % 3  # coordinate of the preceding corner
        raw = _cross3(line.anchor, vadd(line.anchor, line.direction))
        m = primitive_in_monomial_lattice(ctx, raw)
        if m[pos_coord] == 0 or m[own] != 0:
            raise InvariantError("ratio normalization failed")
        return m if m[pos_coord] > 0 else vneg(m)

    m_first = normalized(by_corner[first])
    m_last = normalized(by_corner[last])
    c = -m_first[shared]
    e = m_last[shared]
    if c < 1 or e < 1:
        raise InvariantError("interior line ratio has a non-positive exponent")
    if c < e:
        return by_corner[first].tag
    if e < c:
        return by_corner[last].tag
    return None


def ratio_str(m: Vec3, names: str = "xyz") -> str:
    """Render an exponent triple as a ratio like x^2:y."""
    num = "".join(
        f"{names[t]}" + (f"^{m[t]}" if m[t] > 1 else "")
        for t in range(3) if m[t] > 0
    )
    den = "".join(
        f"{names[t]}" + (f"^{-m[t]}" if m[t] < -1 else "")
        for t in range(3) if m[t] < 0
    )
    if not num:
        num = "1"
    return f"{num}:{den}" if den else num

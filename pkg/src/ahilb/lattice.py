"""Group specifications, the overlattice of the junior plane, and the dual
lattice of invariant monomials.

All geometry is exact.  A point of the junior plane is stored as an integer
triple summing to the denominator ``n``; a translation vector is an integer
triple summing to zero.  A triple ``q`` belongs to the overlattice exactly
when ``q mod n`` is one of the group residues.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import GroupSpecError, InvariantError

Vec3 = tuple[int, int, int]

DEFAULT_ORDER_CAP = 10**6

_TERM_RE = re.compile(r"1/(\d+)\(([+-]?\d+),([+-]?\d+),([+-]?\d+)\)")


def vadd(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def vsub(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def vneg(u: Vec3) -> Vec3:
    return (-u[0], -u[1], -u[2])


def smul(k: int, u: Vec3) -> Vec3:
    return (k * u[0], k * u[1], k * u[2])


def dot(u: Vec3, v: Vec3) -> int:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def chart(v: Vec3) -> tuple[int, int]:
    """Linear chart of the plane x+y+z = const: drop the first coordinate."""
    return (v[1], v[2])


def cross2(a: tuple[int, int], b: tuple[int, int]) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _divisors_desc(k: int) -> list[int]:
    divs = set()
    d = 1
    while d * d <= k:
        if k % d == 0:
            divs.add(d)
            divs.add(k // d)
        d += 1
    return sorted(divs, reverse=True)


@dataclass(frozen=True)
class Generator:
    """One cyclic factor 1/r(a1,a2,a3) with weights reduced mod r."""

    order: int
    weights: Vec3

    def text(self) -> str:
        a1, a2, a3 = self.weights
        return f"1/{self.order}({a1},{a2},{a3})"


@dataclass(frozen=True)
class GroupSpec:
    generators: tuple[Generator, ...]
    canonical_text: str


def parse_group_spec(text: str) -> GroupSpec:
    """Parse ``1/r(a,b,c)`` terms joined by ``+`` into a GroupSpec.

    Whitespace is ignored; negative weights are reduced mod r.  Raises
    GroupSpecError on malformed input or when a term's weights do not sum
    to 0 mod r (so that the generator would land outside SL(3,C)).
    """
    squashed = re.sub(r"\s+", "", text)
    if not squashed:
        raise GroupSpecError("empty group specification")
    gens = []
    for term in squashed.split("+"):
        m = _TERM_RE.fullmatch(term)
        if m is None:
            raise GroupSpecError(f"cannot parse term {term!r}")
        r = int(m.group(1))
        if r < 1:
            raise GroupSpecError(f"order must be >= 1 in term {term!r}")
        raw = (int(m.group(2)), int(m.group(3)), int(m.group(4)))
        if sum(raw) % r != 0:
            raise GroupSpecError(
                f"weights of {term!r} sum to {sum(raw)} which is not 0 mod {r}"
            )
        gens.append(Generator(r, tuple(a % r for a in raw)))
    canonical = "+".join(g.text() for g in gens)
    return GroupSpec(tuple(gens), canonical)


@dataclass(frozen=True)
class LatticeContext:
    """The lattice data attached to one group.

    n            -- denominator: the exponent of the group.
    order        -- |A|, also the index of Z^3 in the overlattice.
    generators   -- generator residues scaled to denominator n.
    element_table -- all group residues, scaled to denominator n.
    monomial_basis -- three rows generating the invariant-monomial lattice.
    trans_basis  -- a basis of the translation lattice of the junior plane.
    """

    spec: GroupSpec
    n: int
    order: int
    generators: tuple[Vec3, ...]
    element_table: frozenset[Vec3]
    monomial_basis: tuple[Vec3, Vec3, Vec3]
    trans_basis: tuple[Vec3, Vec3]

    @property
    def corners(self) -> tuple[Vec3, Vec3, Vec3]:
        """The three simplex vertices, scaled by n."""
        n = self.n
        return ((n, 0, 0), (0, n, 0), (0, 0, n))

    def corner(self, i: int) -> Vec3:
        """Vertex e_i for i in 1..3."""
        return self.corners[i - 1]

    def residue(self, q: Vec3) -> Vec3:
        n = self.n
        return (q[0] % n, q[1] % n, q[2] % n)

    def is_lattice_point(self, q: Vec3) -> bool:
        """Is q (scaled by n) a point of the junior-plane affine lattice?"""
        return sum(q) == self.n and self.residue(q) in self.element_table

    def is_translation(self, v: Vec3) -> bool:
        """Is v (scaled by n) a translation of the junior-plane lattice?"""
        return sum(v) == 0 and self.residue(v) in self.element_table

    def is_invariant_monomial(self, m: Vec3) -> bool:
        """Does the Laurent exponent m pair integrally with every group
        element?"""
        return all(dot(m, g) % self.n == 0 for g in self.generators)

    def plane_coords(self, v: Vec3) -> tuple[int, int]:
        """Coordinates of a translation vector in trans_basis.  Exact; raises
        InvariantError if v is not in the translation lattice."""
        b1, b2 = self.trans_basis
        d = cross2(chart(b1), chart(b2))
        x_num = cross2(chart(v), chart(b2))
        y_num = cross2(chart(b1), chart(v))
        if x_num % d or y_num % d:
            raise InvariantError(f"{v} is not in the translation lattice")
        x, y = x_num // d, y_num // d
        if vadd(smul(x, b1), smul(y, b2)) != v:
            raise InvariantError(f"{v} is not in the translation lattice")
        return (x, y)


def _hnf_rows(rows: list[Vec3]) -> list[Vec3]:
    """Hermite-style row normal form of the lattice spanned by the rows.

    Returns a lower-triangular basis with positive diagonal and the
    below-diagonal entries reduced into [0, diag).  Requires full rank 3.
    """
    mat = [list(r) for r in rows]
    basis: list[list[int]] = []
    for col in range(3):
        # Euclid on the working rows to isolate a pivot in this column.
        while True:
            live = [r for r in mat if any(r[col:])]
            nonzero = [r for r in live if r[col] != 0]
            if not nonzero:
                break
            piv = min(nonzero, key=lambda r: abs(r[col]))
            done = True
            for r in nonzero:
                if r is piv:
                    continue
                q = r[col] // piv[col]
                for t in range(3):
                    r[t] -= q * piv[t]
                if r[col] != 0:
                    done = False
            if done:
                if piv[col] < 0:
                    for t in range(3):
                        piv[t] = -piv[t]
                basis.append(piv)
                mat = [r for r in mat if r is not piv]
                break
    if len(basis) != 3:
        raise InvariantError("lattice basis computation lost rank")
    # Order by pivot column, then reduce below-diagonal entries.
    basis.sort(key=lambda r: next(t for t in range(3) if r[t] != 0))
    for i in range(1, 3):
        for j in range(i):
            q = basis[i][j] // basis[j][j]
            for t in range(3):
                basis[i][t] -= q * basis[j][t]
    return [tuple(r) for r in basis]


def _det3(m: list[Vec3]) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _inverse3(m: list[Vec3]) -> list[list[Fraction]]:
    d = _det3(m)
    if d == 0:
        raise InvariantError("singular matrix")
    cof = [
        [
            (m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3]
             - m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3])
            for i in range(3)
        ]
        for j in range(3)
    ]
    return [[Fraction(cof[i][j], d) for j in range(3)] for i in range(3)]


def _kernel_of_functional(c: Vec3) -> tuple[Vec3, Vec3]:
    """Basis of the saturated integer kernel of x -> c.x (c nonzero)."""
    # Column-reduce c by a unimodular matrix tracked alongside.
    u = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    c = list(c)
    while True:
        nz = [t for t in range(3) if c[t] != 0]
        if len(nz) <= 1:
            break
        i = min(nz, key=lambda t: abs(c[t]))
        for t in nz:
            if t == i:
                continue
            q = c[t] // c[i]
            c[t] -= q * c[i]
            for row in range(3):
                u[row][t] -= q * u[row][i]
    nz = [t for t in range(3) if c[t] != 0]
    if not nz:
        raise InvariantError("zero functional has no rank-2 kernel")
    ker_cols = [t for t in range(3) if t not in nz]
    return tuple(tuple(u[row][t] for row in range(3)) for t in ker_cols)


def lattice_context(spec: GroupSpec, max_order: int = DEFAULT_ORDER_CAP) -> LatticeContext:
    """Materialize the group: exponent, element table, monomial lattice and a
    translation-lattice basis.

    Raises GroupSpecError when the group order exceeds max_order.
    """
    n0 = lcm(*(g.order for g in spec.generators)) if spec.generators else 1
    gens0 = [smul(n0 // g.order, g.weights) for g in spec.generators]
    table = {(0, 0, 0)}
    frontier = [(0, 0, 0)]
    while frontier:
        cur = frontier.pop()
        for g in gens0:
            nxt = tuple((c + w) % n0 for c, w in zip(cur, g))
            if nxt not in table:
                if len(table) >= max_order:
                    raise GroupSpecError(
                        f"group order exceeds the cap of {max_order}"
                    )
                table.add(nxt)
                frontier.append(nxt)
    order = len(table)

    # The denominator is the exponent of the group, which may be smaller
    # than the lcm of the written generator orders.
    n = 1
    for g in table:
        n = lcm(n, n0 // gcd(n0, gcd(g[0], gcd(g[1], g[2]))))
    if n != n0:
        k = n0 // n
        table = {(g[0] // k, g[1] // k, g[2] // k) for g in table}
        gens0 = [(g[0] // k, g[1] // k, g[2] // k) for g in gens0]

    # Row lattice n*L = <n*e_i> + <group residues>; its HNF feeds both the
    # dual (monomial) lattice and the translation-lattice basis.
    rows = [(n, 0, 0), (0, n, 0), (0, 0, n)] + sorted(table - {(0, 0, 0)})
    hnf = _hnf_rows(rows)
    det = abs(_det3(hnf))
    if det * order != n**3:
        raise InvariantError("overlattice index does not match group order")

    # Monomial lattice M = n * (H^T)^{-1}, rows canonicalized by HNF.
    ht = [tuple(hnf[r][c] for r in range(3)) for c in range(3)]
    inv = _inverse3(ht)
    mrows = []
    for i in range(3):
        row = [inv[i][j] * n for j in range(3)]
        if not all(f.denominator == 1 for f in row):
            raise InvariantError("monomial lattice basis is not integral")
        mrows.append(tuple(int(f) for f in row))
    mbasis = tuple(_hnf_rows(mrows))
    if abs(_det3(list(mbasis))) != order:
        raise InvariantError("monomial basis determinant is not the order")

    # Translation lattice: row combinations of hnf with zero coordinate sum.
    sums = tuple(sum(r) for r in hnf)
    k1, k2 = _kernel_of_functional(sums)
    tb = []
    for coeffs in (k1, k2):
        v = (0, 0, 0)
        for c, row in zip(coeffs, hnf):
            v = vadd(v, smul(c, row))
        tb.append(v)

    ctx = LatticeContext(
        spec=spec,
        n=n,
        order=order,
        generators=tuple(gens0) if gens0 else ((0, 0, 0),),
        element_table=frozenset(table),
        monomial_basis=mbasis,
        trans_basis=tuple(tb),
    )
    for m in mbasis:
        if not ctx.is_invariant_monomial(m):
            raise InvariantError("monomial basis row is not invariant")
    for v in tb:
        if not ctx.is_translation(v):
            raise InvariantError("translation basis vector is not in the lattice")
    return ctx


@dataclass(frozen=True)
class JuniorPoint:
    """A lattice point of the simplex, scaled by n, classified by position."""

    coords: Vec3
    kind: str  # "vertex" | "edge" | "interior"


def junior_points(ctx: LatticeContext) -> list[JuniorPoint]:
    """All lattice points of the junior simplex, sorted lexicographically."""
    pts = []
    n = ctx.n
    for i in range(3):
        v = [0, 0, 0]
        v[i] = n
        pts.append(JuniorPoint(tuple(v), "vertex"))
    for g in ctx.element_table:
        if sum(g) == n:
            kind = "edge" if 0 in g else "interior"
            pts.append(JuniorPoint(g, kind))
    pts.sort(key=lambda p: p.coords)
    return pts


def primitive_vector(ctx: LatticeContext, v: Vec3) -> Vec3:
    """v divided by the largest k such that v/k stays in the translation
    lattice."""
    if v == (0, 0, 0):
        raise InvariantError("zero vector has no primitive direction")
    if not ctx.is_translation(v):
        raise InvariantError(f"{v} is not a translation of the junior lattice")
    g = gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2]))
    for k in _divisors_desc(g):
        cand = (v[0] // k, v[1] // k, v[2] // k)
        if ctx.is_translation(cand):
            return cand
    raise InvariantError("unreachable: k = 1 always divides")


def lattice_length(ctx: LatticeContext, v: Vec3) -> int:
    """Number of primitive steps making up v."""
    p = primitive_vector(ctx, v)
    for t in range(3):
        if p[t]:
            return v[t] // p[t]
    raise InvariantError("zero vector has no length")


def pair_index(ctx: LatticeContext, v: Vec3, w: Vec3) -> int:
    """Index of the sublattice spanned by v, w inside the translation
    lattice; 0 when the vectors are parallel."""
    return abs(cross2(ctx.plane_coords(v), ctx.plane_coords(w)))

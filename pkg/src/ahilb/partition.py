"""Realizing regular triples inside the simplex and the partition into
regular triangles.

Two independent algorithms produce the partition: brute-force enumeration
over line triples (authoritative) and realization of the contraction-game
triples (mandatory cross-check).  A mismatch raises InvariantError: this is
the package's central differential test.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from math import gcd

from .corners import (
    CornerFan,
    CyclicWord,
    Tag,
    cyclic_word,
    junction_c,
    newton_polygon,
    side_corners,
)
from .errors import InvariantError
from .lattice import (
    LatticeContext,
    Vec3,
    chart,
    cross2,
    pair_index,
    primitive_vector,
    smul,
    vadd,
    vsub,
)
from .mmp import RegularTriple, run_mmp, triple_set, validate_triple

RatPoint = tuple[Vec3, int]  # numerator triple over a positive denominator


@dataclass(frozen=True)
class Line:
    """A ray of the subdivision: out of a corner for interior lines, or a
    side of the simplex.  defeat_point is filled after the partition."""

    tag: Tag
    anchor: Vec3
    direction: Vec3  # primitive
    strength: int
    defeat_point: Vec3 | None = None


def rays(ctx: LatticeContext,
         fans: dict[int, CornerFan] | None = None) -> dict[Tag, Line]:
    """One line per interior corner ray plus the three sides."""
    if fans is None:
        fans = {i: newton_polygon(ctx, i) for i in (1, 2, 3)}
    lines: dict[Tag, Line] = {}
    for i in (1, 2, 3):
        fan = fans[i]
        for j in range(1, fan.k + 1):
            tag = ("corner", i, j)
            lines[tag] = Line(tag, ctx.corner(i), fan.vectors[j],
                              fan.strengths[j - 1])
    for s in (1, 2, 3):
        i, ip1 = side_corners(s)
        c, _ = junction_c(ctx, s, fans)
        tag = ("junction", s)
        d = primitive_vector(ctx, vsub(ctx.corner(ip1), ctx.corner(i)))
        lines[tag] = Line(tag, ctx.corner(i), d, c)
    return lines


def meet(l1: Line, l2: Line) -> RatPoint | None:
    """Exact intersection point of two lines, or None when parallel.

    Returned as (numerator, denominator) with denominator > 0 and the
    fraction reduced.
    """
    d = cross2(chart(l1.direction), chart(l2.direction))
    if d == 0:
        return None
    t = cross2(chart(vsub(l2.anchor, l1.anchor)), chart(l2.direction))
    num = vadd(smul(d, l1.anchor), smul(t, l1.direction))
    if d < 0:
        num, d = (-num[0], -num[1], -num[2]), -d
    g = gcd(gcd(gcd(abs(num[0]), abs(num[1])), abs(num[2])), d)
    return ((num[0] // g, num[1] // g, num[2] // g), d // g)


def _lattice_point_of(ctx: LatticeContext, p: RatPoint) -> Vec3 | None:
    num, den = p
    if den != 1 or not ctx.is_lattice_point(num):
        return None
    return num


def _inside_simplex(p: RatPoint) -> bool:
    return all(c >= 0 for c in p[0])


def _step_count(ctx: LatticeContext, frm: Vec3, to: Vec3, direction: Vec3) -> int:
    """Number of primitive steps of `direction` from frm to to (signed)."""
    v = vsub(to, frm)
    for t in range(3):
        if direction[t]:
            k, rem = divmod(v[t], direction[t])
            if rem or smul(k, direction) != v:
                raise InvariantError("points are not joined by the direction")
            return k
    raise InvariantError("zero direction")


@dataclass(frozen=True)
class RegularTriangle:
    """A lattice triangle whose sides ride on subdivision lines and whose
    primitive side directions form a regular triple.

    vertices[t] is the vertex opposite side_lines[t]; side_directions[t]
    points along that side.  Equivalent to the side-r standard triangle.
    """

    vertices: tuple[Vec3, Vec3, Vec3]
    r: int
    side_lines: tuple[Tag, Tag, Tag]
    side_directions: tuple[Vec3, Vec3, Vec3]
    case_tag: str | None = None

    def key(self) -> tuple[Vec3, Vec3, Vec3]:
        return tuple(sorted(self.vertices))

    def side_of(self, t: int) -> tuple[Vec3, Vec3]:
        """Endpoints of the side opposite vertex t."""
        others = [self.vertices[u] for u in range(3) if u != t]
        return (others[0], others[1])


@dataclass(frozen=True)
class ConcurrencyPoint:
    """Degenerate realization of the champion triple: the three host lines
    meet in one lattice point and the 'triangle' has side zero."""

    point: Vec3
    tags: tuple[Tag, Tag, Tag]


def _triangle_from_lines(ctx: LatticeContext,
                         lines: tuple[Line, Line, Line]) -> RegularTriangle | None:
    """The regular triangle cut out by three lines, if there is one."""
    pts = []
    for a, b in ((1, 2), (0, 2), (0, 1)):
        p = meet(lines[a], lines[b])
        if p is None or not _inside_simplex(p):
            return None
        q = _lattice_point_of(ctx, p)
        if q is None:
            return None
        pts.append(q)
    if len({tuple(p) for p in pts}) != 3:
        return None
    dirs = []
    lens = []
    for t in range(3):
        a, b = [pts[u] for u in range(3) if u != t]
        v = vsub(b, a)
        d = primitive_vector(ctx, v)
        dirs.append(d)
        lens.append(_step_count(ctx, a, b, d))
    lens = [abs(x) for x in lens]
    if lens[0] != lens[1] or lens[1] != lens[2] or lens[0] < 1:
        return None
    for a, b in combinations(range(3), 2):
        if pair_index(ctx, dirs[a], dirs[b]) != 1:
            return None
    return RegularTriangle(
        vertices=tuple(pts),
        r=lens[0],
        side_lines=tuple(l.tag for l in lines),
        side_directions=tuple(dirs),
    )


def enumerate_triangles(ctx: LatticeContext,
                        lines: dict[Tag, Line] | None = None) -> list[RegularTriangle]:
    """Brute force over all line triples; the regular triangles tile the
    simplex, so collecting every one of them yields the partition."""
    if lines is None:
        lines = rays(ctx)
    ordered = [lines[t] for t in sorted(lines)]
    found: dict[tuple, RegularTriangle] = {}
    for trio in combinations(ordered, 3):
        tri = _triangle_from_lines(ctx, trio)
        if tri is None:
            continue
        if tri.key() in found:
            raise InvariantError("two line triples cut out the same triangle")
        found[tri.key()] = tri
    return [found[k] for k in sorted(found)]


def realize_triple(ctx: LatticeContext, lines: dict[Tag, Line],
                   triple: RegularTriple) -> RegularTriangle | ConcurrencyPoint:
    """Intersect the triple's three host lines pairwise."""
    host = tuple(lines[t] for t in triple.tags)
    pts = [meet(host[a], host[b]) for a, b in ((1, 2), (0, 2), (0, 1))]
    if any(p is None for p in pts):
        raise InvariantError("host lines of a regular triple are parallel")
    if pts[0] == pts[1] == pts[2]:
        q = _lattice_point_of(ctx, pts[0])
        if q is None:
            raise InvariantError("concurrency point is not a lattice point")
        if triple.type_tag != "champion":
            raise InvariantError("only the champion triple may degenerate")
        return ConcurrencyPoint(q, triple.tags)
    tri = _triangle_from_lines(ctx, host)
    if tri is None:
        raise InvariantError(
            f"triple with tags {triple.tags} does not cut out a regular triangle"
        )
    return tri


@dataclass(frozen=True)
class ChampionsReport:
    """Outcome of the knock-out game: either a long side exists, or the
    unique champion triple meets in a point or cuts out a central triangle."""

    kind: str  # "long_side" | "concurrent" | "cocked_hat" | "simplex"
    side: int | None = None
    c: int | None = None
    point: Vec3 | None = None
    triangle_key: tuple | None = None


@dataclass(frozen=True)
class Partition:
    triangles: tuple[RegularTriangle, ...]
    long_side: tuple[int, int] | None
    champions: ChampionsReport
    catchment: dict[int, tuple[int, ...]]  # side -> triangle indexes
    lines: dict[Tag, Line]
    word: CyclicWord
    fans: dict[int, CornerFan]
    concurrency: ConcurrencyPoint | None

    def triangle_index(self, key: tuple) -> int:
        for t, tri in enumerate(self.triangles):
            if tri.key() == key:
                return t
        raise InvariantError("triangle key not in partition")


def _protected_run(word: CyclicWord, side: int) -> tuple[CyclicWord, list[RegularTriple]]:
    """Eat triangles along one side: contract any 1 except the other two
    junction entries, until none is available."""
    from .mmp import contract

    protected = {("junction", s) for s in (1, 2, 3) if s != side}
    cur = word
    out = []
    while len(cur) > 3:
        pos = next(
            (t for t, e in enumerate(cur.entries)
             if e.value == 1 and e.tag not in protected),
            None,
        )
        if pos is None:
            break
        cur, triple = contract(cur, pos)
        out.append(triple)
    return cur, out


def _triangle_area2(ctx: LatticeContext, tri: RegularTriangle) -> int:
    a, b, c = tri.vertices
    return abs(cross2(ctx.plane_coords(vsub(b, a)), ctx.plane_coords(vsub(c, a))))


def _interiors_disjoint(tri_a: RegularTriangle, tri_b: RegularTriangle) -> bool:
    """Exact separating-line test on two lattice triangles."""
    for tri1, tri2 in ((tri_a, tri_b), (tri_b, tri_a)):
        pts = tri1.vertices
        for t in range(3):
            p, q = chart(pts[t]), chart(pts[(t + 1) % 3])
            third = chart(pts[(t + 2) % 3])
            s_in = cross2((q[0] - p[0], q[1] - p[1]),
                          (third[0] - p[0], third[1] - p[1]))
            edge = (q[0] - p[0], q[1] - p[1])
            sides = [
                cross2(edge, (chart(v)[0] - p[0], chart(v)[1] - p[1]))
                for v in tri2.vertices
            ]
            if s_in > 0 and all(s <= 0 for s in sides):
                return True
            if s_in < 0 and all(s >= 0 for s in sides):
                return True
    return False


def build_partition(ctx: LatticeContext) -> Partition:
    """Enumerate the partition, cross-check it against the contraction game,
    validate coverage, and fill catchment areas and champions."""
    fans = {i: newton_polygon(ctx, i) for i in (1, 2, 3)}
    word = cyclic_word(ctx, fans)
    lines = rays(ctx, fans)

    enumerated = enumerate_triangles(ctx, lines)
    by_key = {tri.key(): tri for tri in enumerated}

    trace = run_mmp(word)
    triples = triple_set(trace)
    for tr in triples.values():
        validate_triple(ctx, tr)
    realized_keys = set()
    concurrency = None
    for tr in triples.values():
        res = realize_triple(ctx, lines, tr)
        if isinstance(res, ConcurrencyPoint):
            if concurrency is not None:
                raise InvariantError("two degenerate triples in one group")
            concurrency = res
        else:
            if res.key() in realized_keys:
                raise InvariantError("two triples realize the same triangle")
            realized_keys.add(res.key())
    if realized_keys != set(by_key):
        raise InvariantError(
            "partition mismatch: enumeration found "
            f"{sorted(by_key)} but the contraction game realizes "
            f"{sorted(realized_keys)}"
        )

    # Coverage: disjoint interiors and total area equal to the group order.
    area2 = sum(_triangle_area2(ctx, tri) for tri in enumerated)
    covol = abs(cross2(ctx.plane_coords(vsub(ctx.corner(2), ctx.corner(1))),
                       ctx.plane_coords(vsub(ctx.corner(3), ctx.corner(1)))))
    if area2 != covol or sum(t.r * t.r for t in enumerated) != ctx.order:
        raise InvariantError("triangle areas do not exhaust the simplex")
    for ta, tb in combinations(enumerated, 2):
        if not _interiors_disjoint(ta, tb):
            raise InvariantError("triangle interiors overlap")

    # Champions.
    longs = [(s, junction_c(ctx, s, fans)[0]) for s in (1, 2, 3)]
    longs = [(s, c) for s, c in longs if c >= 2]
    if len(longs) > 1:
        raise InvariantError("more than one long side")
    long_side = longs[0] if longs else None
    champs2 = [t for t in triples.values() if t.type_tag == "champion"]
    if long_side is not None:
        if champs2:
            raise InvariantError("champion triple found despite a long side")
        champions = ChampionsReport("long_side", side=long_side[0], c=long_side[1])
        champion_key = None
    elif not champs2 and len(word) == 3:
        # The whole simplex is one regular triangle (empty corner fans);
        # no knock-out happens and no champion triple exists.
        champion_key = enumerated[0].key()
        champions = ChampionsReport("simplex", triangle_key=champion_key)
    else:
        if len(champs2) != 1:
            raise InvariantError(
                f"expected a unique champion triple, found {len(champs2)}"
            )
        res = realize_triple(ctx, lines, champs2[0])
        if isinstance(res, ConcurrencyPoint):
            champions = ChampionsReport("concurrent", point=res.point)
            champion_key = None
        else:
            champions = ChampionsReport("cocked_hat", triangle_key=res.key())
            champion_key = res.key()

    # Catchment areas: eat each side on a fresh word (the other junctions
    # fence the front in).  A triangle reachable from two sides -- the
    # middle of a semiregular strip -- goes to the smaller side index.
    order = sorted(by_key)
    index_of = {k: t for t, k in enumerate(order)}
    initial_c = {
        s: next(e.value for e in word.entries if e.tag == ("junction", s))
        for s in (1, 2, 3)
    }
    eaten_from: dict[tuple, int] = {}
    for s in (1, 2, 3):
        if initial_c[s] != 1:
            continue
        _, eaten = _protected_run(word, s)
        for tr in eaten:
            res = realize_triple(ctx, lines, tr)
            if isinstance(res, ConcurrencyPoint):
                raise InvariantError("side run realized a degenerate triple")
            eaten_from.setdefault(res.key(), s)
    catchment = {
        s: tuple(sorted(index_of[k] for k, owner in eaten_from.items()
                        if owner == s))
        for s in (1, 2, 3)
    }
    seen = set(eaten_from)
    unassigned = set(by_key) - seen
    if champion_key is not None:
        if unassigned != {champion_key}:
            raise InvariantError("catchments must leave exactly the champion")
    elif unassigned:
        raise InvariantError(f"triangles outside every catchment: {unassigned}")

    triangles = tuple(by_key[k] for k in order)
    part = Partition(
        triangles=triangles,
        long_side=long_side,
        champions=champions,
        catchment=catchment,
        lines=lines,
        word=word,
        fans=fans,
        concurrency=concurrency,
    )
    return _fill_defeat_points(ctx, part)


def line_extent(ctx: LatticeContext, part: Partition, tag: Tag) -> int:
    """Primitive-step length of the line's realized extent from its corner.

    The union of triangle sides on the line must be one contiguous segment
    starting at the corner.
    """
    line = part.lines[tag]
    segs = set()
    for tri in part.triangles:
        for t in range(3):
            if tri.side_lines[t] != tag:
                continue
            a, b = tri.side_of(t)
            ta = _step_count(ctx, line.anchor, a, line.direction)
            tb = _step_count(ctx, line.anchor, b, line.direction)
            segs.add((min(ta, tb), max(ta, tb)))
    if not segs:
        if part.concurrency is not None and tag in part.concurrency.tags:
            return _step_count(ctx, line.anchor, part.concurrency.point,
                               line.direction)
        raise InvariantError(f"line {tag} hosts no triangle side")
    merged = sorted(segs)
    if merged[0][0] != 0:
        raise InvariantError(f"line {tag} extent does not start at its corner")
    far = merged[0][1]
    for lo, hi in merged[1:]:
        if lo > far:
            raise InvariantError(f"line {tag} extent has a gap")
        far = max(far, hi)
    return far


def _fill_defeat_points(ctx: LatticeContext, part: Partition) -> Partition:
    lines = dict(part.lines)
    for tag, line in lines.items():
        if tag[0] != "corner":
            continue
        far = line_extent(ctx, part, tag)
        end = vadd(line.anchor, smul(far, line.direction))
        lines[tag] = replace(line, defeat_point=end)
    return replace(part, lines=lines)


def champions(part: Partition) -> ChampionsReport:
    return part.champions


def knockout_report(ctx: LatticeContext, part: Partition) -> list[str]:
    """Check the knock-out rule at every interior crossing: the strongest
    arrival extends (strength dropping by one per defeated rival), ties all
    die.  Returns a list of violations (empty when consistent)."""
    inner = [l for t, l in sorted(part.lines.items()) if t[0] == "corner"]
    fars = {
        line.tag: _step_count(ctx, line.anchor, line.defeat_point, line.direction)
        for line in inner
    }

    # Reachable pairwise crossings, grouped by location.
    events: dict[RatPoint, set[Tag]] = {}
    for la, lb in combinations(inner, 2):
        if la.tag[1] == lb.tag[1]:
            continue
        x = meet(la, lb)
        if x is None or not all(c > 0 for c in x[0]):
            continue
        if all(0 <= _param_at(l, x) <= fars[l.tag] for l in (la, lb)):
            events.setdefault(x, set()).update((la.tag, lb.tag))

    violations = []
    for x, tags in sorted(events.items()):
        if x[1] != 1:
            violations.append(f"meet at non-lattice point {x}")
            continue
        arrivals = {}
        for tag in tags:
            line = part.lines[tag]
            strength = line.strength
            t_here = _param_at(line, x)
            for y, ytags in events.items():
                if tag not in ytags or _param_at(line, y) >= t_here:
                    continue
                strength -= sum(
                    1 for o in ytags
                    if o != tag and _param_at(part.lines[o], y) == fars[o]
                )
            arrivals[tag] = strength
        top = max(arrivals.values())
        winners = [t for t, s in arrivals.items() if s == top]
        for tag in tags:
            dies = _param_at(part.lines[tag], x) == fars[tag]
            should_die = len(winners) > 1 or tag not in winners
            if dies != should_die:
                violations.append(
                    f"line {tag} at {x[0]}: strengths {arrivals}, "
                    f"extent {'ends' if dies else 'continues'}"
                )
    # Every interior defeat point lies on the boundary or at a crossing.
    for line in inner:
        end = line.defeat_point
        if 0 in end:
            continue
        if not any(x[0] == end and line.tag in tags and x[1] == 1
                   for x, tags in events.items()):
            violations.append(f"line {line.tag} dies at {end} with no rival")
    return violations


def _param_at(line: Line, p: RatPoint) -> Fraction:
    """Exact parameter of p along the line (in primitive steps)."""
    num, den = p
    v = vsub(num, smul(den, line.anchor))
    for t in range(3):
        if line.direction[t]:
            val = Fraction(v[t], den * line.direction[t])
            break
    else:
        raise InvariantError("zero direction")
    for t in range(3):
        if Fraction(v[t]) != val * den * line.direction[t]:
            raise InvariantError("point is not on the line")
    return val


def is_semiregular(ctx: LatticeContext, vertices: tuple[Vec3, Vec3, Vec3],
                   preferred: int) -> tuple[int, int] | None:
    """Test equivalence to the triangle {(r,0),(0,0),(0,cr)} with the
    preferred vertex at (r,0); returns (r, c) or None.

    Diagnostic: with v1 along the side opposite the preferred vertex and
    v2, v3 following cyclically, v1 and v2 must base the translation
    lattice and c*v1 + v2 + v3 = 0.
    """
    a = vertices[preferred]
    b, c_pt = [vertices[t] for t in range(3) if t != preferred]
    if cross2(chart(vsub(b, a)), chart(vsub(c_pt, a))) == 0:
        raise InvariantError("degenerate triangle")
    for bb, cc in ((b, c_pt), (c_pt, b)):
        res = _semiregular_oriented(ctx, a, bb, cc)
        if res is not None:
            return res
    return None


def _semiregular_oriented(ctx, a, b, c):
    v_ab = vsub(b, a)
    d_ab = primitive_vector(ctx, v_ab)
    r = abs(_step_count(ctx, a, b, d_ab))
    v_ca = vsub(a, c)
    d_ca = primitive_vector(ctx, v_ca)
    if abs(_step_count(ctx, c, a, d_ca)) != r:
        return None
    v_bc = vsub(c, b)
    d_bc = primitive_vector(ctx, v_bc)
    steps_bc = abs(_step_count(ctx, b, c, d_bc))
    if steps_bc % r:
        return None
    cc = steps_bc // r
    v1, v2, v3 = d_bc, d_ca, d_ab
    if pair_index(ctx, v1, v2) != 1:
        return None
    if vadd(vadd(smul(cc, v1), v2), v3) != (0, 0, 0):
        return None
    return (r, cc)

from itertools import combinations

import pytest

from ahilb import lattice_context, parse_group_spec
from ahilb.errors import InvariantError
from ahilb.fan import build_fan
from ahilb.lattice import dot, vadd, vneg, vsub
from ahilb.monomials import (
    crossing_rule_check,
    dual_basis,
    line_ratio,
    parallel_ratio,
    primitive_in_monomial_lattice,
    ratio_str,
    triangle_ratios,
)
from ahilb.partition import _param_at, _step_count, build_partition, meet


def pipeline(text):
    ctx = lattice_context(parse_group_spec(text))
    part = build_partition(ctx)
    return ctx, part


def test_line_ratio_e3_line_of_11():
    ctx, part = pipeline("1/11(1,2,8)")
    line = part.lines[("corner", 3, 1)]
    m = line_ratio(ctx, line, vsub(ctx.corner(1), ctx.corner(3)))
    assert m == (2, -1, 0)
    assert ratio_str(m) == "x^2:y"


def test_line_ratio_simplex_side_is_pure_power():
    ctx, part = pipeline("1/11(1,2,8)")
    m = line_ratio(ctx, part.lines[("junction", 1)], (0, 0, 11))
    assert m == (0, 0, 11)
    assert ratio_str(m) == "z^11"
    # Each side carries the pure power of order N for a coprime group.
    m2 = line_ratio(ctx, part.lines[("junction", 2)], (11, 0, 0))
    assert m2 == (11, 0, 0)


def test_line_ratio_sign_convention():
    ctx, part = pipeline("1/11(1,2,8)")
    line = part.lines[("corner", 3, 1)]
    pos = vsub(ctx.corner(1), ctx.corner(3))
    assert line_ratio(ctx, line, vneg(pos)) == vneg(
        line_ratio(ctx, line, pos)
    )


def test_line_ratios_are_invariant_and_primitive():
    ctx, part = pipeline("1/30(25,2,3)")
    for tag, line in part.lines.items():
        m = line_ratio(ctx, line, _any_transversal(ctx, line))
        assert ctx.is_invariant_monomial(m)
        # Primitive: no proper invariant divisor.
        for k in range(2, 31):
            if all(c % k == 0 for c in m):
                smaller = (m[0] // k, m[1] // k, m[2] // k)
                assert not ctx.is_invariant_monomial(smaller)


def _any_transversal(ctx, line):
    from ahilb.lattice import chart, cross2

    for v in (vsub(ctx.corner(1), ctx.corner(2)),
              vsub(ctx.corner(2), ctx.corner(3))):
        if cross2(chart(line.direction), chart(v)) != 0:
            return v
    raise AssertionError


def test_parallel_ratio_identity():
    assert parallel_ratio((2, -1, 0), 0) == (2, -1, 0)


def test_parallel_ratio_one_step():
    assert parallel_ratio((2, -1, 0), 1) == (1, -2, -1)
    assert ratio_str(parallel_ratio((2, -1, 0), 1)) == "x:y^2z"


def test_parallel_ratio_orthogonal_to_shifted_lines():
    # The i-th parallel annihilates points P with base.P = i*n.
    ctx, part = pipeline("1/11(1,2,8)")
    line = part.lines[("corner", 3, 1)]
    base = line_ratio(ctx, line, vsub(ctx.corner(1), ctx.corner(3)))
    for p in ((6, 1, 4), (7, 3, 1)):
        assert dot(base, p) == ctx.n
        assert dot(parallel_ratio(base, 1), p) == 0


def test_parallel_ratio_case_a_pattern():
    # z^f:y^c shifted k steps is z^(f-k):x^k y^(c+k).
    f, c, k = 5, 2, 3
    assert parallel_ratio((0, -c, f), k) == (-k, -(c + k), f - k)


def test_triangle_ratios_corner_triangle_shape():
    # A corner triangle of side 1 carries ratios x^(a+1):y^b style:
    # case a with f = r = 1.
    ctx, part = pipeline("1/11(1,2,8)")
    corner_tris = [
        t for t in part.triangles if any(v == ctx.corner(3) for v in t.vertices)
    ]
    assert corner_tris
    for tri in corner_tris:
        tr = triangle_ratios(ctx, tri)
        if tri.r == 1:
            assert tr.case == "a"
            assert tr.f == 1
            assert tr.d - tr.a == 1
            assert tr.e - tr.b - tr.c == 1


def test_triangle_ratios_whole_simplex_zrzr():
    for r in (2, 3, 4):
        ctx, part = pipeline(f"1/{r}(1,{r-1},0)+1/{r}(0,1,{r-1})")
        tr = triangle_ratios(ctx, part.triangles[0])
        assert (tr.a, tr.b, tr.c) == (0, 0, 0)
        assert (tr.d, tr.e, tr.f) == (r, r, r)
        assert sorted(tr.ratios) == sorted(
            [(r, 0, 0), (0, r, 0), (0, 0, r)]
        )


def test_triangle_ratios_equalities_everywhere():
    for text in ("1/11(1,2,8)", "1/15(1,2,12)", "1/30(25,2,3)",
                 "1/101(1,7,93)", "1/13(1,5,7)", "1/2(0,1,1)"):
        ctx, part = pipeline(text)
        for tri in part.triangles:
            tr = triangle_ratios(ctx, tri)
            if tr.case == "a":
                assert tr.d - tr.a == tr.e - tr.b - tr.c == tr.f == tri.r
            else:
                assert tr.d - tr.a == tr.e - tr.b == tr.f - tr.c == tri.r
            assert tr.K >= 1


def test_champion_triangle_is_cyclic_case():
    ctx, part = pipeline("1/101(1,7,93)")
    key = part.champions.triangle_key
    tri = part.triangles[part.triangle_index(key)]
    assert triangle_ratios(ctx, tri).case == "b"


def test_dual_basis_zrzr_up_and_down():
    # Whole-simplex tesselation: up cells have x^(r-i)/y^i z^i pattern,
    # down cells the inverted one.
    for r in (2, 3, 4):
        ctx, part = pipeline(f"1/{r}(1,{r-1},0)+1/{r}(0,1,{r-1})")
        tri = part.triangles[0]
        tr = triangle_ratios(ctx, tri)
        fan = build_fan(ctx, part)
        for cell in fan.cones:
            db = dual_basis(ctx, tri, tr, cell)
            mins = tuple(min(v[t] for v in cell.vertices) for t in range(3))
            if cell.kind == "up":
                i, j, k = mins
                expect = {
                    (r - i, -i, -i), (-j, r - j, -j), (-k, -k, r - k)
                }
            else:
                i, j, k = (m + 1 for m in mins)
                expect = {
                    (-(r - i), i, i), (j, -(r - j), j), (k, k, -(r - k))
                }
            assert set(db.monomials) == expect


def test_dual_basis_corner_triangle_formula():
    # Corner side-1 triangle: basis x^(a+1)/y^b, y^(b+c+1)/x^a, z/y^c in
    # the normal-form coordinates.
    ctx, part = pipeline("1/11(1,2,8)")
    tri = next(
        t for t in part.triangles
        if t.r == 1 and any(v == ctx.corner(3) for v in t.vertices)
    )
    tr = triangle_ratios(ctx, tri)
    fan = build_fan(ctx, part)
    cell = next(
        c for c in fan.cones
        if c.parent == part.triangle_index(tri.key()) and c.kind == "up"
    )
    db = dual_basis(ctx, tri, tr, cell)
    from ahilb.monomials import _permute

    sigma = {tuple(_permute(tr.perm, m)) for m in db.monomials}
    a, b, c = tr.a, tr.b, tr.c
    assert sigma == {
        (a + 1, -b, 0), (-a, b + c + 1, 0), (0, -c, 1)
    }


def test_dual_basis_pairing_and_product_everywhere():
    for text in ("1/11(1,2,8)", "1/15(1,2,12)", "1/30(25,2,3)"):
        ctx, part = pipeline(text)
        fan = build_fan(ctx, part)
        parents = {
            t: triangle_ratios(ctx, tri)
            for t, tri in enumerate(part.triangles)
        }
        for cell in fan.cones:
            db = dual_basis(ctx, part.triangles[cell.parent],
                            parents[cell.parent], cell)
            for s, m in enumerate(db.monomials):
                for t, p in enumerate(cell.vertices):
                    assert dot(m, p) == (ctx.n if s == t else 0)
            total = (0, 0, 0)
            for m in db.monomials:
                total = vadd(total, m)
            assert total == (1, 1, 1)


def test_crossing_rule_paper_example():
    # Strength 3 from e1 against strength 2 from e3: the e1 line continues.
    ctx, part = pipeline("1/11(1,2,8)")
    l11 = part.lines[("corner", 1, 1)]
    l32 = part.lines[("corner", 3, 2)]
    assert crossing_rule_check(ctx, l11, l32) == ("corner", 1, 1)


def test_crossing_rule_equal_strengths_die():
    # The three champion lines of 1/3(1,1,1) meet with equal exponents.
    ctx, part = pipeline("1/3(1,1,1)")
    l1 = part.lines[("corner", 1, 1)]
    l2 = part.lines[("corner", 2, 1)]
    assert crossing_rule_check(ctx, l1, l2) is None


def test_crossing_rule_rejects_same_corner():
    ctx, part = pipeline("1/11(1,2,8)")
    with pytest.raises(InvariantError):
        crossing_rule_check(
            ctx, part.lines[("corner", 2, 1)], part.lines[("corner", 2, 2)]
        )


def test_crossing_rule_matches_partition_everywhere():
    for text in ("1/11(1,2,8)", "1/15(1,2,12)", "1/30(25,2,3)",
                 "1/101(1,7,93)", "1/13(1,5,7)"):
        ctx, part = pipeline(text)
        inner = [l for t, l in part.lines.items() if t[0] == "corner"]
        fars = {
            l.tag: _step_count(ctx, l.anchor, l.defeat_point, l.direction)
            for l in inner
        }
        for la, lb in combinations(inner, 2):
            if la.tag[1] == lb.tag[1]:
                continue
            x = meet(la, lb)
            if x is None or not all(c > 0 for c in x[0]):
                continue
            ta, tb = _param_at(la, x), _param_at(lb, x)
            if min(ta, tb) < 0 or ta > fars[la.tag] or tb > fars[lb.tag]:
                continue
            winner = crossing_rule_check(ctx, la, lb)
            geom = None
            if ta < fars[la.tag] and tb == fars[lb.tag]:
                geom = la.tag
            if tb < fars[lb.tag] and ta == fars[la.tag]:
                geom = lb.tag
            assert winner == geom


def test_primitive_in_monomial_lattice():
    ctx = lattice_context(parse_group_spec("1/11(1,2,8)"))
    assert primitive_in_monomial_lattice(ctx, (4, -2, 0)) == (2, -1, 0)
    assert primitive_in_monomial_lattice(ctx, (1, 0, 0)) == (11, 0, 0)


def test_ratio_str():
    assert ratio_str((2, -1, 0)) == "x^2:y"
    assert ratio_str((0, 0, 11)) == "z^11"
    assert ratio_str((1, -2, -1)) == "x:y^2z"
    assert ratio_str((-1, 1, 1)) == "yz:x"

import pytest

from ahilb import (
    GroupSpecError,
    junior_points,
    lattice_context,
    pair_index,
    parse_group_spec,
    primitive_vector,
)
from ahilb.lattice import chart, cross2, dot, lattice_length, smul, vsub


def ctx_of(text, **kw):
    return lattice_context(parse_group_spec(text), **kw)


def test_parse_single_generator():
    spec = parse_group_spec("1/11(1,2,8)")
    assert len(spec.generators) == 1
    assert spec.generators[0].order == 11
    assert spec.generators[0].weights == (1, 2, 8)


def test_parse_two_generators_order_four():
    ctx = ctx_of("1/2(1,1,0)+1/2(0,1,1)")
    assert ctx.order == 4
    assert ctx.n == 2
    # Closure oracle: the table is closed under addition mod n.
    table = ctx.element_table
    for g in table:
        for h in table:
            assert tuple((a + b) % 2 for a, b in zip(g, h)) in table


def test_parse_rejects_sl_violation():
    with pytest.raises(GroupSpecError) as err:
        parse_group_spec("1/4(1,2,2)")
    assert "1/4(1,2,2)" in str(err.value)


def test_parse_rejects_garbage():
    for bad in ("", "1/5", "1/5(1,2)", "2/5(1,2,2)", "1/5(1,2,2)x"):
        with pytest.raises(GroupSpecError):
            parse_group_spec(bad)


def test_parse_reduces_negative_weights():
    spec = parse_group_spec("1/7(-1, 2, 6)")
    assert spec.generators[0].weights == (6, 2, 6)


def test_parse_canonical_text_fixpoint():
    for text in ("1/11(1,2,8)", "1/2(1,1,0) + 1/2(0,1,1)", "1/7(-1,2,6)"):
        spec = parse_group_spec(text)
        again = parse_group_spec(spec.canonical_text)
        assert again.canonical_text == spec.canonical_text
        assert again.generators == spec.generators


def test_context_cyclic_11():
    ctx = ctx_of("1/11(1,2,8)")
    assert ctx.n == 11
    assert ctx.order == 11


def test_context_exponent_reduction():
    # The written order 4 is not the true order of 1/4(0,2,2).
    ctx = ctx_of("1/4(0,2,2)")
    assert ctx.n == 2
    assert ctx.order == 2


def test_context_trivial_group():
    ctx = ctx_of("1/1(0,0,0)")
    assert ctx.n == 1
    assert ctx.order == 1
    assert ctx.element_table == frozenset({(0, 0, 0)})


def test_context_order_cap():
    with pytest.raises(GroupSpecError):
        ctx_of("1/999983(1,1,999981)", max_order=10**5)


def test_monomial_basis_invariance_and_determinant():
    for text in ("1/11(1,2,8)", "1/2(1,1,0)+1/2(0,1,1)", "1/15(1,2,12)", "1/30(25,2,3)"):
        ctx = ctx_of(text)
        for m in ctx.monomial_basis:
            for g in ctx.element_table:
                assert dot(m, g) % ctx.n == 0
        # Membership consistency: q is a lattice point iff all three rows
        # pair integrally with it.
        for p in junior_points(ctx):
            assert all(dot(m, p.coords) % ctx.n == 0 for m in ctx.monomial_basis)


def test_junior_points_11():
    ctx = ctx_of("1/11(1,2,8)")
    # Oracle: enumerate k*(1,2,8) mod 11 and keep coordinate sums equal to 11.
    expected = set()
    for k in range(1, 11):
        g = tuple((k * a) % 11 for a in (1, 2, 8))
        if sum(g) == 11:
            expected.add(g)
    assert expected == {(1, 2, 8), (2, 4, 5), (3, 6, 2), (6, 1, 4), (7, 3, 1)}
    pts = junior_points(ctx)
    assert [p.coords for p in pts] == sorted(
        expected | {(11, 0, 0), (0, 11, 0), (0, 0, 11)}
    )
    kinds = {p.coords: p.kind for p in pts}
    assert sum(1 for k in kinds.values() if k == "vertex") == 3
    assert sum(1 for k in kinds.values() if k == "edge") == 0
    assert sum(1 for k in kinds.values() if k == "interior") == 5


def test_junior_points_z2z2():
    ctx = ctx_of("1/2(1,1,0)+1/2(0,1,1)")
    pts = junior_points(ctx)
    kinds = [p.kind for p in pts]
    assert kinds.count("vertex") == 3
    assert kinds.count("edge") == 3
    assert kinds.count("interior") == 0


def test_junior_points_z3():
    ctx = ctx_of("1/3(1,1,1)")
    pts = junior_points(ctx)
    interior = [p.coords for p in pts if p.kind == "interior"]
    assert interior == [(1, 1, 1)]
    assert sum(1 for p in pts if p.kind == "edge") == 0


@pytest.mark.parametrize(
    "text",
    ["1/11(1,2,8)", "1/2(1,1,0)+1/2(0,1,1)", "1/3(1,1,1)", "1/15(1,2,12)",
     "1/30(25,2,3)", "1/1(0,0,0)", "1/2(0,1,1)"],
)
def test_euler_count_relation(text):
    # 2*interior + edge + 1 = order, the area count of the simplex.
    ctx = ctx_of(text)
    pts = junior_points(ctx)
    interior = sum(1 for p in pts if p.kind == "interior")
    edge = sum(1 for p in pts if p.kind == "edge")
    assert 2 * interior + edge + 1 == ctx.order


def test_primitive_vector_coprime_side():
    ctx = ctx_of("1/11(1,2,8)")
    v = vsub(ctx.corner(2), ctx.corner(1))
    assert primitive_vector(ctx, v) == v


def test_primitive_vector_halves_side_with_midpoint():
    ctx = ctx_of("1/2(1,1,0)+1/2(0,1,1)")
    v = vsub(ctx.corner(2), ctx.corner(1))  # (-2, 2, 0)
    assert primitive_vector(ctx, v) == (-1, 1, 0)


def test_primitive_vector_idempotent():
    ctx = ctx_of("1/11(1,2,8)")
    v = (1, 2, -3)
    p = primitive_vector(ctx, v)
    assert primitive_vector(ctx, p) == p


def test_lattice_length():
    ctx = ctx_of("1/2(1,1,0)+1/2(0,1,1)")
    assert lattice_length(ctx, (-2, 2, 0)) == 2
    assert lattice_length(ctx, (-1, 1, 0)) == 1


def _index_oracle(ctx, v, w):
    """Count lattice translations in the half-open parallelogram of v, w."""
    cv, cw = chart(v), chart(w)
    d = cross2(cv, cw)
    if d == 0:
        return 0
    count = 0
    lo1 = min(0, cv[0], cw[0], cv[0] + cw[0])
    hi1 = max(0, cv[0], cw[0], cv[0] + cw[0])
    lo2 = min(0, cv[1], cw[1], cv[1] + cw[1])
    hi2 = max(0, cv[1], cw[1], cv[1] + cw[1])
    for x in range(lo1, hi1 + 1):
        for y in range(lo2, hi2 + 1):
            u = (-(x + y), x, y)
            if not ctx.is_translation(u):
                continue
            # u = s v + t w with 0 <= s, t < 1, solved exactly.
            s_num = cross2((x, y), cw)
            t_num = cross2(cv, (x, y))
            if d < 0:
                s_num, t_num, dd = -s_num, -t_num, -d
            else:
                dd = d
            if 0 <= s_num < dd and 0 <= t_num < dd:
                count += 1
    return count


def test_pair_index_basis_pair():
    ctx = ctx_of("1/11(1,2,8)")
    b1, b2 = ctx.trans_basis
    assert pair_index(ctx, b1, b2) == 1


def test_pair_index_parallel():
    ctx = ctx_of("1/11(1,2,8)")
    v = (1, 2, -3)
    assert pair_index(ctx, v, smul(2, v)) == 0


def test_pair_index_corner_sides_equals_order():
    ctx = ctx_of("1/11(1,2,8)")
    v = vsub(ctx.corner(3), ctx.corner(1))
    w = vsub(ctx.corner(2), ctx.corner(1))
    idx = pair_index(ctx, v, w)
    assert idx == 11
    assert idx == _index_oracle(ctx, v, w)


def test_pair_index_matches_oracle_more_groups():
    for text in ("1/2(1,1,0)+1/2(0,1,1)", "1/15(1,2,12)", "1/7(1,2,4)"):
        ctx = ctx_of(text)
        v = vsub(ctx.corner(3), ctx.corner(1))
        w = vsub(ctx.corner(2), ctx.corner(1))
        assert pair_index(ctx, v, w) == _index_oracle(ctx, v, w)

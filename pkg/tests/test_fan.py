from dataclasses import replace
from math import comb

from ahilb import junior_points, lattice_context, parse_group_spec
from ahilb.fan import (
    barycentric_steps,
    build_fan,
    dp6_count,
    surface_census,
    tesselate,
    verify_fan,
    vertex_stars,
)
from ahilb.lattice import vadd, vsub
from ahilb.partition import build_partition


def pipeline(text):
    ctx = lattice_context(parse_group_spec(text))
    part = build_partition(ctx)
    return ctx, part, build_fan(ctx, part)


def test_tesselate_counts():
    ctx, part, _ = pipeline("1/2(1,1,0)+1/2(0,1,1)")
    cells = tesselate(ctx, part.triangles[0])
    assert len(cells) == 4
    assert sum(1 for c in cells if c.kind == "up") == 3
    assert sum(1 for c in cells if c.kind == "down") == 1


def test_tesselate_side_one():
    ctx, part, _ = pipeline("1/1(0,0,0)")
    cells = tesselate(ctx, part.triangles[0])
    assert len(cells) == 1 and cells[0].kind == "up"


def test_tesselate_side_five():
    # A synthetic side-5 triangle: the whole simplex of Z/5 + Z/5.
    ctx, part, _ = pipeline("1/5(1,4,0)+1/5(0,1,4)")
    cells = tesselate(ctx, part.triangles[0])
    assert len(cells) == 25
    assert sum(1 for c in cells if c.kind == "up") == 15
    assert sum(1 for c in cells if c.kind == "down") == 10


def test_tesselate_step_sums():
    ctx, part, _ = pipeline("1/4(1,3,0)+1/4(0,1,3)")
    for c in tesselate(ctx, part.triangles[0]):
        i, j, k = c.steps
        if c.kind == "up":
            assert i + j + k == 3
        else:
            assert i + j + k == 5 and min(i, j, k) >= 1


def test_build_fan_counts():
    for text, cones in (("1/11(1,2,8)", 11), ("1/2(1,1,0)+1/2(0,1,1)", 4),
                        ("1/1(0,0,0)", 1), ("1/30(25,2,3)", 30)):
        ctx, part, fan = pipeline(text)
        assert len(fan.cones) == cones
        assert verify_fan(ctx, fan) == []


def test_fan_rays_are_all_junior_points():
    for text in ("1/11(1,2,8)", "1/15(1,2,12)", "1/101(1,7,93)"):
        ctx, part, fan = pipeline(text)
        assert set(fan.rays) == {p.coords for p in junior_points(ctx)}


def test_fan_euler_vertices_11():
    ctx, part, fan = pipeline("1/11(1,2,8)")
    assert len(fan.rays) == 8  # 3 corners + 5 interior


def test_verify_fan_detects_off_plane_ray():
    ctx, part, fan = pipeline("1/11(1,2,8)")
    cones = list(fan.cones)
    bad_vertex = None
    for t, c in enumerate(cones):
        for v in c.vertices:
            if 0 not in v:
                bad_vertex = v
                break
        if bad_vertex:
            break
    moved = vadd(bad_vertex, (1, 0, 0))
    new_cones = tuple(
        replace(
            c,
            vertices=tuple(moved if v == bad_vertex else v for v in c.vertices),
        )
        for c in cones
    )
    rays = tuple(moved if r == bad_vertex else r for r in fan.rays)
    bad_fan = replace(fan, rays=rays, cones=new_cones)
    assert any("junior plane" in msg for msg in verify_fan(ctx, bad_fan))


def test_verify_fan_detects_non_unimodular_cone():
    ctx, part, fan = pipeline("1/11(1,2,8)")
    cones = list(fan.cones)
    c0 = cones[0]
    # Replace one vertex by a far lattice point: the cone stops being basic.
    far = next(
        p.coords for p in junior_points(ctx)
        if p.coords not in c0.vertices
    )
    cones[0] = replace(c0, vertices=(c0.vertices[0], c0.vertices[1], far))
    bad_fan = replace(fan, cones=tuple(cones))
    assert any("unimodular" in msg or "exhaust" in msg
               for msg in verify_fan(ctx, bad_fan))


def test_census_p2_at_center_of_z3():
    ctx, part, fan = pipeline("1/3(1,1,1)")
    census = surface_census(ctx, fan, part)
    assert len(census) == 1
    entry = census[0]
    assert entry.vertex == (1, 1, 1)
    assert entry.valency == 3
    assert entry.label == "P2"
    assert entry.b == (-1, -1, -1)
    assert entry.c == (-3, -3, -3)


def test_census_dp6_at_center_of_z3z3():
    ctx, part, fan = pipeline("1/3(1,2,0)+1/3(0,1,2)")
    census = surface_census(ctx, fan, part)
    assert [s.label for s in census] == ["dP6"]
    assert census[0].vertex == (1, 1, 1)
    assert census[0].valency == 6
    assert census[0].b == (1, 1, 1, 1, 1, 1)


def test_census_valencies_in_range():
    for text in ("1/11(1,2,8)", "1/15(1,2,12)", "1/30(25,2,3)",
                 "1/101(1,7,93)", "1/13(1,5,7)"):
        ctx, part, fan = pipeline(text)
        for s in surface_census(ctx, fan, part):
            assert 3 <= s.valency <= 6


def test_census_star_relations():
    # u_{t-1} + u_{t+1} = b_t u_t - c_t v, summing scaled points exactly.
    ctx, part, fan = pipeline("1/11(1,2,8)")
    for s in surface_census(ctx, fan, part):
        t = s.valency
        for idx in range(t):
            lhs = vadd(s.neighbors[(idx - 1) % t], s.neighbors[(idx + 1) % t])
            rhs = vsub(
                tuple(s.b[idx] * c for c in s.neighbors[idx]),
                tuple(s.c[idx] * c for c in s.vertex),
            )
            assert lhs == rhs


def test_dp6_count_formula():
    for text, expect in (
        ("1/11(1,2,8)", 0),
        ("1/3(1,2,0)+1/3(0,1,2)", 1),
        ("1/4(1,3,0)+1/4(0,1,3)", 3),
        ("1/101(1,7,93)", 18),
    ):
        ctx, part, fan = pipeline(text)
        assert dp6_count(part) == expect
        census = surface_census(ctx, fan, part)
        assert sum(1 for s in census if s.label == "dP6") == expect


def test_dp6_formula_is_binomial():
    ctx, part, fan = pipeline("1/101(1,7,93)")
    assert dp6_count(part) == sum(comb(t.r - 1, 2) for t in part.triangles)


def test_barycentric_steps_roundtrip():
    ctx, part, fan = pipeline("1/4(1,3,0)+1/4(0,1,3)")
    tri = part.triangles[0]
    for c in tesselate(ctx, tri):
        for v in c.vertices:
            a, b, g = barycentric_steps(ctx, tri, v)
            assert a + b + g == tri.r
            assert min(a, b, g) >= 0


def test_stars_close_up():
    ctx, part, fan = pipeline("1/30(25,2,3)")
    stars = vertex_stars(ctx, fan)
    for v, star in stars.items():
        # Every consecutive pair spans a cone of the fan with v.
        cone_keys = {c.key() for c in fan.cones}
        for idx in range(len(star)):
            cell = tuple(sorted((v, star[idx], star[(idx + 1) % len(star)])))
            assert cell in cone_keys

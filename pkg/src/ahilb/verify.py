"""The cross-checking invariant suite, shared by the command line and the
acceptance tests.

Every check is exact integer arithmetic; a failure anywhere is reported
with the offending group.  Differential pairs covered here: enumeration vs
contraction-game partition, closed-form vs solved dual bases, exponent
knock-out rule vs partition defeat data, hull strengths vs continued
fractions on coprime corners, binomial vs census surface counts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import gcd

from .clusters import classify_cluster, cluster_system, tripod_basis, verify_cluster
from .corners import cyclic_matrix_product, cyclic_word, hj_expand, junction_c
from .errors import AhilbError, GroupSpecError, InvariantError
from .fan import build_fan, dp6_count, surface_census, verify_fan
from .lattice import (
    GroupSpec,
    LatticeContext,
    junior_points,
    lattice_context,
    parse_group_spec,
)
from .mmp import run_mmp, triple_set
from .monomials import crossing_rule_check, dual_basis, triangle_ratios
from .partition import (
    _param_at,
    _step_count,
    build_partition,
    knockout_report,
    meet,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def run_checks(ctx: LatticeContext, mmp_orders: int = 10,
               seed: int = 0) -> list[CheckResult]:
    """Run the whole invariant suite on one group."""
    results: list[CheckResult] = []

    def check(name):
        def wrap(fn):
            try:
                fn()
                results.append(CheckResult(name, True))
            except AhilbError as exc:
                results.append(CheckResult(name, False, str(exc)))
            return fn
        return wrap

    state = {}

    @check("lattice: junior point count matches group order")
    def _counts():
        pts = junior_points(ctx)
        interior = sum(1 for p in pts if p.kind == "interior")
        edge = sum(1 for p in pts if p.kind == "edge")
        if 2 * interior + edge + 1 != ctx.order:
            raise InvariantError("2*interior + edge + 1 != order")

    @check("corners: hull strengths match continued fractions")
    def _hj():
        if len(ctx.spec.generators) != 1:
            return
        r = ctx.order
        w = ctx.spec.generators[0].weights
        if ctx.n != ctx.spec.generators[0].order:
            return
        part = _partition(ctx, state)
        for i in (1, 2, 3):
            u, v = w[i % 3], w[(i + 1) % 3]
            if r == 1 or gcd(u, r) != 1 or gcd(v, r) != 1:
                continue
            alpha = (v * pow(u, -1, r)) % r
            if part.fans[i].strengths != tuple(hj_expand(r, alpha)):
                raise InvariantError(f"corner {i} disagrees with {r}/{alpha}")

    @check("corners: cyclic word matrix product is minus the identity")
    def _product():
        word = cyclic_word(ctx)
        if cyclic_matrix_product(word) != ((-1, 0), (0, -1)):
            raise InvariantError(f"word {word.values()} product is wrong")

    @check("corners: at most one long side")
    def _long():
        longs = [s for s in (1, 2, 3) if junction_c(ctx, s)[0] >= 2]
        if len(longs) > 1:
            raise InvariantError(f"long sides at {longs}")

    @check("mmp: triple set is independent of contraction order")
    def _orders():
        word = cyclic_word(ctx)
        base = set(triple_set(run_mmp(word)).keys())
        s = sum(word.values())
        if len(base) != s // 3:
            raise InvariantError("triple count differs from strength sum / 3")
        rng = random.Random(seed)
        for _ in range(mmp_orders):
            other = set(triple_set(run_mmp(word, ("random", rng.randrange(2**30)))))
            if other != base:
                raise InvariantError("randomized run emitted a different set")

    @check("partition: enumeration and contraction game agree, areas exact")
    def _partition_check():
        part = _partition(ctx, state)
        if sum(t.r * t.r for t in part.triangles) != ctx.order:
            raise InvariantError("areas do not sum to the group order")

    @check("partition: knock-out bookkeeping consistent at every crossing")
    def _knockout():
        part = _partition(ctx, state)
        bad = knockout_report(ctx, part)
        if bad:
            raise InvariantError("; ".join(bad))

    @check("partition: catchments tile the complement of the champions")
    def _catchments():
        part = _partition(ctx, state)
        assigned = {t for members in part.catchment.values() for t in members}
        total = set(range(len(part.triangles)))
        rest = total - assigned
        if part.champions.kind in ("concurrent", "long_side"):
            if rest:
                raise InvariantError(f"unassigned triangles {rest}")
        else:
            key = part.champions.triangle_key
            if rest != {part.triangle_index(key)}:
                raise InvariantError(f"unassigned triangles {rest}")

    @check("fan: crepant, unimodular, complete")
    def _fan_ok():
        bad = verify_fan(ctx, _fan(ctx, state))
        if bad:
            raise InvariantError("; ".join(bad))

    @check("fan: census valencies and surface counts")
    def _census():
        part, fan = _partition(ctx, state), _fan(ctx, state)
        census = surface_census(ctx, fan, part)
        for s in census:
            if not 3 <= s.valency <= 6:
                raise InvariantError(f"valency {s.valency} at {s.vertex}")
        want = dp6_count(part)
        got = sum(1 for s in census if s.label == "dP6")
        if want != got:
            raise InvariantError(f"dP6 formula {want} vs census {got}")

    @check("monomials: ratio normal form on every triangle")
    def _ratios():
        _parents(ctx, state)

    @check("monomials: dual bases solve and closed form agree")
    def _duals():
        _duals_list(ctx, state)

    @check("monomials: exponent knock-out rule matches defeat data")
    def _crossings():
        part = _partition(ctx, state)
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
            if winner != geom:
                raise InvariantError(
                    f"rule says {winner}, partition says {geom} "
                    f"at {x[0]} for {la.tag} x {lb.tag}"
                )

    @check("clusters: systems verified, tripods exact, classification returns")
    def _clusters():
        part, fan = _partition(ctx, state), _fan(ctx, state)
        for db in _duals_list(ctx, state):
            sysm = cluster_system(ctx, db)
            verify_cluster(ctx, sysm)
            tripod_basis(ctx, sysm)
            cls = classify_cluster(ctx, sysm.exponents(), fan)
            if cls.host.key() != db.cell.key():
                raise InvariantError("classification returned the wrong chart")
            if cls.r != part.triangles[db.cell.parent].r:
                raise InvariantError("classification recovered the wrong side")

    return results


def _partition(ctx, state):
    if "part" not in state:
        state["part"] = build_partition(ctx)
    return state["part"]


def _fan(ctx, state):
    if "fan" not in state:
        state["fan"] = build_fan(ctx, _partition(ctx, state))
    return state["fan"]


def _parents(ctx, state):
    if "parents" not in state:
        part = _partition(ctx, state)
        state["parents"] = [
            triangle_ratios(ctx, tri) for tri in part.triangles
        ]
    return state["parents"]


def _duals_list(ctx, state):
    if "duals" not in state:
        part, fan = _partition(ctx, state), _fan(ctx, state)
        parents = _parents(ctx, state)
        state["duals"] = [
            dual_basis(ctx, part.triangles[cell.parent],
                       parents[cell.parent], cell)
            for cell in fan.cones
        ]
    return state["duals"]


def random_group_spec(rng: random.Random, max_order: int) -> GroupSpec:
    """A uniform-ish random valid group of order at most max_order."""
    while True:
        if rng.random() < 0.8:
            r = rng.randint(1, max_order)
            a = rng.randrange(r)
            b = rng.randrange(r)
            c = (-a - b) % r
            text = f"1/{r}({a},{b},{c})"
        else:
            terms = []
            for _ in range(2):
                r = rng.randint(1, max(2, int(max_order**0.5) + 1))
                a = rng.randrange(r)
                b = rng.randrange(r)
                terms.append(f"1/{r}({a},{b},{(-a - b) % r})")
            text = "+".join(terms)
        try:
            spec = parse_group_spec(text)
            lattice_context(spec, max_order=max_order)
        except GroupSpecError:
            continue
        return spec


def run_random_suite(count: int, max_order: int, seed: int,
                     mmp_orders: int = 10) -> tuple[int, list[str]]:
    """Run the full suite over seeded random groups; returns the number of
    groups tested and a list of failure descriptions."""
    rng = random.Random(seed)
    failures = []
    for t in range(count):
        spec = random_group_spec(rng, max_order)
        ctx = lattice_context(spec, max_order=max_order)
        for res in run_checks(ctx, mmp_orders=mmp_orders, seed=seed + t):
            if not res.ok:
                failures.append(f"{spec.canonical_text}: {res.name}: {res.detail}")
    return count, failures

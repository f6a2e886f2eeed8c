"""The seven-equation cluster systems attached to basic triangles, their
verification, the tripod monomial basis, and the reverse classification
from exponents back to a basic triangle.

Each basic triangle's chart parametrizes invariant subschemes cut out by
    x^(l+1) = xi  y^b z^f      y^(b+1) z^(f+1) = lam x^l
    y^(m+1) = eta z^c x^d      z^(c+1) x^(d+1) = mu  y^m     xyz = pi
    z^(n+1) = zeta x^a y^e     x^(a+1) y^(e+1) = nu  z^n
with lam*xi = mu*eta = nu*zeta = pi, and the parameters tied together by
the up or down dependency relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .errors import InvariantError
from .fan import BasicTriangle, Fan
from .lattice import LatticeContext, Vec3, dot, vadd
from .monomials import DualBasis, _permute

_PERMS = tuple(sorted(permutations(range(3))))

PARAM_NAMES = ("xi", "eta", "zeta", "lam", "mu", "nu", "pi")


@dataclass(frozen=True)
class ClusterSystem:
    """Exponent data of one chart's equation system."""

    mode: str  # "up" | "down"
    a: int
    b: int
    c: int
    d: int
    e: int
    f: int
    l: int
    m: int
    n: int
    host: BasicTriangle | None = None

    def exponents(self) -> tuple[int, ...]:
        return (self.a, self.b, self.c, self.d, self.e, self.f,
                self.l, self.m, self.n)

    def ratio_vectors(self) -> dict[str, Vec3]:
        """Laurent exponents of the seven parameters on the big torus."""
        return {
            "xi": (self.l + 1, -self.b, -self.f),
            "eta": (-self.d, self.m + 1, -self.c),
            "zeta": (-self.a, -self.e, self.n + 1),
            "lam": (-self.l, self.b + 1, self.f + 1),
            "mu": (self.d + 1, -self.m, self.c + 1),
            "nu": (self.a + 1, self.e + 1, -self.n),
            "pi": (1, 1, 1),
        }


def _up_exponents_from_vectors(vecs: tuple[Vec3, Vec3, Vec3]) -> tuple[int, ...]:
    """Read (a..f, l, m, n) off up-mode dual vectors (xi, eta, zeta)."""
    xi, eta, zeta = vecs
    l, b, f = xi[0] - 1, -xi[1], -xi[2]
    m, d, c = eta[1] - 1, -eta[0], -eta[2]
    n, a, e = zeta[2] - 1, -zeta[0], -zeta[1]
    return (a, b, c, d, e, f, l, m, n)


def _down_exponents_from_vectors(vecs: tuple[Vec3, Vec3, Vec3]) -> tuple[int, ...]:
    lam, mu, nu = vecs
    l, b, f = -lam[0], lam[1] - 1, lam[2] - 1
    m, d, c = -mu[1], mu[0] - 1, mu[2] - 1
    n, a, e = -nu[2], nu[0] - 1, nu[1] - 1
    return (a, b, c, d, e, f, l, m, n)


def _roles_by_sign(monomials, mode: str) -> tuple[Vec3, Vec3, Vec3]:
    """Order the three dual monomials as (x-role, y-role, z-role)."""
    out = [None, None, None]
    for mono in monomials:
        if mode == "up":
            marks = [t for t in range(3) if mono[t] > 0]
        else:
            marks = [t for t in range(3) if mono[t] < 0]
        if len(marks) != 1 or out[marks[0]] is not None:
            raise InvariantError(f"dual monomials lack the {mode} sign pattern")
        out[marks[0]] = mono
    return tuple(out)


def cluster_system(ctx: LatticeContext, dual: DualBasis) -> ClusterSystem:
    """The equation system of one basic triangle, read off its dual basis."""
    cell = dual.cell
    roles = _roles_by_sign(dual.monomials, cell.kind)
    if cell.kind == "up":
        exps = _up_exponents_from_vectors(roles)
    else:
        exps = _down_exponents_from_vectors(roles)
    if min(exps) < 0:
        raise InvariantError("cluster exponents must be nonnegative")
    sys = ClusterSystem(cell.kind, *exps, host=cell)
    verify_cluster(ctx, sys)
    return sys


def verify_cluster(ctx: LatticeContext, sys: ClusterSystem) -> list[str]:
    """Assert the dependency relations, the syzygy, and that every
    equation matches characters.  Raises on failure, returns the list of
    check names performed."""
    v = sys.ratio_vectors()
    if sys.mode == "up":
        want = dict(lam=("eta", "zeta"), mu=("zeta", "xi"), nu=("xi", "eta"))
        counts_ok = (
            sys.l == sys.a + sys.d
            and sys.m == sys.b + sys.e
            and sys.n == sys.c + sys.f
        )
    else:
        want = dict(xi=("mu", "nu"), eta=("nu", "lam"), zeta=("lam", "mu"))
        counts_ok = (
            sys.l == sys.a + sys.d + 1
            and sys.m == sys.b + sys.e + 1
            and sys.n == sys.c + sys.f + 1
        )
    if not counts_ok:
        raise InvariantError(f"{sys.mode} count relations fail: {sys.exponents()}")
    for name, (p, q) in want.items():
        if v[name] != vadd(v[p], v[q]):
            raise InvariantError(
                f"{sys.mode} parameter relation {name} = {p}*{q} fails"
            )
    for p, q in (("xi", "lam"), ("eta", "mu"), ("zeta", "nu")):
        if vadd(v[p], v[q]) != (1, 1, 1):
            raise InvariantError(f"syzygy {q}*{p} = pi fails")
    for name, vec in v.items():
        if not ctx.is_invariant_monomial(vec):
            raise InvariantError(
                f"equation for {name} does not match characters: {vec}"
            )
    return ["counts", "parameter relations", "syzygy", "characters"]


def tripod_basis(ctx: LatticeContext, sys: ClusterSystem) -> list[Vec3]:
    """Monomials outside the system's initial ideal: the staircase under
    x^(l+1), y^(m+1), z^(n+1), the three wall generators and xyz.

    Exactly N monomials, hitting every character once (the cluster's ring
    is the regular representation).
    """
    a, b, c, d, e, f = sys.a, sys.b, sys.c, sys.d, sys.e, sys.f
    l, m, n = sys.l, sys.m, sys.n
    out = [(p, 0, 0) for p in range(l + 1)]
    out += [(0, q, 0) for q in range(1, m + 1)]
    out += [(0, 0, s) for s in range(1, n + 1)]
    for p in range(1, l + 1):
        q_max = m if p <= a else min(m, e)
        out += [(p, q, 0) for q in range(1, q_max + 1)]
    for q in range(1, m + 1):
        s_max = n if q <= b else min(n, f)
        out += [(0, q, s) for s in range(1, s_max + 1)]
    for s in range(1, n + 1):
        p_max = l if s <= c else min(l, d)
        out += [(p, 0, s) for p in range(1, p_max + 1)]
    if len(out) != ctx.order:
        raise InvariantError(
            f"tripod has {len(out)} monomials for a group of order {ctx.order}"
        )
    chars = {tuple(dot(mono, g) % ctx.n for g in ctx.generators) for mono in out}
    if len(chars) != ctx.order:
        raise InvariantError("tripod characters do not fill the dual group")
    return sorted(out)


@dataclass(frozen=True)
class Classification:
    """Inverse of cluster_system: which chart a given exponent tuple
    belongs to."""

    mode: str
    case: str
    perm: tuple[int, int, int]
    A: int
    B: int
    C: int
    i: int
    j: int
    k: int
    r: int
    host: BasicTriangle | None


def _vectors_by_variable(sys_mode: str, exps: tuple[int, ...]):
    a, b, c, d, e, f, l, m, n = exps
    if sys_mode == "up":
        return (
            (l + 1, -b, -f),
            (-d, m + 1, -c),
            (-a, -e, n + 1),
        )
    return (
        (-l, b + 1, f + 1),
        (d + 1, -m, c + 1),
        (a + 1, e + 1, -n),
    )


def classify_cluster(ctx: LatticeContext, exps: tuple[int, ...],
                     fan: Fan | None = None) -> Classification:
    """Recover mode, coordinate permutation, the parent normal-form data
    and the basic triangle from a cluster exponent tuple.

    exps = (a, b, c, d, e, f, l, m, n).  The host triangle is looked up
    when a fan is supplied.
    """
    a, b, c, d, e, f, l, m, n = exps
    if (l, m, n) == (a + d, b + e, c + f):
        mode = "up"
    elif (l, m, n) == (a + d + 1, b + e + 1, c + f + 1):
        mode = "down"
    else:
        raise InvariantError(
            f"exponents {exps} satisfy neither the up nor the down relations"
        )
    base_vecs = _vectors_by_variable(mode, exps)

    found = None
    for case in ("a", "b"):
        for perm in _PERMS:
            vecs = tuple(
                _permute(perm, base_vecs[perm[t]]) for t in range(3)
            )
            if mode == "up":
                a2, b2, c2, d2, e2, f2, *_ = _up_exponents_from_vectors(vecs)
            else:
                a2, b2, c2, d2, e2, f2, *_ = _down_exponents_from_vectors(vecs)
            shift = 0 if mode == "up" else 1
            if case == "a":
                if not (b2 >= f2 and d2 >= c2 and e2 >= a2):
                    continue
                A, B, C = d2 - c2, b2 - f2, e2 - a2
                i, j, k = f2 + shift, c2 + shift, a2 + shift
            else:
                if not (b2 >= f2 and c2 >= d2 and a2 >= e2):
                    continue
                A, B, C = a2 - e2, b2 - f2, c2 - d2
                i, j, k = f2 + shift, d2 + shift, e2 + shift
            r = i + j + k + (1 if mode == "up" else -1)
            found = Classification(mode, case, perm, A, B, C, i, j, k, r, None)
            break
        if found:
            break
    if found is None:
        raise InvariantError(f"no permutation normalizes exponents {exps}")

    host = None
    if fan is not None:
        host = _host_lookup(ctx, base_vecs, fan)
    return Classification(found.mode, found.case, found.perm, found.A,
                          found.B, found.C, found.i, found.j, found.k,
                          found.r, host)


def _host_lookup(ctx: LatticeContext, vecs, fan: Fan) -> BasicTriangle:
    """Invert the dual basis: the chart's cone vertices are n * D^{-1}."""
    det = (
        vecs[0][0] * (vecs[1][1] * vecs[2][2] - vecs[1][2] * vecs[2][1])
        - vecs[0][1] * (vecs[1][0] * vecs[2][2] - vecs[1][2] * vecs[2][0])
        + vecs[0][2] * (vecs[1][0] * vecs[2][1] - vecs[1][1] * vecs[2][0])
    )
    if det == 0:
        raise InvariantError("cluster vectors are not independent")
    cols = []
    for s in range(3):
        u, w = vecs[(s + 1) % 3], vecs[(s + 2) % 3]
        cof = (
            u[1] * w[2] - u[2] * w[1],
            u[2] * w[0] - u[0] * w[2],
            u[0] * w[1] - u[1] * w[0],
        )
        col = tuple(Fraction(ctx.n * x, det) for x in cof)
        if not all(v.denominator == 1 for v in col):
            raise InvariantError("cluster chart cone is not integral")
        cols.append(tuple(int(v) for v in col))
    key = tuple(sorted(cols))
    for cell in fan.cones:
        if cell.key() == key:
            return cell
    raise InvariantError(f"no fan cone has vertices {key}")


def equations_text(sys: ClusterSystem) -> list[str]:
    """The seven equations, one human-readable line each."""
    v = sys.ratio_vectors()
    lines = []
    for name in PARAM_NAMES:
        vec = v[name]
        lhs = _mono(tuple(x if x > 0 else 0 for x in vec))
        rhs = _mono(tuple(-x if x < 0 else 0 for x in vec))
        lines.append(f"{lhs} = {name} * {rhs}" if rhs != "1" else f"{lhs} = {name}")
    if sys.mode == "up":
        lines.append("lam = eta*zeta, mu = zeta*xi, nu = xi*eta, pi = xi*eta*zeta")
    else:
        lines.append("xi = mu*nu, eta = nu*lam, zeta = lam*mu, pi = lam*mu*nu")
    return lines


def _mono(exps: Vec3) -> str:
    parts = []
    for name, x in zip("xyz", exps):
        if x == 1:
            parts.append(name)
        elif x > 1:
            parts.append(f"{name}^{x}")
    return "".join(parts) or "1"

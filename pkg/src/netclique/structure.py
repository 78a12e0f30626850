"""Explicit clique constructions in net graphs over GF(r^2) and the checks
that go with them: lines, Baker cliques, the inverse companion, conic
cliques and their Moebius correspondence, the closure clique C_{x,L}, its
size law and realizability, and the C_{y,N} example.

All vertices are codes of F = GF(r^2). The subfield GF(r) is the set of
codes k with (k-1) divisible by r+1, plus 0.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .cliques import (
    Clique,
    ResourceCapError,
    enumerate_maximal_cliques,
    is_clique,
    is_maximal_clique,
    perp_mask,
)
from .gf import FieldSpec, prime_power
from .netgraph import Graph, GraphError, NetSpec, bits_to_list, build_net_graph, mask_of


class TheoremViolation(AssertionError):
    """A computed object contradicts a proved statement; carries a witness."""

    def __init__(self, assertion: str, witness: dict):
        super().__init__(f"{assertion}: {json.dumps(witness)}")
        self.assertion = assertion
        self.witness = dict(witness, assertion=assertion)


def order_r(F: FieldSpec) -> int:
    if F.e % 2:
        raise GraphError(f"{F!r} is not a square-order field")
    return F.p ** (F.e // 2)


def subfield(F: FieldSpec) -> list[int]:
    return F.subfield(F.e // 2)


def in_subfield(F: FieldSpec, z: int) -> bool:
    return z == 0 or (z - 1) % (order_r(F) + 1) == 0


def subfield_primitive(F: FieldSpec) -> int:
    return F.exp(order_r(F) + 1)


# -- lines ----------------------------------------------------------------------

def line(F: FieldSpec, net: NetSpec, direction: int, offset: int = 0) -> Clique:
    """The coset beta**direction * GF(r) + offset."""
    if direction not in net.directions:
        raise GraphError(f"direction {direction} is not in the net")
    r = net.r
    scale = F.exp(direction)
    return tuple(sorted(F.add(F.mul(scale, t), offset) for t in subfield(F)))


def is_line(F: FieldSpec, net: NetSpec | None, c: Sequence[int]) -> bool:
    """True if c is a full line of AG(2, r) (with direction in the net, if given)."""
    r = order_r(F)
    c = list(c)
    if len(c) != r:
        return False
    classes = {(F.sub(v, c[0]) - 1) % (r + 1) for v in c[1:]}
    if len(classes) != 1:
        return False
    return net is None or classes.pop() in net.directions


# -- line / point configurations ---------------------------------------------------

@dataclass(frozen=True)
class LinePointConfig:
    net: NetSpec
    L: Clique
    x: int
    A: Clique

    def witness(self, **extra) -> dict:
        d = {
            "r": self.net.r,
            "m": self.net.m,
            "directions": self.net.sorted_directions(),
            "L": list(self.L),
            "x": self.x,
            "A": list(self.A),
        }
        d.update(extra)
        return d


def line_point_config(F: FieldSpec, g: Graph, net: NetSpec, L: Sequence[int], x: int) -> LinePointConfig:
    L = tuple(sorted(L))
    if x in L:
        raise GraphError("x lies on L")
    A = tuple(v for v in L if g.adjacent(x, v))
    cfg = LinePointConfig(net, L, x, A)
    if 0 < net.m < net.r + 1 and len(A) != net.m - 1:
        raise TheoremViolation("|x^perp cap L| = m-1", cfg.witness())
    return cfg


def net_from_trace(F: FieldSpec, A: Iterable[int], x: int | None = None) -> NetSpec:
    """The net in which L = GF(r) is a line and x^perp cap L = A."""
    r = order_r(F)
    x = F.beta if x is None else x
    dirs = {0} | {(F.sub(x, a) - 1) % (r + 1) for a in A}
    return NetSpec(r, frozenset(dirs))


def standard_config(F: FieldSpec, A: Iterable[int], g: Graph | None = None):
    """(graph, config) with L = GF(r), x = beta and trace A."""
    A = sorted(A)
    net = net_from_trace(F, A)
    if g is None:
        g = build_net_graph(F, net, verify=False)
    cfg = line_point_config(F, g, net, subfield(F), F.beta)
    assert list(cfg.A) == A
    return g, cfg


# -- Baker cliques and relatives -----------------------------------------------------

def baker_clique(F: FieldSpec, g: Graph, cfg: LinePointConfig, maximal: bool = False) -> Clique:
    """{x} cup (x^perp cap L); with maximal=True its unique maximal extension."""
    c = tuple(sorted((cfg.x,) + cfg.A))
    if not is_clique(g, c):
        raise TheoremViolation("Baker set is a clique", cfg.witness())
    if maximal:
        return cxl_closure(g, cfg)
    return c


def inverse_companion(F: FieldSpec, g: Graph, c: Sequence[int]) -> Clique:
    if 0 not in c:
        raise GraphError("clique must contain 0")
    out = tuple(sorted([0] + [F.inv(v) for v in c if v]))
    if not is_clique(g, out):
        raise TheoremViolation("inverse companion is a clique", {"clique": list(c)})
    return out


# -- conic cliques ------------------------------------------------------------------

def epsilon(F: FieldSpec) -> int:
    r = order_r(F)
    return F.exp((r + 1) // 2)


def goryainov_set(F: FieldSpec, g: Graph | None = None) -> tuple[Clique, str]:
    """Q = <omega^2> (omega = beta**(r-1)), plus 0 when r = 3 mod 4.

    Returns (set, "clique") for r = 3 mod 4 and (set, "coclique") for
    r = 1 mod 4, after checking maximality in the Paley graph ``g``.
    """
    r = order_r(F)
    if r % 2 == 0:
        raise GraphError("conic cliques need odd r")
    Q = [F.exp(2 * (r - 1) * i) for i in range((r + 1) // 2)]
    if r % 4 == 3:
        out, kind = tuple(sorted(Q + [0])), "clique"
        expect = (r + 3) // 2
    else:
        out, kind = tuple(sorted(Q)), "coclique"
        expect = (r + 1) // 2
    assert len(set(out)) == expect
    if g is not None:
        target = g if kind == "clique" else g.complement()
        if not is_maximal_clique(target, out):
            raise TheoremViolation(f"conic set is a maximal {kind}", {"r": r, "set": list(out)})
    return out, kind


def split_coordinates(F: FieldSpec, z: int) -> tuple[int, int]:
    """(x, y) in GF(r) with z = x + y*epsilon (odd r)."""
    r = order_r(F)
    eps = epsilon(F)
    conj = F.frobenius(z, F.e // 2)
    two = F.from_int(2)
    x = F.div(F.add(z, conj), two)
    y = F.div(F.sub(z, conj), F.mul(two, eps))
    assert in_subfield(F, x) and in_subfield(F, y)
    return x, y


def check_norm_identity(F: FieldSpec) -> int:
    """N(w^(2i) - 1) = -4 d y^2 for every w = x + y eps of norm 1; returns #checked."""
    r = order_r(F)
    eps = epsilon(F)
    d = F.mul(eps, eps)
    four = F.from_int(4)
    count = 0
    for i in range(r + 1):
        w = F.exp((r - 1) * i)
        assert F.norm_to_subfield(w) == 1
        _, y = split_coordinates(F, w)
        lhs = F.norm_to_subfield(F.sub(F.mul(w, w), 1))
        rhs = F.neg(F.mul(four, F.mul(d, F.mul(y, y))))
        if lhs != rhs:
            raise TheoremViolation("norm identity", {"r": r, "omega_power": i})
        count += 1
    return count


def mobius(F: FieldSpec, z: int) -> int:
    """z -> eps^-1 (1 + 2/(z-1)), with 1 -> eps^-1."""
    einv = F.inv(epsilon(F))
    if z == 1:
        return einv
    two = F.from_int(2)
    return F.mul(einv, F.add(1, F.div(two, F.sub(z, 1))))


@dataclass
class MobiusReport:
    r: int
    source: Clique
    image: Clique
    target: Clique
    ok: bool


def goryainov_mobius_map(F: FieldSpec, g: Graph) -> MobiusReport:
    """Check the Moebius map sends the conic set onto {x}(+{x^r}) cup (x^perp cap GF(r))."""
    r = order_r(F)
    src, _ = goryainov_set(F)
    image = tuple(sorted(mobius(F, z) for z in src))
    x = F.inv(epsilon(F))
    trace = [v for v in subfield(F) if g.adjacent(x, v)]
    head = [x] if r % 4 == 1 else [x, F.frobenius(x, F.e // 2)]
    target = tuple(sorted(head + trace))
    ok = image == target and len(set(image)) == len(src)
    if not ok:
        raise TheoremViolation("Moebius correspondence", {"r": r, "image": list(image), "target": list(target)})
    return MobiusReport(r, src, image, target, ok)


# -- the closure clique C_{x,L} ---------------------------------------------------------

def cxl_closure(g: Graph, cfg: LinePointConfig) -> Clique:
    """({x} cup A)^perp, checked to be a maximal clique."""
    seed = (cfg.x,) + cfg.A
    c = tuple(bits_to_list(perp_mask(g, seed)))
    if not is_clique(g, c):
        raise TheoremViolation("({x} cup A)^perp is a clique", cfg.witness(clique=list(c)))
    if not is_maximal_clique(g, c):
        raise TheoremViolation("({x} cup A)^perp is maximal", cfg.witness(clique=list(c)))
    return c


@dataclass
class UniquenessReport:
    closure: Clique
    maximal_cliques: list[Clique]
    unique: bool


def verify_unique_maximal(g: Graph, cfg: LinePointConfig) -> UniquenessReport:
    seed = (cfg.x,) + cfg.A
    found = sorted(enumerate_maximal_cliques(g, seed=seed))
    closure = cxl_closure(g, cfg)
    rep = UniquenessReport(closure, found, found == [closure])
    if not rep.unique:
        raise TheoremViolation("unique maximal clique through {x} cup A",
                               cfg.witness(clique=list(closure), found=[list(c) for c in found]))
    return rep


def two_line_containment(F: FieldSpec, cfg: LinePointConfig, closure: Sequence[int]) -> bool:
    """C minus L lies on one net line through x."""
    r = cfg.net.r
    off = [v for v in closure if v not in set(cfg.L)]
    classes = {(F.sub(v, cfg.x) - 1) % (r + 1) for v in off if v != cfg.x}
    return len(classes) <= 1 and classes <= cfg.net.directions


# -- size law ---------------------------------------------------------------------------

def is_power_of(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True, order=True)
class SizeCertificate:
    r: int
    m: int
    h: int
    f: int

    @property
    def p(self) -> int:
        return prime_power(self.r)[0]

    @property
    def size(self) -> int:
        return self.m - 1 + self.h * self.p**self.f

    def divisibility_ok(self) -> bool:
        p, r, m, pf = self.p, self.r, self.m, self.p**self.f
        return gcd(r, m - 1) % pf == 0 and gcd(gcd(r - 1, m - 2), pf - 1) % self.h == 0

    def excluded(self) -> str | None:
        """Which pattern (a), (b), (c) rules this certificate out, if any."""
        p, r, m, h, pf = self.p, self.r, self.m, self.h, self.p**self.f
        if (m - 1) % p:
            return None
        if m - 1 == pf and not is_power_of(h + 1, p):
            return "a"
        if m - 1 == (h + 1) * pf and is_power_of(h + 1, p):
            return "b"
        if m - 1 == r - 2 * pf and h != 2:
            return "c"
        return None


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def cxl_size_candidates(r: int, m: int) -> list[SizeCertificate]:
    if not 2 < m < r - 1:
        raise GraphError(f"size law needs 2 < m < r-1, got r={r}, m={m}")
    p, _ = prime_power(r)
    out = []
    f = 0
    while gcd(r, m - 1) % p**f == 0:
        for h in divisors(gcd(gcd(r - 1, m - 2), p**f - 1)):
            cert = SizeCertificate(r, m, h, f)
            if cert.excluded() is None:
                out.append(cert)
        f += 1
    return sorted(out)


# -- the group of C_{x,L} ---------------------------------------------------------------

Affine1 = tuple[int, int]  # z -> c z + d over GF(r)


def agl1(F: FieldSpec) -> list[Affine1]:
    sub = subfield(F)
    return [(c, d) for c in sub if c for d in sub]


def _apply1(F: FieldSpec, g: Affine1, z: int) -> int:
    return F.add(F.mul(g[0], z), g[1])


def _fixed_point(F: FieldSpec, g: Affine1) -> int | None:
    c, d = g
    if c == 1:
        return None
    return F.div(F.neg(d), F.sub(c, 1))


def admissible_group(F: FieldSpec, A: Iterable[int]) -> list[Affine1]:
    """Affine maps of GF(r) preserving A whose unique fixed point (if any) is in A."""
    A = set(A)
    out = []
    for g in agl1(F):
        if {_apply1(F, g, a) for a in A} != A:
            continue
        fp = _fixed_point(F, g)
        if fp is None or fp in A:
            out.append(g)
    return out


def group_shape(F: FieldSpec, G: Sequence[Affine1]) -> tuple[int, int]:
    """(h, f) with |G| = h p^f, p^f the number of translations in G."""
    pf = sum(1 for c, _ in G if c == 1)
    _, f = prime_power(pf) if pf > 1 else (F.p, 0)
    return len(G) // pf, f


@dataclass
class StabilizerReport:
    group: list[Affine1]
    closure: Clique
    is_group: bool
    transitive: bool
    fixed_points: list[int]
    fixed_points_one_orbit: bool
    fixed_points_in_A: bool
    matches_admissible: bool

    @property
    def ok(self) -> bool:
        return (self.is_group and self.transitive and self.fixed_points_one_orbit
                and self.fixed_points_in_A and self.matches_admissible)


def _compose1(F, g, h):
    """g after h."""
    return (F.mul(g[0], h[0]), F.add(F.mul(g[0], h[1]), g[1]))


def verify_stabilizer_structure(F: FieldSpec, g: Graph, cfg: LinePointConfig) -> StabilizerReport:
    """Group G_{x,L} of z -> cz + d with image of x in C_{x,L} minus L (needs L = GF(r))."""
    if tuple(cfg.L) != tuple(subfield(F)):
        raise GraphError("normalize the configuration so that L = GF(r)")
    C = cxl_closure(g, cfg)
    off = set(C) - set(cfg.L)
    G = [h for h in agl1(F) if _apply1(F, h, cfg.x) in off]
    Gset = set(G)
    is_group = (1, 0) in Gset and all(_compose1(F, a, b) in Gset for a in G for b in G)
    transitive = {_apply1(F, h, cfg.x) for h in G} == off
    fps = sorted({fp for h in G if (fp := _fixed_point(F, h)) is not None})
    one_orbit = True
    if fps:
        orbit = {_apply1(F, h, fps[0]) for h in G}
        one_orbit = orbit == set(fps)
    in_A = set(fps) <= set(cfg.A)
    matches = Gset == set(admissible_group(F, cfg.A))
    rep = StabilizerReport(sorted(G), C, is_group, transitive, fps, one_orbit, in_A, matches)
    if not rep.ok:
        raise TheoremViolation("structure of G_{x,L}", cfg.witness(clique=list(C)))
    return rep


def normalize_config(F: FieldSpec, g: Graph, cfg: LinePointConfig):
    """Relabel by z -> (z - b)/beta^i so that L becomes GF(r)."""
    r = cfg.net.r
    L = cfg.L
    b = L[0]
    i = (F.sub(L[1], b) - 1) % (r + 1)
    scale = F.inv(F.exp(i))

    def f(z):
        return F.mul(F.sub(z, b), scale)

    net = NetSpec(r, frozenset((d - i) % (r + 1) for d in cfg.net.directions))
    g2 = build_net_graph(F, net, verify=False)
    cfg2 = line_point_config(F, g2, net, [f(v) for v in L], f(cfg.x))
    return g2, cfg2


# -- constructions of A with a prescribed C_{x,L} size ----------------------------------------

class ConstructionFailed(RuntimeError):
    pass


@dataclass
class Construction:
    cert: SizeCertificate
    A: Clique
    group: list[Affine1]
    case: str
    net: NetSpec = None
    measured: int | None = None


def _sub_add(F, xs):
    s = 0
    for v in xs:
        s = F.add(s, v)
    return s


def _span(F: FieldSpec, basis: Sequence[int], scalars: Sequence[int]) -> frozenset[int]:
    """Additive span of basis with coefficients from the scalar subfield."""
    out = {0}
    for b in basis:
        out = {F.add(v, F.mul(s, b)) for v in out for s in scalars}
    return frozenset(out)


def _multiplier_field(F: FieldSpec, S: frozenset[int]) -> int:
    """Order of the largest subfield K of GF(r) with K S = S."""
    best = 1
    r = order_r(F)
    p, k = prime_power(r)
    for d in range(1, k + 1):
        if k % d:
            continue
        K = F.subfield(d)
        if all(F.mul(c, s) in S for c in K for s in S):
            best = p**d
    return best


def _subspaces_containing_one(F: FieldSpec, d: int, size: int):
    """GF(p^d)-subspaces of GF(r) of the given size containing 1, in lexicographic basis order."""
    scalars = F.subfield(d)
    dim = 0
    while (F.p**d) ** dim < size:
        dim += 1
    if (F.p**d) ** dim != size:
        return
    others = [v for v in subfield(F) if v not in (0, 1)]
    seen = set()
    for rest in itertools.combinations(others, dim - 1):
        S = _span(F, (1,) + rest, scalars)
        if len(S) != size or S in seen:
            continue
        seen.add(S)
        yield S


def _expected_order_ok(F, A, cert) -> list[Affine1] | None:
    G = admissible_group(F, A)
    if len(G) == cert.h * cert.p**cert.f and group_shape(F, G) == (cert.h, cert.f):
        return G
    return None


def _orbits_of(F: FieldSpec, G: Sequence[Affine1], points: Iterable[int]) -> list[frozenset[int]]:
    points = sorted(points)
    done = set()
    out = []
    for z in points:
        if z in done:
            continue
        orb = frozenset(_apply1(F, g, z) for g in G)
        done |= orb
        out.append(orb)
    return out


def _group_closure(F: FieldSpec, gens: Sequence[Affine1]) -> list[Affine1]:
    seen = {(1, 0)}
    frontier = [(1, 0)]
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = _compose1(F, b, a)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


def _orbit_union_search(F, cert, G, required: frozenset[int], n_extra: int, case: str) -> Construction:
    """First union of ``required`` with n_extra further G-orbits whose admissible group is G."""
    rest = [o for o in _orbits_of(F, G, subfield(F)) if not o & required]
    for combo in itertools.combinations(rest, n_extra):
        A = set(required).union(*combo)
        got = _expected_order_ok(F, A, cert)
        if got is not None and set(got) == set(G):
            return Construction(cert, tuple(sorted(A)), got, case)
    raise ConstructionFailed(f"no admissible A for {cert}")


def _sum_zero_choice(F: FieldSpec, n: int) -> list[int] | None:
    """n distinct nonzero elements of GF(r) summing to zero (greedy, lexicographic prefix)."""
    r = order_r(F)
    nonzero = [v for v in subfield(F) if v]
    if n > (r - 1) // 2:
        comp = _sum_zero_choice(F, r - 1 - n)
        if comp is None:
            return None
        return sorted(set(nonzero) - set(comp))
    if n == 0:
        return []
    if n == 1:
        return None
    for prefix in itertools.combinations(nonzero, n - 2):
        s = _sub_add(F, prefix)
        banned = set(prefix) | {F.sub(F.neg(s), a) for a in prefix} | {0, F.neg(s)}
        for b in nonzero:
            if b in banned or F.add(b, b) == F.neg(s):
                continue
            last = F.sub(F.neg(s), b)
            return sorted(list(prefix) + [b, last])
    return None


def construct_A(F: FieldSpec, cert: SizeCertificate) -> Construction:
    """A subset A of GF(r), |A| = m-1, whose admissible group has order h p^f exactly."""
    r, m, h, f, p = cert.r, cert.m, cert.h, cert.f, cert.p
    if order_r(F) != r:
        raise GraphError(f"{F!r} is not GF({r}^2)")
    if not cert.divisibility_ok() or cert.excluded():
        raise GraphError(f"invalid certificate {cert}")
    pf = p**f
    gamma = subfield_primitive(F)
    n = m - 1
    if (m - 1) % p:
        assert f == 0
        if h > 1:
            H = [F.pow(gamma, (r - 1) // h * j) for j in range(h)]
            A = {0}
            for i in range((m - 2) // h):
                A |= {F.mul(F.pow(gamma, i), eta) for eta in H}
            G = [(eta, 0) for eta in H]
            if _expected_order_ok(F, A, cert) is not None:
                return Construction(cert, tuple(sorted(A)), G, "coprime, h>1: 0 and cosets of H")
            return _orbit_union_search(F, cert, G, frozenset({0}), (m - 2) // h, "coprime, h>1: search")
        A = _sum_zero_choice(F, n)
        if A is not None and _expected_order_ok(F, A, cert) is not None:
            return Construction(cert, tuple(A), [(1, 0)], "coprime, h=1: nonzero sum-zero set")
        return _orbit_union_search(F, cert, [(1, 0)], frozenset(), n, "coprime, h=1: search")
    if n == pf:
        d = 1
        while p**d != h + 1:
            d += 1
        for S in _subspaces_containing_one(F, d, pf):
            if _multiplier_field(F, S) != p**d:
                continue
            G = _expected_order_ok(F, S, cert)
            if G is not None:
                return Construction(cert, tuple(sorted(S)), G, "m-1 = p^f: subspace")
        raise ConstructionFailed(f"no subspace for {cert}")
    if h > 1:
        a = F.pow(gamma, (r - 1) // h)
        c = 1
        while (p**c - 1) % h:
            c += 1
        for B in _subspaces_containing_one(F, c, pf) if pf > 1 else [frozenset({0})]:
            gens = [(a, 0)] + [(1, b) for b in B if b]
            G = _group_closure(F, gens)
            if len(G) != h * pf:
                continue
            try:
                return _orbit_union_search(F, cert, G, B, (n - pf) // (h * pf), "p | m-1, h>1: B plus orbits")
            except ConstructionFailed:
                continue
        raise ConstructionFailed(f"no construction for {cert}")
    if f == 0:
        G = [(1, 0)]
        for combo in itertools.combinations(subfield(F), n):
            if _sub_add(F, combo) == 0:
                continue
            if _expected_order_ok(F, combo, cert) is not None:
                return Construction(cert, combo, G, "p | m-1, trivial group: nonzero sum")
        return _orbit_union_search(F, cert, G, frozenset(), n, "p | m-1, trivial group: search")
    for B in _subspaces_containing_one(F, 1, pf):
        G = _group_closure(F, [(1, b) for b in B if b])
        try:
            return _orbit_union_search(F, cert, G, frozenset(), n // pf, "p | m-1, h=1: cosets of B")
        except ConstructionFailed:
            continue
    raise ConstructionFailed(f"no construction for {cert}")


def realize(F: FieldSpec, cert: SizeCertificate) -> Construction:
    """Build A, the net it defines, and measure |C_{x,L}| there."""
    con = construct_A(F, cert)
    g, cfg = standard_config(F, con.A)
    con.net = cfg.net
    con.measured = len(cxl_closure(g, cfg))
    return con


# -- the fixed-net example C_{y,N} ----------------------------------------------------------

@dataclass
class CynReport:
    r: int
    net: NetSpec
    clique_L: Clique
    size_L: int
    size_N: int
    expected_N: int
    reflection_ok: bool

    @property
    def ok(self) -> bool:
        return self.size_L == self.r and self.size_N == self.expected_N and self.reflection_ok


def cyn_example(F: FieldSpec) -> CynReport:
    r = order_r(F)
    if r % 2 == 0 or r <= 9:
        raise GraphError("the C_{y,N} example needs odd r > 9")
    H = [v for v in subfield(F) if v and _is_subfield_square(F, v)]
    x, y = 1, F.beta  # x on L = GF(r), y on M = beta GF(r)
    C = tuple(sorted({0} | {F.mul(x, h) for h in H} | {F.mul(y, h) for h in H}))
    dirs = {0, 1} | {(F.sub(F.mul(x, t), y) - 1) % (r + 1) for t in H}
    net = NetSpec(r, frozenset(dirs))
    assert net.m == (r + 3) // 2
    g = build_net_graph(F, net, verify=False)
    if not is_clique(g, C) or len(C) != r:
        raise TheoremViolation("{0} cup xH cup yH is an r-clique", {"r": r})
    cfg_L = line_point_config(F, g, net, subfield(F), y)
    CL = cxl_closure(g, cfg_L)
    if CL != C:
        raise TheoremViolation("C = C_{y,L}", {"r": r, "C": list(C), "C_yL": list(CL)})
    w = F.sub(y, x)
    dN = (w - 1) % (r + 1)
    N = line(F, net, dN, 0)
    cfg_N = line_point_config(F, g, net, N, y)
    CN = cxl_closure(g, cfg_N)
    N0 = set(cfg_N.A)
    reflection_ok = {F.sub(w, z) for z in N0} == N0
    expected = (r + 5) // 2 if r % 4 == 1 else (r + 3) // 2
    rep = CynReport(r, net, C, len(CL), len(CN), expected, reflection_ok)
    if not rep.ok:
        raise TheoremViolation("|C_{y,N}| formula", {"r": r, "size_N": len(CN), "expected": expected})
    return rep


def _is_subfield_square(F: FieldSpec, v: int) -> bool:
    """v in GF(r)^* is a square of GF(r)^*."""
    r = order_r(F)
    return ((v - 1) // (r + 1)) % 2 == 0


# -- non-line maximum cliques ------------------------------------------------------------------

def plane_coordinates(F: FieldSpec) -> tuple[dict[int, tuple[int, int]], dict[tuple[int, int], int]]:
    """z = u + v beta with u, v in GF(r)."""
    sub = subfield(F)
    to, back = {}, {}
    for u in sub:
        for v in sub:
            z = F.add(u, F.mul(v, F.beta))
            to[z] = (u, v)
            back[(u, v)] = z
    assert len(to) == F.q
    return to, back


def gammal2_generators(F: FieldSpec) -> list[list[int]]:
    """Permutations of GF(r^2) = GF(r)^2 generating GammaL(2, r)."""
    to, back = plane_coordinates(F)
    gamma = subfield_primitive(F)
    maps = [
        lambda u, v: (F.mul(gamma, u), v),
        lambda u, v: (F.add(u, v), v),
        lambda u, v: (v, u),
        lambda u, v: (F.frobenius(u, 1), F.frobenius(v, 1)),
    ]
    return [[back[fn(*to[z])] for z in range(F.q)] for fn in maps]


@dataclass
class NonlineReport:
    r: int
    m: int
    direction_sets: int
    cliques: int  # non-line r-cliques through 0, over all direction sets
    orbits: list[Clique]


def search_nonline_max_cliques(F: FieldSpec, m: int, max_direction_sets: int = 5000) -> NonlineReport:
    """Non-line r-cliques over every m-set of directions, up to AGammaL(2, r)."""
    from math import comb

    from .autgroup import UnionFind, act_on_clique

    r = order_r(F)
    if comb(r + 1, m) > max_direction_sets:
        raise ResourceCapError(f"{comb(r + 1, m)} direction sets exceed the budget {max_direction_sets}")
    found: set[Clique] = set()
    for D in itertools.combinations(range(r + 1), m):
        net = NetSpec(r, frozenset(D))
        g = build_net_graph(F, net, verify=False)
        for c in enumerate_maximal_cliques(g, seed=(0,), min_size=r):
            if len(c) == r and not is_line(F, None, c):
                found.add(c)
    gens = gammal2_generators(F)
    uf = UnionFind()
    for c in found:
        uf.add(c)
    for c in found:
        for perm in gens:
            d = act_on_clique(perm, c)
            if d in uf.parent:
                uf.union(c, d)
            else:
                raise AssertionError("image of a non-line clique is not in the search set")
        for t in c:
            d = tuple(sorted(F.sub(v, t) for v in c))
            uf.union(c, d)
    reps = sorted({uf.find(c) for c in found})
    return NonlineReport(r, m, comb(r + 1, m), len(found), reps)


def goryainov_yip_degree(r: int) -> int:
    """Smallest degree with non-line maximum cliques: (r+3)/2 for prime r, s^(e-1)+1 for r = s^e."""
    p, k = prime_power(r)
    if k == 1:
        return (r + 3) // 2
    e = min(e for e in range(2, k + 1) if k % e == 0)
    s = p ** (k // e)
    return s ** (e - 1) + 1

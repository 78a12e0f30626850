"""Automorphism groups of the field graphs and orbit classification of cliques.

Two group models are used:

* ``AffineGroup`` -- maps z -> a * z**(p**i) + b over GF(q) containing every
  translation. The linear parts form a subgroup K of GammaL(1, q), stored as
  pairs (log a, i). Cliques are classified by a canonical image: the least
  sorted image among those that contain 0 and a K-orbit representative of
  the connection set. This needs no closed clique stream, so a table can be
  built from the cliques through one edge per edge orbit.
* ``PermGroup`` -- explicit permutation generators (brute-force search,
  Taylor extensions). Orbits are found with union-find over a stream that
  is closed under the group.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .cliques import Clique, ResourceCapError
from .gf import FieldSpec
from .netgraph import Graph, GraphError, NetSpec, iter_bits, peisert_connection_set, taylor_index


class GroupError(ValueError):
    pass


class BruteForceCapExceeded(ResourceCapError, GroupError):
    pass


# -- group elements ---------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """z -> a * z**(p**i) + b, with field codes a != 0 and b."""

    a: int
    b: int
    i: int = 0

    def apply(self, F: FieldSpec, z: int) -> int:
        return F.add(F.mul(self.a, F.frobenius(z, self.i)), self.b)

    def compose(self, F: FieldSpec, other: "GroupElement") -> "GroupElement":
        """self after other."""
        a = F.mul(self.a, F.frobenius(other.a, self.i))
        b = F.add(F.mul(self.a, F.frobenius(other.b, self.i)), self.b)
        return GroupElement(a, b, (self.i + other.i) % F.e)

    def inverse(self, F: FieldSpec) -> "GroupElement":
        j = (-self.i) % F.e
        a = F.frobenius(F.inv(self.a), j)
        b = F.neg(F.mul(a, F.frobenius(self.b, j)))
        return GroupElement(a, b, j)

    def perm(self, F: FieldSpec) -> list[int]:
        z = np.arange(F.q, dtype=np.int64)
        return F.vadd(F.vmul(self.a, F.vfrob(z, self.i)), self.b).tolist()

    def linear_part(self) -> tuple[int, int]:
        return (self.a - 1, self.i)

    @staticmethod
    def identity() -> "GroupElement":
        return GroupElement(1, 0, 0)

    @staticmethod
    def homothety(F: FieldSpec, center: int, ratio: int) -> "GroupElement":
        """T_{center, ratio}: z -> center + ratio (z - center)."""
        return GroupElement(ratio, F.sub(center, F.mul(ratio, center)), 0)


def is_automorphism(g: Graph, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(range(g.n)):
        return False
    for v in range(g.n):
        image = 0
        for w in iter_bits(g.rows[v]):
            image |= 1 << perm[w]
        if image != g.rows[perm[v]]:
            return False
    return True


def act_on_clique(perm: Sequence[int], c: Iterable[int]) -> Clique:
    return tuple(sorted(perm[v] for v in c))


# -- affine groups ------------------------------------------------------------

def _close_linear(F: FieldSpec, gens: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    n, e, p = F.n, F.e, F.p
    gens = [(s % n, i % e) for s, i in gens]
    seen = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for s1, i1 in frontier:
            for s2, i2 in gens:
                k = ((s1 * pow(p, i2, n) + s2) % n, (i1 + i2) % e)  # gen after element
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
        frontier = nxt
    return frozenset(seen)


@dataclass(eq=False)
class AffineGroup:
    F: FieldSpec
    K: frozenset
    kind: str = "affine"
    name: str = ""
    linear_generators: tuple = ()
    certified_full: bool = True
    flags: list[str] = field(default_factory=list)
    _to_rep: dict = field(default=None, repr=False)

    @classmethod
    def generated(cls, F: FieldSpec, linear_gens, **kw) -> "AffineGroup":
        linear_gens = tuple((s % F.n, i % F.e) for s, i in linear_gens)
        return cls(F, _close_linear(F, linear_gens), linear_generators=linear_gens, **kw)

    @property
    def order(self) -> int:
        return self.F.q * len(self.K)

    def contains_linear(self, a: int, i: int) -> bool:
        return a != 0 and (a - 1, i % self.F.e) in self.K

    def generators(self) -> list[GroupElement]:
        F = self.F
        gens = [GroupElement(1, 1, 0)]
        if F.e > 1:
            gens.append(GroupElement(1, F.beta, 0))
        gens.extend(GroupElement(F.exp(s), 0, i) for s, i in self.linear_generators)
        return gens

    def generator_perms(self) -> list[list[int]]:
        return [g.perm(self.F) for g in self.generators()]

    def elements(self) -> Iterable[GroupElement]:
        F = self.F
        for s, i in sorted(self.K):
            for b in range(F.q):
                yield GroupElement(F.exp(s), b, i)

    def linear_image(self, k: tuple[int, int], z: int) -> int:
        s, i = k
        if z == 0:
            return 0
        F = self.F
        return ((z - 1) * pow(F.p, i, F.n) + s) % F.n + 1

    def orbit_reps(self, points: Iterable[int]) -> list[int]:
        """Least code in each K-orbit meeting ``points``."""
        points = set(points)
        reps = []
        done = set()
        for z in sorted(points):
            if z in done:
                continue
            orb = {self.linear_image(k, z) for k in self.K}
            done |= orb
            reps.append(min(orb))
        return reps

    def _rep_table(self):
        if self._to_rep is None:
            F = self.F
            n, e, p = F.n, F.e, F.p
            rep = [0] * F.q
            for z in range(1, F.q):
                if rep[z]:
                    continue
                orb = {self.linear_image(k, z) for k in self.K}
                m = min(orb)
                for w in orb:
                    rep[w] = m
            to_rep = [()] * F.q
            for w in range(1, F.q):
                ks = []
                for i in range(e):
                    s = (rep[w] - 1 - (w - 1) * pow(p, i, n)) % n
                    if (s, i) in self.K:
                        ks.append((s, i))
                to_rep[w] = tuple(ks)
            self._to_rep = (rep, to_rep)
        return self._to_rep

    def canonical_form(self, clique: Sequence[int]) -> tuple[Clique, int]:
        """(canonical image, stabilizer order) of a clique of size >= 1."""
        F = self.F
        c = np.asarray(sorted(clique), dtype=np.int64)
        s = len(c)
        if s == 0:
            return (), self.order
        if s == 1:
            return (0,), len(self.K)
        _, to_rep = self._rep_table()
        diff = F.vadd(c[None, :], F.vneg(c)[:, None])  # diff[u, j] = c_j - c_u
        frob = np.stack([F.vfrob(diff, i) for i in range(F.e)])
        us, ss, iis = [], [], []
        for u in range(s):
            row = diff[u].tolist()
            for v in range(s):
                if v != u:
                    for sk, i in to_rep[row[v]]:
                        us.append(u)
                        ss.append(sk)
                        iis.append(i)
        us = np.asarray(us)
        ss = np.asarray(ss, dtype=np.int64)
        iis = np.asarray(iis)
        base = frob[iis, us, :]
        imgs = np.where(base == 0, 0, (base - 1 + ss[:, None]) % F.n + 1)
        imgs.sort(axis=1)
        best = np.lexsort(imgs.T[::-1])[0]
        key = imgs[best]
        hits = (imgs == key).all(axis=1)
        stab = len(set(zip(us[hits].tolist(), ss[hits].tolist(), iis[hits].tolist())))
        return tuple(key.tolist()), stab

    def stabilizer_order_direct(self, clique: Sequence[int]) -> int:
        """Count group elements fixing the clique setwise (pointwise evaluation)."""
        F = self.F
        C = sorted(clique)
        if len(C) < 2:
            return self.canonical_form(C)[1]
        target = set(C)
        c0, c1 = C[0], C[1]
        w = F.sub(c1, c0)
        count = 0
        for u in C:
            for v in C:
                if u == v:
                    continue
                for i in range(F.e):
                    a = F.div(F.sub(v, u), F.frobenius(w, i))
                    if not self.contains_linear(a, i):
                        continue
                    b = F.sub(u, F.mul(a, F.frobenius(c0, i)))
                    g = GroupElement(a, b, i)
                    if all(g.apply(F, z) in target for z in C):
                        count += 1
        return count

    def check_preserves(self, g: Graph) -> bool:
        return all(is_automorphism(g, perm) for perm in self.generator_perms())


def paley_group(F: FieldSpec) -> AffineGroup:
    if F.q % 4 != 1:
        raise GroupError(f"Paley group needs q = 1 mod 4, got {F.q}")
    grp = AffineGroup.generated(F, [(2, 0), (0, 1)], kind="paley", name=f"Aut P({F.q})")
    assert grp.order == F.e * F.q * (F.q - 1) // 2
    return grp


PEISERT_EXCEPTIONS = {9: 2, 49: 3, 81: 6}


def peisert_group(F: FieldSpec) -> AffineGroup:
    if F.p % 4 != 3 or F.e % 2:
        raise GroupError(f"Peisert group needs q = p^f, p = 3 mod 4, f even; got {F!r}")
    grp = AffineGroup.generated(F, [(4, 0), (1, 1)], kind="peisert", name=f"Aut P*({F.q})")
    assert grp.order == F.e * F.q * (F.q - 1) // 4
    factor = PEISERT_EXCEPTIONS.get(F.q)
    if factor:
        grp.certified_full = False
        grp.flags.append(f"full group of P*({F.q}) is {factor} times larger; orbits may merge")
    return grp


def net_linear_group(F: FieldSpec, net: NetSpec) -> AffineGroup:
    """All z -> a z**(p**i) + b over GF(r^2) mapping the connection set to itself."""
    r = net.r
    if F.q != r * r:
        raise GroupError(f"{F!r} is not GF({r}^2)")
    k = r + 1
    D = net.directions
    allowed = [
        (t, i)
        for i in range(F.e)
        for t in range(k)
        if all((t + d * pow(F.p, i)) % k in D for d in D)
    ]
    K = frozenset((s, i) for t, i in allowed for s in range(t, F.n, k))
    gens = sorted(_small_generating_set(F, K))
    return AffineGroup(F, K, kind="net-linear", name=f"AGammaL stabilizer of net {sorted(D)}",
                       linear_generators=tuple(gens), certified_full=False)


def _small_generating_set(F: FieldSpec, K: frozenset) -> list[tuple[int, int]]:
    gens: list[tuple[int, int]] = []
    closure = frozenset({(0, 0)})
    for k in sorted(K):
        if k not in closure:
            gens.append(k)
            closure = _close_linear(F, gens)
            if closure == K:
                break
    assert closure == K
    return gens


# -- permutation groups -------------------------------------------------------

class UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


@dataclass(eq=False)
class PermGroup:
    n: int
    perms: list[list[int]]
    order: int | None = None
    kind: str = "explicit"
    name: str = ""
    certified_full: bool = False
    flags: list[str] = field(default_factory=list)

    def generator_perms(self) -> list[list[int]]:
        return self.perms

    def check_preserves(self, g: Graph) -> bool:
        return all(is_automorphism(g, p) for p in self.perms)

    def orbit(self, clique: Sequence[int]) -> set[Clique]:
        start = tuple(sorted(clique))
        seen = {start}
        dq = deque([start])
        while dq:
            c = dq.popleft()
            for p in self.perms:
                d = act_on_clique(p, c)
                if d not in seen:
                    seen.add(d)
                    dq.append(d)
        return seen

    def vertex_orbits(self) -> list[list[int]]:
        uf = UnionFind()
        for v in range(self.n):
            uf.add(v)
        for p in self.perms:
            for v in range(self.n):
                uf.union(v, p[v])
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(uf.find(v), []).append(v)
        return sorted(groups.values())


def orbit_of_clique(grp, clique: Sequence[int]) -> set[Clique]:
    if isinstance(grp, PermGroup):
        return grp.orbit(clique)
    return PermGroup(grp.F.q, grp.generator_perms()).orbit(clique)


def stabilizer_order(clique: Sequence[int], grp) -> int:
    """|G| / |orbit|, the orbit found by closure under the generators."""
    if grp.order is None:
        raise GroupError("group order unknown")
    size = len(orbit_of_clique(grp, clique))
    if grp.order % size:
        raise GroupError(f"orbit size {size} does not divide group order {grp.order}")
    return grp.order // size


# -- orbit classification -----------------------------------------------------

@dataclass
class OrbitInfo:
    representative: Clique
    size: int
    stabilizer: int | None
    length: int | None  # orbit length


@dataclass
class OrbitClassification:
    orbits: list[OrbitInfo]
    group_order: int | None
    flags: list[str] = field(default_factory=list)

    def histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for o in self.orbits:
            out[o.size] = out.get(o.size, 0) + 1
        return dict(sorted(out.items()))


def classify_orbits(cliques: Iterable[Sequence[int]], grp) -> OrbitClassification:
    """Partition cliques into orbits of ``grp``.

    For an AffineGroup the stream only needs to meet every orbit of
    interest; for a PermGroup it must be closed under the group.
    """
    if isinstance(grp, AffineGroup):
        found: dict[Clique, int] = {}
        for c in cliques:
            key, stab = grp.canonical_form(c)
            found.setdefault(key, stab)
        orbits = [
            OrbitInfo(key, len(key), stab, grp.order // stab)
            for key, stab in sorted(found.items(), key=lambda kv: (len(kv[0]), kv[0]))
        ]
        return OrbitClassification(orbits, grp.order, list(grp.flags))
    uf = UnionFind()
    members = []
    for c in cliques:
        c = tuple(sorted(c))
        uf.add(c)
        members.append(c)
    for c in members:
        for p in grp.perms:
            d = act_on_clique(p, c)
            if d not in uf.parent:
                raise GroupError(f"clique stream is not closed under the group: {d}")
            uf.union(c, d)
    classes: dict[Clique, int] = {}
    for c in members:
        root = uf.find(c)
        classes[root] = classes.get(root, 0) + 1
    orbits = []
    for root, length in sorted(classes.items(), key=lambda kv: (len(kv[0]), kv[0])):
        stab = grp.order // length if grp.order else None
        orbits.append(OrbitInfo(root, len(root), stab, length))
    return OrbitClassification(orbits, grp.order, list(grp.flags))


# -- brute-force automorphism search ------------------------------------------

def _refine(rows, cells: list[int]) -> list[int]:
    """Equitable refinement of an ordered partition (isomorphism-invariant)."""
    cells = list(cells)
    changed = True
    while changed:
        changed = False
        j = 0
        while j < len(cells):
            W = cells[j]
            out = []
            for C in cells:
                if C & (C - 1) == 0:
                    out.append(C)
                    continue
                groups: dict[int, int] = {}
                for v in iter_bits(C):
                    key = (rows[v] & W).bit_count()
                    groups[key] = groups.get(key, 0) | (1 << v)
                if len(groups) > 1:
                    changed = True
                    out.extend(groups[k] for k in sorted(groups))
                else:
                    out.append(C)
            cells = out
            j += 1
    return cells


def _individualize(cells: list[int], t: int, v: int) -> list[int]:
    bit = 1 << v
    return cells[:t] + [bit, cells[t] & ~bit] + cells[t + 1:]


def _shape(cells: list[int]) -> tuple[int, ...]:
    return tuple(c.bit_count() for c in cells)


def _first_big_cell(cells: list[int]) -> int:
    for t, c in enumerate(cells):
        if c & (c - 1):
            return t
    return -1


def brute_force_automorphisms(g: Graph, max_vertices: int = 100) -> PermGroup:
    """Full automorphism group by individualization-refinement backtracking.

    Returns generators (one per new orbit point per base level) and the
    exact order as the product of basic orbit lengths.
    """
    if g.n > max_vertices:
        raise BruteForceCapExceeded(f"brute-force search capped at {max_vertices} vertices, graph has {g.n}")
    rows = g.rows
    n = g.n
    if n == 0:
        return PermGroup(0, [], 1, kind="explicit", name="Aut(empty)", certified_full=True)
    parts = [_refine(rows, [g.all_mask])]
    base, targets = [], []
    while True:
        t = _first_big_cell(parts[-1])
        if t < 0:
            break
        b = (parts[-1][t] & -parts[-1][t]).bit_length() - 1
        base.append(b)
        targets.append(t)
        parts.append(_refine(rows, _individualize(parts[-1], t, b)))
    shapes = [_shape(p) for p in parts]
    leaf = [c.bit_length() - 1 for c in parts[-1]]
    depth = len(base)

    def leaf_perm(cells):
        perm = [0] * n
        for src, c in zip(leaf, cells):
            perm[src] = c.bit_length() - 1
        return perm

    def search(level, cells):
        if level == depth:
            perm = leaf_perm(cells)
            return perm if is_automorphism(g, perm) else None
        t = targets[level]
        for w in iter_bits(cells[t]):
            nxt = _refine(rows, _individualize(cells, t, w))
            if _shape(nxt) == shapes[level + 1]:
                found = search(level + 1, nxt)
                if found is not None:
                    return found
        return None

    gens: list[list[int]] = []
    order = 1
    for level in range(depth - 1, -1, -1):
        t = targets[level]
        b = base[level]
        orbit = _orbit_points(gens, b)
        for w in iter_bits(parts[level][t]):
            if w in orbit:
                continue
            cand = _refine(rows, _individualize(parts[level], t, w))
            if _shape(cand) != shapes[level + 1]:
                continue
            perm = search(level + 1, cand)
            if perm is not None:
                gens.append(perm)
                orbit = _orbit_points(gens, b)
        order *= len(orbit)
    return PermGroup(n, gens, order, kind="explicit", name=f"Aut({g.name})", certified_full=True)


def _orbit_points(gens, b: int) -> set[int]:
    seen = {b}
    stack = [b]
    while stack:
        v = stack.pop()
        for p in gens:
            w = p[v]
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


# -- Taylor extension of a Paley graph ------------------------------------------

def taylor_paley_group(F: FieldSpec) -> PermGroup:
    """2 x PSigmaL(2, q) acting on the Taylor extension of P(q).

    Generators: the Paley group acting on both sides, the side swap, and
    x^s -> (-1/x)^(s chi(x)) with 0^s <-> inf^s.
    """
    q = F.q
    v = q
    N = 2 * (q + 1)

    def idx(sign, base):
        return taylor_index(v, sign, base)

    perms = []
    for ge in paley_group(F).generators():
        p = [0] * N
        for sign in (1, -1):
            p[idx(sign, None)] = idx(sign, None)
            for x in range(q):
                p[idx(sign, x)] = idx(sign, ge.apply(F, x))
        perms.append(p)
    swap = [0] * N
    phi = [0] * N
    for sign in (1, -1):
        swap[idx(sign, None)] = idx(-sign, None)
        phi[idx(sign, None)] = idx(sign, 0)
        phi[idx(sign, 0)] = idx(sign, None)
        for x in range(q):
            swap[idx(sign, x)] = idx(-sign, x)
            if x:
                chi = 1 if F.is_square(x) else -1
                phi[idx(sign, x)] = idx(sign * chi, F.neg(F.inv(x)))
    perms += [swap, phi]
    order = F.e * q * (q * q - 1)
    return PermGroup(N, perms, order, kind="taylor", name=f"2 x PSigmaL(2,{q})", certified_full=True)


def peisert_exception_group(g: Graph, F: FieldSpec) -> PermGroup:
    grp = brute_force_automorphisms(g)
    expected = F.e * F.q * (F.q - 1) // 4 * PEISERT_EXCEPTIONS[F.q]
    if grp.order != expected:
        raise GroupError(f"brute-force order {grp.order} differs from expected {expected}")
    return grp


def orbit_stabilizer_consistent(grp, clique: Sequence[int]) -> bool:
    return len(orbit_of_clique(grp, clique)) * stabilizer_order(clique, grp) == grp.order

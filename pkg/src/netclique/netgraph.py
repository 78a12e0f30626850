"""Collinearity graphs of Desarguesian nets, Paley/Peisert graphs, Taylor
extensions, and strongly-regular / distance-regular parameter checks.

Graphs over a field use field codes as vertex indices, so vertex v is the
element with code v. Adjacency rows are Python ints used as bitsets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .gf import FieldSpec, prime_power


class GraphError(ValueError):
    pass


def iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits_to_list(x: int) -> list[int]:
    return list(iter_bits(x))


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph with bitset rows."""

    n: int
    rows: tuple[int, ...]
    labels: tuple | None = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise GraphError("row count does not match vertex count")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), **kw)

    @classmethod
    def from_matrix(cls, adj: np.ndarray, **kw) -> "Graph":
        adj = np.asarray(adj, dtype=bool)
        n = adj.shape[0]
        if adj.shape != (n, n):
            raise GraphError("adjacency matrix must be square")
        if adj.diagonal().any():
            raise GraphError("adjacency matrix has loops")
        if (adj != adj.T).any():
            raise GraphError("adjacency matrix is not symmetric")
        packed = np.packbits(adj, axis=1, bitorder="little")
        rows = tuple(int.from_bytes(r.tobytes(), "little") for r in packed)
        return cls(n, rows, **kw)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits_to_list(self.rows[v])

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            row = self.rows[u] >> (u + 1)
            for w in iter_bits(row):
                out.append((u, u + 1 + w))
        return out

    def n_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def complement(self) -> "Graph":
        full = self.all_mask
        rows = tuple((full ^ r) & ~(1 << v) for v, r in enumerate(self.rows))
        return Graph(self.n, rows, self.labels, name=f"complement({self.name})")

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        vs = sorted(vertices)
        index = {v: i for i, v in enumerate(vs)}
        edges = [(index[u], index[w]) for u in vs for w in self.neighbors(u) if w in index and u < w]
        return Graph.from_edges(len(vs), edges), vs

    def same_edges(self, other: "Graph") -> bool:
        return self.n == other.n and self.rows == other.rows

    def without_edge(self, u: int, v: int) -> "Graph":
        rows = list(self.rows)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows), self.labels, self.name + f"-({u},{v})")


# -- nets --------------------------------------------------------------

@dataclass(frozen=True)
class NetSpec:
    """Degree-m Desarguesian net of order r: m direction classes mod r+1.

    Class i is the coset beta**i * GF(r)^* of GF(r^2)^*; class 0 is GF(r)^*
    itself, so the subfield GF(r) is a line whenever 0 is a direction.
    """

    r: int
    directions: frozenset[int]

    def __post_init__(self):
        prime_power(self.r)
        dirs = frozenset(int(d) for d in self.directions)
        if any(not 0 <= d <= self.r for d in dirs):
            raise GraphError(f"direction classes must lie in [0, {self.r}]")
        object.__setattr__(self, "directions", dirs)

    @classmethod
    def canonical(cls, r: int, m: int) -> "NetSpec":
        """The net with direction classes {0, 1, ..., m-1}."""
        if not 0 <= m <= r + 1:
            raise GraphError(f"degree must lie in [0, {r + 1}]")
        return cls(r, frozenset(range(m)))

    @property
    def m(self) -> int:
        return len(self.directions)

    def sorted_directions(self) -> list[int]:
        return sorted(self.directions)

    def connection_set(self, F: FieldSpec) -> list[int]:
        check_field(F, self.r)
        k = self.r + 1
        return [c for c in range(1, F.q) if (c - 1) % k in self.directions]

    def direction_of(self, F: FieldSpec, z: int) -> int:
        """Direction class of the nonzero element z."""
        return (z - 1) % (self.r + 1)

    def srg_params(self) -> "SrgParams":
        return net_srg_params(self.r, self.m)


def check_field(F: FieldSpec, r: int) -> None:
    if F.q != r * r:
        raise GraphError(f"{F!r} is not GF({r}^2)")


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int

    def __post_init__(self):
        if self.k * (self.k - self.lam - 1) != (self.v - self.k - 1) * self.mu:
            raise GraphError(f"{self} violates k(k-lambda-1) = (v-k-1)mu")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)


@dataclass(frozen=True)
class SrgFailure:
    reason: str
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return False


def net_srg_params(n: int, m: int) -> SrgParams:
    if not 0 < m < n + 1:
        raise GraphError("net graph is strongly regular only for 0 < m < n+1")
    return SrgParams(n * n, m * (n - 1), (m - 1) * (m - 2) + n - 2, m * (m - 1))


def paley_params(q: int) -> SrgParams:
    t = (q - 1) // 4
    return SrgParams(q, 2 * t, t - 1, t)


def check_srg(g: Graph) -> SrgParams | SrgFailure:
    """Exhaustive count of degrees and common neighbours."""
    if g.n == 0:
        return SrgFailure("empty vertex set")
    k = g.degree(0)
    for v in range(g.n):
        if g.degree(v) != k:
            return SrgFailure("not regular", (0, v))
    if k == g.n - 1:
        return SrgFailure("complete graph")
    if k == 0:
        return SrgFailure("edgeless graph")
    lam = mu = None
    for u in range(g.n):
        ru = g.rows[u]
        for v in range(u + 1, g.n):
            c = (ru & g.rows[v]).bit_count()
            if ru >> v & 1:
                if lam is None:
                    lam = c
                elif c != lam:
                    return SrgFailure("lambda not constant", (u, v))
            else:
                if mu is None:
                    mu = c
                elif c != mu:
                    return SrgFailure("mu not constant", (u, v))
    return SrgParams(g.n, k, lam, mu)


def _cayley_graph(F: FieldSpec, S: list[int], name: str) -> Graph:
    q = F.q
    codes = np.arange(q, dtype=np.int64)
    adj = np.zeros((q, q), dtype=bool)
    for s in S:
        adj[codes, F.vadd(codes, s)] = True
    return Graph.from_matrix(adj, labels=None, name=name)


def build_net_graph(F: FieldSpec, net: NetSpec, verify: bool = True) -> Graph:
    check_field(F, net.r)
    g = _cayley_graph(F, net.connection_set(F), f"net(r={net.r}, D={net.sorted_directions()})")
    if verify:
        _verify_net(g, net)
    return g


def _verify_net(g: Graph, net: NetSpec) -> None:
    r, m = net.r, net.m
    if m == 0:
        assert g.n_edges() == 0
    elif m == r + 1:
        assert all(g.degree(v) == g.n - 1 for v in range(g.n))
    else:
        got = check_srg(g)
        if got != net.srg_params():
            raise GraphError(f"net graph parameters {got} differ from {net.srg_params()}")


def build_paley(F: FieldSpec, verify: bool = True) -> tuple[Graph, NetSpec | None]:
    q = F.q
    if q % 4 != 1:
        raise GraphError(f"Paley graph needs q = 1 mod 4, got {q}")
    S = [c for c in range(1, q) if F.is_square(c)]
    g = _cayley_graph(F, S, f"P({q})")
    net = None
    if F.e % 2 == 0:
        r = F.p ** (F.e // 2)
        net = NetSpec(r, frozenset(range(0, r + 1, 2)))
    if verify:
        got = check_srg(g)
        if got != paley_params(q):
            raise GraphError(f"P({q}) parameters {got} differ from {paley_params(q)}")
    return g, net


def peisert_connection_set(F: FieldSpec) -> list[int]:
    return [c for c in range(1, F.q) if (c - 1) % 4 in (0, 1)]


def build_peisert(F: FieldSpec, verify: bool = True) -> Graph:
    if F.p % 4 != 3 or F.e % 2:
        raise GraphError(f"Peisert graph needs q = p^(2e) with p = 3 mod 4, got {F!r}")
    minus_one = F.neg(1)
    assert F.power_class(minus_one, 4) == 0
    g = _cayley_graph(F, peisert_connection_set(F), f"P*({F.q})")
    if verify:
        got = check_srg(g)
        if got != paley_params(F.q):
            raise GraphError(f"P*({F.q}) parameters {got} differ from {paley_params(F.q)}")
    return g


def peisert_net(F: FieldSpec) -> NetSpec:
    """Direction classes hit by Peisert exponents; a net only when r = 3 mod 4."""
    r = F.p ** (F.e // 2)
    if (r + 1) % 4:
        raise GraphError("P*(r^2) is a net graph only for r = 3 mod 4")
    return NetSpec(r, frozenset(i for i in range(r + 1) if i % 4 in (0, 1)))


# -- Taylor extension ----------------------------------------------------

def taylor_index(v: int, sign: int, base: int | None) -> int:
    """Vertex index in the Taylor extension of a graph on v vertices.

    sign is +1 or -1; base None means the point at infinity.
    """
    offset = 0 if sign > 0 else v + 1
    return offset + (0 if base is None else base + 1)


def build_taylor(gamma: Graph, verify: bool = True) -> Graph:
    params = check_srg(gamma)
    if not params:
        raise GraphError(f"Taylor extension needs a strongly regular graph: {params.reason}")
    if params.k != 2 * params.mu:
        raise GraphError(f"Taylor extension needs k = 2 mu, got {params}")
    v = gamma.n
    N = 2 * (v + 1)
    rows = [0] * N
    plus = [taylor_index(v, 1, x) for x in range(v)]
    minus = [taylor_index(v, -1, x) for x in range(v)]
    inf_p, inf_m = taylor_index(v, 1, None), taylor_index(v, -1, None)
    full = (1 << v) - 1
    for x in range(v):
        same = gamma.rows[x]
        cross = full & ~same & ~(1 << x)
        # bits of the + side live at offset 1, the - side at offset v+2
        rows[plus[x]] = (1 << inf_p) | (same << 1) | (cross << (v + 2))
        rows[minus[x]] = (1 << inf_m) | (same << (v + 2)) | (cross << 1)
    rows[inf_p] = full << 1
    rows[inf_m] = full << (v + 2)
    labels = tuple([(1, None)] + [(1, x) for x in range(v)] + [(-1, None)] + [(-1, x) for x in range(v)])
    g = Graph(N, tuple(rows), labels, name=f"Taylor({gamma.name})")
    if verify:
        local, _ = g.induced(g.neighbors(inf_p))
        assert local.rows == gamma.rows
        arr = intersection_array(g)
        expect = taylor_intersection_array(params)
        if arr != expect:
            raise GraphError(f"Taylor extension has array {arr}, expected {expect}")
    return g


def taylor_intersection_array(params: SrgParams) -> tuple[tuple[int, ...], tuple[int, ...]]:
    v, k = params.v, params.k
    return (v, v - k - 1, 1), (1, v - k - 1, v)


def distances_from(g: Graph, s: int) -> list[int]:
    dist = [-1] * g.n
    dist[s] = 0
    dq = deque([s])
    while dq:
        u = dq.popleft()
        for w in iter_bits(g.rows[u]):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                dq.append(w)
    return dist


def intersection_array(g: Graph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Intersection array {b_0..b_{d-1}; c_1..c_d} if g is distance-regular, else None."""
    ref = None
    for s in range(g.n):
        dist = distances_from(g, s)
        if min(dist) < 0:
            return None
        d = max(dist)
        layers = [0] * (d + 1)
        for v, dv in enumerate(dist):
            layers[dv] |= 1 << v
        b = [None] * (d + 1)
        c = [None] * (d + 1)
        for i in range(d + 1):
            for v in iter_bits(layers[i]):
                row = g.rows[v]
                bi = (row & layers[i + 1]).bit_count() if i < d else 0
                ci = (row & layers[i - 1]).bit_count() if i > 0 else 0
                if b[i] is None:
                    b[i], c[i] = bi, ci
                elif (b[i], c[i]) != (bi, ci):
                    return None
        arr = (tuple(b[:d]), tuple(c[1:]))
        if ref is None:
            ref = arr
        elif arr != ref:
            return None
    return ref


# -- edge-list files -------------------------------------------------------

def export_graph(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(export_graph(g), encoding="utf-8")


def parse_graph(text: str, name: str = "") -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise GraphError(f"line {lineno}: expected integers, got {raw!r}") from None
        if n is None:
            if len(nums) != 1 or nums[0] < 0:
                raise GraphError(f"line {lineno}: expected the vertex count")
            n = nums[0]
            continue
        if len(nums) != 2:
            raise GraphError(f"line {lineno}: expected two vertices, got {raw!r}")
        u, v = nums
        if u == v:
            raise GraphError(f"line {lineno}: loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"line {lineno}: vertex out of range [0, {n})")
        edges.append((u, v))
    if n is None:
        raise GraphError("missing vertex count")
    return Graph.from_edges(n, edges, name=name)


def ingest_graph(path) -> Graph:
    path = Path(path)
    return parse_graph(path.read_text(encoding="utf-8"), name=path.name)

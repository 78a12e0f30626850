"""Maximal clique enumeration over bitset rows (Bron-Kerbosch, Tomita pivot)."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .netgraph import Graph, GraphError, NetSpec, bits_to_list, iter_bits, mask_of

DEFAULT_MAX_CLIQUES = 10**9

Clique = tuple[int, ...]


class ResourceCapError(RuntimeError):
    """A configured budget (cliques, vertices, seconds, search space) was exceeded."""


class CliqueCapExceeded(ResourceCapError):
    pass


def _check_vertices(g: Graph, S: Iterable[int]) -> list[int]:
    S = list(S)
    for v in S:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range for {g.n} vertices")
    return S


def perp_mask(g: Graph, S: Iterable[int]) -> int:
    """Bitmask of S^perp, the vertices equal or adjacent to every member of S."""
    out = g.all_mask
    for v in S:
        out &= g.rows[v] | (1 << v)
    return out


def common_neighbors(g: Graph, S: Iterable[int]) -> list[int]:
    return bits_to_list(perp_mask(g, _check_vertices(g, S)))


def is_clique(g: Graph, S: Iterable[int]) -> bool:
    S = _check_vertices(g, S)
    m = mask_of(S)
    return all((g.rows[v] | (1 << v)) & m == m for v in S)


def is_maximal_clique(g: Graph, S: Iterable[int]) -> bool:
    S = _check_vertices(g, S)
    return is_clique(g, S) and perp_mask(g, S) == mask_of(S)


def _pivot(rows, P: int, X: int) -> int:
    best_u, best = -1, -1
    for u in iter_bits(P | X):
        c = (P & rows[u]).bit_count()
        if c > best:
            best_u, best = u, c
    return best_u


def _expand(rows, R: list[int], P: int, X: int, max_size, min_size) -> Iterator[Clique]:
    if not P:
        if not X and (min_size is None or len(R) >= min_size):
            yield tuple(sorted(R))
        return
    if max_size is not None and len(R) >= max_size:
        return
    if min_size is not None and len(R) + P.bit_count() < min_size:
        return
    u = _pivot(rows, P, X)
    for v in iter_bits(P & ~rows[u]):
        bit = 1 << v
        row = rows[v]
        R.append(v)
        yield from _expand(rows, R, P & row, X & row, max_size, min_size)
        R.pop()
        P &= ~bit
        X |= bit


def _root(g: Graph, seed: list[int], within: int | None):
    P = perp_mask(g, seed) & ~mask_of(seed)
    if within is not None:
        P &= within
    return P


def _top_tasks(rows, seed: list[int], P: int, X: int):
    """Split the root node into independent (R, P, X) branches."""
    if not P:
        return [(seed, 0, X)]
    u = _pivot(rows, P, X)
    tasks = []
    for v in iter_bits(P & ~rows[u]):
        tasks.append((seed + [v], P & rows[v], X & rows[v]))
        P &= ~(1 << v)
        X |= 1 << v
    return tasks


_WORKER_ROWS = None


def _init_worker(rows):
    global _WORKER_ROWS
    _WORKER_ROWS = rows


def _run_task(args):
    R, P, X, max_size, min_size = args
    if not P and (X or (min_size is not None and len(R) < min_size)):
        return []
    return list(_expand(_WORKER_ROWS, list(R), P, X, max_size, min_size))


def enumerate_maximal_cliques(
    g: Graph,
    seed: Iterable[int] = (),
    *,
    max_cliques: int = DEFAULT_MAX_CLIQUES,
    max_size: int | None = None,
    min_size: int | None = None,
    within: int | None = None,
    jobs: int = 1,
) -> Iterator[Clique]:
    """Yield every maximal clique of g containing the clique ``seed``.

    ``max_size`` / ``min_size`` restrict output to cliques in that size range
    (pruning the search). ``within`` restricts the extension vertices to a
    mask, which is only meaningful together with a seed whose common
    neighbourhood lies inside it. Exceeding ``max_cliques`` raises
    CliqueCapExceeded. With jobs > 1 the top-level branches are farmed out
    to worker processes and results come back in branch order, so the
    output sequence does not depend on the worker count.
    """
    seed = sorted(set(_check_vertices(g, seed)))
    if not is_clique(g, seed):
        raise GraphError("seed is not a clique")
    P = _root(g, seed, within)
    rows = g.rows
    if jobs <= 1:
        stream = _expand(rows, list(seed), P, 0, max_size, min_size)
    else:
        stream = _parallel(rows, seed, P, max_size, min_size, jobs)
    count = 0
    for c in stream:
        count += 1
        if count > max_cliques:
            raise CliqueCapExceeded(f"more than {max_cliques} maximal cliques")
        yield c


def _parallel(rows, seed, P, max_size, min_size, jobs):
    tasks = _top_tasks(rows, list(seed), P, 0)
    args = [(R, p, x, max_size, min_size) for R, p, x in tasks]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(rows,)) as ex:
        for chunk in ex.map(_run_task, args, chunksize=max(1, len(args) // (4 * jobs))):
            yield from chunk


def maximal_cliques(g: Graph, **kw) -> list[Clique]:
    """Collected, sorted list of maximal cliques (deterministic)."""
    return sorted(enumerate_maximal_cliques(g, **kw))


@dataclass
class SizeHistogram:
    entries: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {s: c for s, c in sorted(self.entries.items()) if c}
        if any(c < 0 for c in self.entries.values()):
            raise ValueError("negative count in histogram")

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def sizes(self) -> list[int]:
        return list(self.entries)

    def items(self):
        return self.entries.items()

    def __eq__(self, other):
        if isinstance(other, SizeHistogram):
            return self.entries == other.entries
        if isinstance(other, dict):
            return self.entries == other
        return NotImplemented


def size_histogram(cliques: Iterable[Iterable[int]]) -> SizeHistogram:
    return SizeHistogram(dict(Counter(len(tuple(c)) for c in cliques)))


@dataclass
class DelsarteReport:
    bound: int
    max_size: int
    attained: bool
    attaining: list[Clique]
    all_lines: bool


def delsarte_check(g: Graph, net: NetSpec, cliques: Iterable[Clique], F=None) -> DelsarteReport:
    """Check max clique size <= r (the Delsarte-Hoffman bound of a net graph).

    ``all_lines`` reports whether every clique attaining the bound is a line
    (a coset of a direction class); that needs the field F.
    """
    r, m = net.r, net.m
    if not 0 < m < r + 1:
        raise GraphError("Delsarte bound check needs 0 < m < r+1")
    cliques = list(cliques)
    biggest = max((len(c) for c in cliques), default=0)
    if biggest > r:
        raise AssertionError(f"clique of size {biggest} exceeds the Delsarte-Hoffman bound {r}")
    attaining = [c for c in cliques if len(c) == r]
    all_lines = True
    if F is not None:
        from .structure import is_line
        all_lines = all(is_line(F, net, c) for c in attaining)
    return DelsarteReport(r, biggest, bool(attaining), attaining, all_lines)

"""Orbit tables of maximal cliques: computation, paper notation, JSON/TSV."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable

from .autgroup import (
    PEISERT_EXCEPTIONS,
    AffineGroup,
    GroupElement,
    GroupError,
    PermGroup,
    brute_force_automorphisms,
    classify_orbits,
    net_linear_group,
    paley_group,
    peisert_exception_group,
    peisert_group,
    taylor_paley_group,
)
from .cliques import DEFAULT_MAX_CLIQUES, enumerate_maximal_cliques, size_histogram
from .gf import FieldSpec, field_of_order
from .netgraph import (
    Graph,
    GraphError,
    NetSpec,
    build_net_graph,
    build_paley,
    build_peisert,
    build_taylor,
)

SCHEMA_VERSION = 1
BRUTE_FORCE_LIMIT = 100
FAMILIES = ("paley", "peisert", "taylor-paley", "net", "graph")


@dataclass
class TableRow:
    family: str
    r: int | None
    entries: list[tuple[int, int | None]]
    flags: list[str] = field(default_factory=list)
    certified: bool = True
    group_order: int | None = None
    group: str = ""
    n_cliques: int | None = None

    def __post_init__(self):
        sizes = [s for s, _ in self.entries]
        if sizes != sorted(set(sizes)):
            raise ValueError(f"row sizes not strictly increasing: {sizes}")
        if any(c is not None and c <= 0 for _, c in self.entries):
            raise ValueError("orbit counts must be positive")

    def as_dict(self) -> dict:
        return {s: c for s, c in self.entries}

    def sizes(self) -> list[int]:
        return [s for s, _ in self.entries]


# -- notation ----------------------------------------------------------------------

def render_row(row: TableRow) -> str:
    """Paper notation, e.g. "7^3, 11^1"; "?" marks counts under an uncertified group."""
    parts = []
    for s, c in row.entries:
        if c is None:
            parts.append(f"{s}")
        else:
            parts.append(f"{s}^{c}" + ("" if row.certified else "?"))
    return ", ".join(parts)


_ENTRY = re.compile(r"^\s*\$?(\d+)(?:\^\{?(\d+)\}?(\?)?)?\$?\s*$")


def parse_row(text: str, family: str = "", r: int | None = None) -> TableRow:
    entries = []
    certified = True
    for chunk in text.split(","):
        m = _ENTRY.match(chunk)
        if not m:
            raise ValueError(f"cannot parse table entry {chunk!r}")
        s, c, q = m.groups()
        entries.append((int(s), int(c) if c is not None else None))
        if q:
            certified = False
    return TableRow(family, r, entries, certified=certified)


def row_to_json(row: TableRow) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "family": row.family,
        "r": row.r,
        "entries": [[s, c] for s, c in row.entries],
        "certified": row.certified,
        "group": row.group,
        "group_order": row.group_order,
        "n_cliques": row.n_cliques,
        "flags": list(row.flags),
        "paper": render_row(row),
    }


def row_from_json(d: dict) -> TableRow:
    if d.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema {d.get('schema')!r}")
    return TableRow(
        d["family"], d["r"], [(s, c) for s, c in d["entries"]], list(d.get("flags", [])),
        d["certified"], d.get("group_order"), d.get("group", ""), d.get("n_cliques"),
    )


def row_to_tsv(row: TableRow) -> str:
    out = []
    for s, c in row.entries:
        out.append(f"{row.family}\t{row.r if row.r is not None else ''}\t{s}\t{'' if c is None else c}\t{int(row.certified)}")
    return "\n".join(out)


TSV_HEADER = "family\tr\tsize\torbits\tcertified"


def format_rows(rows: list[TableRow], fmt: str) -> str:
    if fmt == "paper":
        return "\n".join(f"{row.r if row.r is not None else row.family}: {render_row(row)}" for row in rows)
    if fmt == "json":
        return json.dumps([row_to_json(r) for r in rows], indent=1)
    if fmt == "tsv":
        return "\n".join([TSV_HEADER] + [row_to_tsv(r) for r in rows])
    raise ValueError(f"unknown format {fmt!r}")


# -- groups from files --------------------------------------------------------------------

def read_generators(path, F: FieldSpec) -> PermGroup:
    """Lines "a_code b_code frob_index"; '#' starts a comment."""
    perms = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'a b i', got {raw.strip()!r}")
            try:
                a, b, i = (int(t) for t in parts)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer field in {raw.strip()!r}") from None
            if not (0 < a < F.q and 0 <= b < F.q and 0 <= i < F.e):
                raise ValueError(f"{path}:{lineno}: element out of range for GF({F.q})")
            perms.append(GroupElement(a, b, i).perm(F))
    return PermGroup(F.q, perms, None, kind="file", name=str(path), certified_full=False)


# -- computing rows -----------------------------------------------------------------------

def _row(family, r, classification, grp, n_cliques=None, extra_flags=()) -> TableRow:
    hist = classification.histogram()
    certified = bool(getattr(grp, "certified_full", False))
    flags = list(classification.flags) + list(extra_flags)
    return TableRow(family, r, sorted(hist.items()), flags, certified,
                    grp.order, grp.name, n_cliques)


def _edge_seeds(grp: AffineGroup, S: Iterable[int]) -> list[tuple[int, int]]:
    return [(0, rho) for rho in grp.orbit_reps(S)]


def affine_row(g: Graph, grp: AffineGroup, family: str, r, *, max_cliques=DEFAULT_MAX_CLIQUES,
               jobs: int = 1, max_size=None, min_size=None) -> TableRow:
    """Orbits via cliques through {0, rho}, rho over K-orbit representatives of the neighbours of 0."""
    S = g.neighbors(0)
    if not S:
        return TableRow(family, r, [(1, 1)], certified=grp.certified_full, group_order=grp.order, group=grp.name)
    found: dict = {}
    budget = max_cliques
    count = 0
    for seed in _edge_seeds(grp, S):
        for c in enumerate_maximal_cliques(g, seed=seed, max_cliques=budget, jobs=jobs,
                                           max_size=max_size, min_size=min_size):
            count += 1
            key, stab = grp.canonical_form(c)
            found.setdefault(key, stab)
        budget = max(max_cliques - count, 0)
    hist: dict[int, int] = {}
    for key in found:
        hist[len(key)] = hist.get(len(key), 0) + 1
    return TableRow(family, r, sorted(hist.items()), list(grp.flags), grp.certified_full,
                    grp.order, grp.name, None)


def perm_row(g: Graph, grp: PermGroup, family: str, r, *, max_cliques=DEFAULT_MAX_CLIQUES, jobs=1) -> TableRow:
    cliques = list(enumerate_maximal_cliques(g, max_cliques=max_cliques, jobs=jobs))
    cls = classify_orbits(cliques, grp)
    return _row(family, r, cls, grp, len(cliques))


def sizes_row(g: Graph, family: str, r, *, max_cliques=DEFAULT_MAX_CLIQUES, jobs=1) -> TableRow:
    hist = size_histogram(enumerate_maximal_cliques(g, max_cliques=max_cliques, jobs=jobs))
    return TableRow(family, r, [(s, None) for s in hist.sizes()], ["no group: sizes only"],
                    certified=False, n_cliques=hist.total)


def _square_field(r: int) -> FieldSpec:
    F = field_of_order(r * r)
    return F


def paley_row(r: int, group: str = "closed-form", **kw) -> TableRow:
    F = _square_field(r)
    g, _ = build_paley(F, verify=False)
    if group == "brute":
        return perm_row(g, brute_force_automorphisms(g, BRUTE_FORCE_LIMIT), "paley", r, **kw)
    return affine_row(g, paley_group(F), "paley", r, **kw)


def peisert_row(r: int, group: str | None = None, allow_subgroup: bool = False, **kw) -> TableRow:
    if _p_of(r) % 4 != 3:
        raise GraphError(f"Peisert graphs need r a power of a prime p = 3 mod 4, got {r}")
    F = _square_field(r)
    g = build_peisert(F, verify=False)
    q = F.q
    if group is None:
        group = "brute" if q in PEISERT_EXCEPTIONS else "closed-form"
    if group == "brute":
        grp = peisert_exception_group(g, F) if q in PEISERT_EXCEPTIONS else brute_force_automorphisms(g, BRUTE_FORCE_LIMIT)
        return perm_row(g, grp, "peisert", r, **kw)
    grp = peisert_group(F)
    if not grp.certified_full and not allow_subgroup:
        raise GroupError(f"closed-form group of P*({q}) is a proper subgroup; use brute force or allow_subgroup")
    return affine_row(g, grp, "peisert", r, **kw)


def _p_of(r: int) -> int:
    from .gf import prime_power
    return prime_power(r)[0]


def taylor_row(r: int, group: str | None = None, **kw) -> TableRow:
    F = _square_field(r)
    gamma, _ = build_paley(F, verify=False)
    T = build_taylor(gamma, verify=False)
    if group is None:
        group = "brute" if T.n <= BRUTE_FORCE_LIMIT else "closed-form"
    grp = brute_force_automorphisms(T, BRUTE_FORCE_LIMIT) if group == "brute" else taylor_paley_group(F)
    return perm_row(T, grp, "taylor-paley", r, **kw)


def net_row(r: int, directions: Iterable[int], group: str = "closed-form", **kw) -> TableRow:
    F = _square_field(r)
    net = NetSpec(r, frozenset(directions))
    g = build_net_graph(F, net, verify=False)
    if group == "brute":
        return perm_row(g, brute_force_automorphisms(g, BRUTE_FORCE_LIMIT), "net", r, **kw)
    grp = net_linear_group(F, net)
    grp.flags.append("semilinear net stabilizer; the full group may be larger")
    return affine_row(g, grp, "net", r, **kw)


def graph_row(g: Graph, group: str = "brute", generators=None, **kw) -> TableRow:
    if group == "file":
        if generators is None:
            raise ValueError("--group file needs a generator file")
        F = field_of_order(g.n)
        grp = read_generators(generators, F)
        if not grp.check_preserves(g):
            raise GroupError("a generator is not an automorphism of the graph")
        return perm_row(g, grp, "graph", None, **kw)
    if group == "brute" and g.n <= BRUTE_FORCE_LIMIT:
        return perm_row(g, brute_force_automorphisms(g, BRUTE_FORCE_LIMIT), "graph", None, **kw)
    return sizes_row(g, "graph", None, **kw)


def smallest_row(family: str, r: int, start: int = 2, **kw) -> TableRow:
    """Smallest maximal cliques, by raising a size cap until something appears."""
    F = _square_field(r)
    if family == "paley":
        g, _ = build_paley(F, verify=False)
        grp = paley_group(F)
    elif family == "peisert":
        g = build_peisert(F, verify=False)
        grp = peisert_group(F)
        if not grp.certified_full:
            row = peisert_row(r, **kw)
            return TableRow("peisert", r, row.entries[:1], row.flags, row.certified, row.group_order, row.group)
    else:
        raise ValueError(f"smallest-clique search supports paley and peisert, not {family!r}")
    for cap in range(start, r + 1):
        row = affine_row(g, grp, family, r, max_size=cap, **kw)
        if row.entries:
            return TableRow(family, r, row.entries[:1], row.flags, row.certified, row.group_order, row.group)
    raise AssertionError("no maximal clique found")


def compute_row(family: str, r: int | None = None, **kw) -> TableRow:
    if family == "paley":
        return paley_row(r, **kw)
    if family == "peisert":
        return peisert_row(r, **kw)
    if family == "taylor-paley":
        return taylor_row(r, **kw)
    if family == "net":
        return net_row(r, **kw)
    raise ValueError(f"unknown family {family!r}")

"""Verification suites. Each returns a SuiteReport whose cases carry enough
data to reproduce a failure."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .autgroup import GroupElement, PermGroup, paley_group, stabilizer_order
from .cliques import delsarte_check, enumerate_maximal_cliques, is_maximal_clique
from .gf import FieldSpec, field_of_order, is_prime, prime_power
from .netgraph import NetSpec, build_net_graph, build_paley
from .structure import (
    TheoremViolation,
    baker_clique,
    check_norm_identity,
    cxl_closure,
    cxl_size_candidates,
    cyn_example,
    goryainov_mobius_map,
    goryainov_set,
    goryainov_yip_degree,
    group_shape,
    inverse_companion,
    is_line,
    line_point_config,
    realize,
    search_nonline_max_cliques,
    standard_config,
    subfield,
    two_line_containment,
    verify_stabilizer_structure,
    verify_unique_maximal,
)

SUITES = ("netcliq", "sizes", "realize", "goryainov", "baker", "stabilizers", "cyn",
          "delsarte", "blokhuis", "nonline")


@dataclass
class Case:
    params: dict
    ok: bool
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    cases: list[Case] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    @property
    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.ok]

    def add(self, params, ok, **detail):
        self.cases.append(Case(params, bool(ok), detail))

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "ok": self.ok,
            "n_cases": len(self.cases),
            "n_failures": len(self.failures),
            "cases": [{"params": c.params, "ok": c.ok, **c.detail} for c in self.cases],
        }

    def summary(self) -> str:
        return f"{self.suite}: {len(self.cases) - len(self.failures)}/{len(self.cases)} cases pass"


def square_field(r: int) -> FieldSpec:
    return field_of_order(r * r)


def odd_prime_powers(lo: int, hi: int) -> list[int]:
    out = []
    for r in range(max(lo, 3), hi + 1):
        try:
            p, _ = prime_power(r)
        except ValueError:
            continue
        if p != 2:
            out.append(r)
    return out


def _guard(report: SuiteReport, params: dict, fn):
    """Run fn; a TheoremViolation becomes a failing case with its witness."""
    try:
        detail = fn() or {}
        report.add(params, detail.pop("ok", True), **detail)
    except TheoremViolation as exc:
        report.add(params, False, witness=exc.witness)


# -- configurations up to isomorphism ---------------------------------------------------

def trace_orbit_reps(F: FieldSpec, size: int | None = None) -> list[tuple[int, ...]]:
    """Subsets A of GF(r) up to AGammaL(1, r).

    Every (net, line L, point x off L) is isomorphic to (D_A, GF(r), beta)
    with A its trace on L, and configurations with AGammaL(1, r)-equivalent
    traces are isomorphic, so these representatives cover every line and
    every point of every net.
    """
    r = int(round(F.q ** 0.5))
    sub = subfield(F)
    maps = []
    for c in sub:
        if not c:
            continue
        for d in sub:
            for i in range(F.e // 2):
                maps.append([F.add(F.mul(c, F.frobenius(z, i)), d) for z in range(F.q)])
    seen = set()
    reps = []
    sizes = range(r + 1) if size is None else [size]
    for k in sizes:
        for A in itertools.combinations(sub, k):
            if A in seen:
                continue
            orbit = {tuple(sorted(mp[a] for a in A)) for mp in maps}
            seen |= orbit
            reps.append(min(orbit))
    return reps


def suite_netcliq(rs=(5, 7, 8, 9, 11, 13), ms=None) -> SuiteReport:
    rep = SuiteReport("netcliq")
    for r in rs:
        F = square_field(r)
        L = subfield(F)
        for A in trace_orbit_reps(F):
            m = len(A) + 1
            if ms is not None and m not in ms:
                continue
            params = {"r": r, "m": m, "A": list(A)}

            def run():
                g, cfg = standard_config(F, A)
                u = verify_unique_maximal(g, cfg)
                size = len(u.closure)
                sizes = {len(cxl_closure(g, line_point_config(F, g, cfg.net, L, x)))
                         for x in range(F.q) if x not in set(L)}
                if sizes != {size}:
                    raise TheoremViolation("fixed-net constancy", cfg.witness(sizes=sorted(sizes)))
                if m == 2 and size != r:
                    raise TheoremViolation("|C_{x,L}| = r for m = 2", cfg.witness(size=size))
                return {"size": size, "directions": cfg.net.sorted_directions()}

            _guard(rep, params, run)
    return rep


def suite_sizes(rs=(5, 7, 8, 9, 11, 13)) -> SuiteReport:
    rep = SuiteReport("sizes")
    for r in rs:
        F = square_field(r)
        p = F.p
        for m in range(3, r - 1):
            for A in trace_orbit_reps(F, m - 1):
                params = {"r": r, "m": m, "A": list(A)}

                def run():
                    g, cfg = standard_config(F, A)
                    st = verify_stabilizer_structure(F, g, cfg)
                    h, f = group_shape(F, st.group)
                    size = len(st.closure)
                    certs = {(c.h, c.f) for c in cxl_size_candidates(r, m)}
                    ok = size == m - 1 + h * p**f and (h, f) in certs
                    if not ok:
                        raise TheoremViolation("size law", cfg.witness(size=size, h=h, f=f))
                    contained = True
                    if (m - 1) % p and size > m:
                        contained = two_line_containment(F, cfg, st.closure)
                        if not contained:
                            raise TheoremViolation("two-line containment", cfg.witness(clique=list(st.closure)))
                    return {"size": size, "h": h, "f": f}

                _guard(rep, params, run)
    return rep


def suite_realize(rs=(7, 8, 9, 11, 13)) -> SuiteReport:
    rep = SuiteReport("realize")
    for r in rs:
        F = square_field(r)
        for m in range(3, r - 1):
            for cert in cxl_size_candidates(r, m):
                params = {"r": r, "m": m, "h": cert.h, "f": cert.f}

                def run():
                    con = realize(F, cert)
                    return {"ok": con.measured == cert.size, "A": list(con.A), "case": con.case,
                            "measured": con.measured, "predicted": cert.size}

                _guard(rep, params, run)
    return rep


def suite_goryainov(r_max=47, mobius_max=13) -> SuiteReport:
    rep = SuiteReport("goryainov")
    for r in odd_prime_powers(3, r_max):
        F = square_field(r)

        def run():
            g, _ = build_paley(F, verify=False)
            s, kind = goryainov_set(F, g)
            expected = (r + 3) // 2 if r % 4 == 3 else (r + 1) // 2
            out = {"kind": kind, "size": len(s), "ok": len(s) == expected}
            out["norm_checks"] = check_norm_identity(F)
            if r <= mobius_max:
                out["mobius"] = goryainov_mobius_map(F, g).ok
            return out

        _guard(rep, {"r": r}, run)
    return rep


def paley_standard_config(F: FieldSpec, g=None):
    r = int(round(F.q ** 0.5))
    if g is None:
        g, _ = build_paley(F, verify=False)
    net = NetSpec(r, frozenset(range(0, r + 1, 2)))
    return g, line_point_config(F, g, net, subfield(F), F.beta)


def suite_baker(r_max=27) -> SuiteReport:
    rep = SuiteReport("baker")
    for r in odd_prime_powers(3, r_max):
        F = square_field(r)

        def run():
            g, cfg = paley_standard_config(F)
            base = baker_clique(F, g, cfg)
            closure = cxl_closure(g, cfg)
            if r % 4 == 1:
                expect = base
            else:
                expect = tuple(sorted(base + (F.frobenius(cfg.x, F.e // 2),)))
            shifted = tuple(sorted(F.sub(v, closure[0]) for v in closure))
            companion = inverse_companion(F, g, shifted)
            ok = (len(cfg.A) == (r - 1) // 2 and closure == expect
                  and is_maximal_clique(g, expect) and len(companion) == len(shifted))
            return {"ok": ok, "size": len(closure)}

        _guard(rep, {"r": r}, run)
    return rep


def suite_stabilizers(rs=(9, 11, 13, 25, 27)) -> SuiteReport:
    rep = SuiteReport("stabilizers")
    for r in rs:
        F = square_field(r)
        e = F.e // 2

        def run():
            g, cfg = paley_standard_config(F)
            grp = paley_group(F)
            perms = PermGroup(F.q, grp.generator_perms(), grp.order)
            baker = cxl_closure(g, cfg)
            conic, _ = goryainov_set(F)
            out = {}
            for name, c, want in (("baker", baker, 2 * e if r % 4 == 1 else 4 * e),
                                  ("conic", conic, e * (r + 1))):
                via_orbit = stabilizer_order(c, perms)
                _, direct = grp.canonical_form(c)
                out[name] = {"orbit_stabilizer": via_orbit, "direct": direct, "expected": want}
            out["ok"] = all(v["orbit_stabilizer"] == v["direct"] == v["expected"] for v in out.values())
            return out

        _guard(rep, {"r": r}, run)
    return rep


def suite_cyn(rs=(11, 13, 17, 19, 23)) -> SuiteReport:
    rep = SuiteReport("cyn")
    for r in rs:
        F = square_field(r)

        def run():
            c = cyn_example(F)
            return {"ok": c.ok, "size_L": c.size_L, "size_N": c.size_N, "expected_N": c.expected_N}

        _guard(rep, {"r": r}, run)
    return rep


def suite_delsarte(rs=(3, 4, 5, 7)) -> SuiteReport:
    """Every net over GF(r^2) with 0 < m < r+1: maximum clique size r, attained by
    lines, and only by lines below the smallest degree admitting other maximum cliques."""
    rep = SuiteReport("delsarte")
    for r in rs:
        F = square_field(r)
        for m in range(1, r + 1):
            for D in itertools.combinations(range(r + 1), m):
                if D[0] != 0:
                    continue  # a multiplier by beta rotates the classes
                net = NetSpec(r, frozenset(D))
                g = build_net_graph(F, net, verify=False)
                cliques = list(enumerate_maximal_cliques(g, seed=(0,)))
                d = delsarte_check(g, net, cliques, F)
                ok = d.max_size == r and d.attained
                if m < goryainov_yip_degree(r):
                    ok = ok and d.all_lines
                rep.add({"r": r, "directions": list(D)}, ok, max_size=d.max_size, all_lines=d.all_lines)
    return rep


def suite_blokhuis(r_max=13) -> SuiteReport:
    rep = SuiteReport("blokhuis")
    for r in odd_prime_powers(3, r_max):
        F = square_field(r)
        g, _ = build_paley(F, verify=False)
        # the Paley group is edge-transitive, so cliques through {0, 1} suffice
        found = [c for c in enumerate_maximal_cliques(g, seed=(0, 1), min_size=r) if len(c) >= r]
        ok = found == [tuple(subfield(F))]
        rep.add({"r": r}, ok, r_cliques_through_edge=len(found))
    return rep


def suite_nonline(rs=(5, 7, 8, 9)) -> SuiteReport:
    rep = SuiteReport("nonline")
    for r in rs:
        F = square_field(r)
        m0 = goryainov_yip_degree(r)
        below = search_nonline_max_cliques(F, m0 - 1)
        at = search_nonline_max_cliques(F, m0)
        ok = below.cliques == 0 and at.cliques > 0
        unique_needed = not is_prime(r)
        if unique_needed:
            ok = ok and len(at.orbits) == 1
        rep.add({"r": r, "m": m0}, ok, below=below.cliques, at=at.cliques, orbits=len(at.orbits),
                example=list(at.orbits[0]) if at.orbits else None)
    return rep


def run_suite(name: str, **params) -> SuiteReport:
    fn = {
        "netcliq": suite_netcliq,
        "sizes": suite_sizes,
        "realize": suite_realize,
        "goryainov": suite_goryainov,
        "baker": suite_baker,
        "stabilizers": suite_stabilizers,
        "cyn": suite_cyn,
        "delsarte": suite_delsarte,
        "blokhuis": suite_blokhuis,
        "nonline": suite_nonline,
    }[name]
    return fn(**params)


def dump_witnesses(report: SuiteReport, path) -> None:
    with open(path, "w") as fh:
        json.dump([c.__dict__ for c in report.failures], fh, indent=1)

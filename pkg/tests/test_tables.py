import json
from pathlib import Path

import pytest

from netclique.autgroup import GroupError, paley_group
from netclique.gf import field_of_order
from netclique.netgraph import GraphError, build_paley
from netclique.tables import (
    SCHEMA_VERSION,
    TSV_HEADER,
    TableRow,
    compute_row,
    format_rows,
    graph_row,
    net_row,
    paley_row,
    parse_row,
    peisert_row,
    read_generators,
    render_row,
    row_from_json,
    row_to_json,
    smallest_row,
    taylor_row,
)

GOLDEN = Path(__file__).parent / "golden"
TABLES = json.loads((GOLDEN / "published_tables.json").read_text())["tables"]


def golden(family, r):
    return [tuple(e) for e in TABLES[family][str(r)]["entries"]]


def all_golden_rows():
    for family, rows in TABLES.items():
        for r, row in rows.items():
            if not row["partial"]:
                yield family, int(r), [tuple(e) for e in row["entries"]]


# -- notation ---------------------------------------------------------------------------

@pytest.mark.parametrize("family,r,entries", list(all_golden_rows()))
def test_render_parse_round_trip(family, r, entries):
    row = TableRow(family, r, entries)
    text = render_row(row)
    assert parse_row(text, family, r).entries == entries
    latex = ", ".join(f"${s}^{{{c}}}$" for s, c in entries)
    assert parse_row(latex).entries == entries


def test_golden_rows_are_consistent():
    # every full row ends in the lines, a single orbit of size r (r + 1 for the Taylor extension)
    for family, r, entries in all_golden_rows():
        if family == "paley-smallest":
            continue
        top = r + 1 if family == "taylor-paley" else r
        assert entries[-1] == (top, 1), (family, r)


def test_notation_details():
    assert render_row(TableRow("paley", 11, [(7, 3), (11, 1)])) == "7^3, 11^1"
    assert render_row(TableRow("x", 5, [(3, 2)], certified=False)) == "3^2?"
    assert render_row(TableRow("graph", None, [(3, None), (5, None)], certified=False)) == "3, 5"
    row = parse_row("5^3?, 9^1?")
    assert not row.certified and row.entries == [(5, 3), (9, 1)]
    for bad in ("5^, 7^1", "x", "7^1, 5^3"):
        with pytest.raises(ValueError):
            parse_row(bad)
    with pytest.raises(ValueError):
        TableRow("paley", 3, [(3, 0)])


def test_json_golden():
    row = paley_row(11)
    d = row_to_json(row)
    expected = json.loads((GOLDEN / "paley_11.json").read_text())
    assert d == expected
    assert row_from_json(d) == row
    with pytest.raises(ValueError):
        row_from_json(dict(d, schema=SCHEMA_VERSION + 1))


def test_tsv_json_and_default_formats():
    rows = [paley_row(5), paley_row(7)]
    tsv = format_rows(rows, "tsv").splitlines()
    assert tsv[0] == TSV_HEADER
    assert tsv[1:] == ["paley\t5\t3\t1\t1", "paley\t5\t5\t1\t1", "paley\t7\t5\t1\t1", "paley\t7\t7\t1\t1"]
    assert format_rows(rows, "paper") == "5: 3^1, 5^1\n7: 5^1, 7^1"
    back = [row_from_json(d) for d in json.loads(format_rows(rows, "json"))]
    assert back == rows
    with pytest.raises(ValueError):
        format_rows(rows, "xml")


# -- computed rows against the published tables -----------------------------------------

@pytest.mark.parametrize("r", [3, 5, 7, 9, 11, 13])
def test_paley_rows(r):
    row = paley_row(r)
    if str(r) in TABLES["paley"]:
        assert row.entries == golden("paley", r)
    assert row.certified and row.group_order == paley_group(field_of_order(r * r)).order


@pytest.mark.parametrize("r", [3, 7, 9, 11])
def test_peisert_rows(r):
    assert peisert_row(r).entries == golden("peisert", r)


@pytest.mark.parametrize("r", [3, 5, 7])
def test_taylor_rows(r):
    row = taylor_row(r)
    assert row.entries == golden("taylor-paley", r)
    F = field_of_order(r * r)
    assert row.certified and row.group_order == F.e * F.q * (F.q ** 2 - 1)


@pytest.mark.parametrize("r", [3, 5, 7, 9, 11, 13])
def test_smallest_rows(r):
    assert smallest_row("paley", r).entries == golden("paley-smallest", r)


def test_brute_and_closed_form_agree():
    assert paley_row(7, group="brute").entries == paley_row(7).entries
    assert taylor_row(3, group="closed-form").entries == taylor_row(3, group="brute").entries


def test_peisert_subgroup_is_refused():
    with pytest.raises(GroupError):
        peisert_row(9, group="closed-form")
    row = peisert_row(9, group="closed-form", allow_subgroup=True)
    assert not row.certified and all(c is not None for _, c in row.entries)
    assert "?" in render_row(row)
    with pytest.raises(GraphError):
        peisert_row(5)


def test_net_rows_are_flagged():
    row = net_row(5, range(3))
    assert row.flags and row.sizes()[-1] == 5
    # the Paley graph is the net on the even directions, so the sizes agree
    assert net_row(7, range(0, 8, 2)).sizes() == paley_row(7).sizes()
    with pytest.raises(ValueError):
        compute_row("nope", 3)


def test_graph_rows(tmp_path):
    F = field_of_order(25)
    g, _ = build_paley(F)
    assert graph_row(g).entries == paley_row(5).entries
    gen = tmp_path / "gens.txt"
    # z -> beta^2 z, z -> z + 1 and the Frobenius, one "a b i" per line
    sq = F.mul(F.beta, F.beta)
    gen.write_text(f"# generators\n{sq} 0 0\n1 1 0\n1 0 1\n")
    grp = read_generators(gen, F)
    assert not grp.certified_full
    row = graph_row(g, group="file", generators=gen)
    assert row.sizes() == [3, 5]
    gen.write_text(f"{F.beta} 0 0\n")  # a non-square multiplier swaps the graph with its complement
    with pytest.raises(GroupError):
        graph_row(g, group="file", generators=gen)
    with pytest.raises(ValueError):
        graph_row(g, group="file")
    big, _ = build_paley(field_of_order(121))
    row = graph_row(big)
    assert row.entries == [(7, None), (11, None)] and not row.certified

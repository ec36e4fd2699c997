import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbgmatch.errors import ParseError
from dbgmatch.graph import LabeledDigraph, full_de_bruijn
from dbgmatch.instances import HamInstance, OvInstance
from dbgmatch.io import (
    NPC_DISPLAY,
    SETH_DISPLAY,
    DisplayMap,
    display_for,
    parse_graph,
    parse_meta,
    parse_ov,
    parse_pattern,
    read_text,
    write_bundle,
    write_graph,
    write_meta,
    write_ov,
    write_pattern,
)
from dbgmatch.reduce_ham import build_npc_instance
from dbgmatch.reduce_ov import build_seth_instance
from dbgmatch.verify import random_ham


def fixtures():
    out = [full_de_bruijn(s, k) for s in (2, 3, 4) for k in (1, 2, 3)]
    out.append(build_npc_instance(HamInstance.from_edges(3, [(0, 1), (1, 2), (2, 0)]), skip_gadget=True).graph)
    out.append(build_seth_instance(OvInstance([(1, 0), (0, 1)], [(1, 1), (1, 0)])).graph)
    for seed in range(9):
        out.append(random_ham(4 + seed % 3, random.Random(seed)).graph)
    return out


@pytest.mark.parametrize("g", fixtures())
def test_graph_round_trip(g):
    text = write_graph(g)
    back = parse_graph(text)
    assert write_graph(back) == text


def test_canonical_form_ignores_order_and_comments():
    messy = "# a comment\ndbg k=2 sigma=2\n\ne 1 0\nv 1 1\n# mid\nv 0 0\ne 0 1\nil 1 0 1\nil 0 1 0\n"
    g = parse_graph(messy)
    assert write_graph(g) == "dbg k=2 sigma=2\nv 0 0\nv 1 1\ne 0 1\ne 1 0\nil 0 1 0\nil 1 0 1\n"


def test_plain_digraph_has_order_zero():
    g = LabeledDigraph(3)
    g.add_vertex(2)
    assert write_graph(g) == "dbg k=0 sigma=3\nv 0 2\n"
    assert parse_graph(write_graph(g)).implicit == {}


class TestGraphErrors:
    def test_undeclared_vertex_names_line(self):
        text = "dbg k=1 sigma=2\nv 0 0\nv 1 1\ne 0 9\n"
        with pytest.raises(ParseError) as info:
            parse_graph(text)
        assert info.value.line == 4 and info.value.column == 3
        assert "undeclared vertex 9" in str(info.value)

    @pytest.mark.parametrize(
        "text,line",
        [
            ("", None),
            ("graph\n", 1),
            ("dbg k=1 sigma=2\nv 0 2\n", 2),
            ("dbg k=1 sigma=2\nv 0 0\nv 0 1\n", 3),
            ("dbg k=1 sigma=2\nv x 0\n", 2),
            ("dbg k=2 sigma=2\nv 0 0\nil 0 0\n", 3),
            ("dbg k=1 sigma=2\nv 0 0\nq 0\n", 3),
            ("dbg k=1 sigma=2\nv 0 0\nil 3 0\n", 3),
        ],
    )
    def test_bad_input(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_graph(text)
        assert info.value.line == line


class TestPattern:
    def test_integers(self):
        assert parse_pattern("0 1 2 3\n") == [0, 1, 2, 3]
        assert write_pattern([0, 1, 2, 3]) == "0 1 2 3\n"

    def test_display_round_trip(self):
        p = [0, 1, 2, 3, 3, 0]
        text = write_pattern(p, NPC_DISPLAY)
        assert text == "$#011$\n"
        assert parse_pattern(text, NPC_DISPLAY) == p

    def test_npc_display(self):
        assert NPC_DISPLAY.render([0, 1, 2, 3]) == "$#01"
        assert SETH_DISPLAY.render([2, 2, 3]) == "223"

    def test_more_than_one_line(self):
        with pytest.raises(ParseError):
            parse_pattern("0 1\n1 0\n")

    def test_not_a_number(self):
        with pytest.raises(ParseError) as info:
            parse_pattern("0 x\n")
        assert info.value.column == 2

    def test_unknown_display_char(self):
        with pytest.raises(ParseError) as info:
            parse_pattern("$#2\n", NPC_DISPLAY)
        assert (info.value.line, info.value.column) == (1, 3)


class TestDisplayMap:
    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            DisplayMap("aa")

    def test_whitespace_rejected(self):
        with pytest.raises(ValueError):
            DisplayMap("a b")

    def test_render_out_of_range(self):
        with pytest.raises(ValueError):
            DisplayMap("ab").render([2])

    def test_display_for(self):
        assert display_for("npc", 4) is NPC_DISPLAY
        assert display_for("seth", 4).chars == "0123"
        assert display_for(None, 2).chars == "01"
        with pytest.raises(ValueError):
            display_for(None, 11)


class TestOv:
    def test_round_trip(self):
        ov = OvInstance([(1, 0, 1), (0, 0, 1)], [(1, 1, 0), (0, 1, 0)])
        text = write_ov(ov)
        assert text == "ov N=2 d=3\n101\n001\n110\n010\n"
        assert parse_ov(text) == ov

    def test_spaced_bits(self):
        assert parse_ov("ov N=1 d=2\n1 0\n0 1\n") == OvInstance([(1, 0)], [(0, 1)])

    @pytest.mark.parametrize(
        "text",
        ["", "ov d=2\n", "ov N=2 d=2\n10\n01\n11\n", "ov N=1 d=2\n102\n01\n", "ov N=1 d=2\n12\n01\n"],
    )
    def test_bad_input(self, text):
        with pytest.raises(ParseError):
            parse_ov(text)


class TestMeta:
    def test_npc_round_trip(self):
        b = build_npc_instance(HamInstance.from_edges(3, [(0, 1), (1, 2), (2, 0)]), skip_gadget=True)
        meta = parse_meta(write_meta(b, {"source": "triangle"}))
        assert meta.values["kind"] == "npc"
        assert meta.int("delta") == b.delta == 8
        assert meta.int("pattern_length") == len(b.pattern)
        assert meta.values["source"] == "triangle"
        assert meta.marked == b.marked

    def test_seth_sections(self):
        b = build_seth_instance(OvInstance([(1, 0), (0, 1)], [(1, 1), (1, 0)]))
        meta = parse_meta(write_meta(b))
        assert meta.sections == b.sections
        assert meta.int("k") == 14

    def test_duplicate_key(self):
        with pytest.raises(ParseError):
            parse_meta("kind npc\nkind seth\n")

    def test_bundle_files(self, tmp_path):
        b = build_seth_instance(OvInstance([(1, 0), (0, 1)], [(1, 1), (1, 0)]))
        paths = write_bundle(b, tmp_path / "inst")
        assert [p.name for p in paths] == ["inst.graph", "inst.pattern", "inst.meta"]
        g = parse_graph(read_text(paths[0]))
        assert g.implicit == b.graph.implicit
        assert parse_pattern(read_text(paths[1])) == b.pattern


@st.composite
def labeled_graphs(draw):
    sigma = draw(st.integers(1, 5))
    n = draw(st.integers(0, 8))
    g = LabeledDigraph(sigma)
    for _ in range(n):
        g.add_vertex(draw(st.integers(0, sigma - 1)))
    if n:
        pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
        for u, v in draw(st.lists(pairs, max_size=20)):
            g.add_edge(u, v)
    return g


@given(labeled_graphs())
@settings(max_examples=100, deadline=None)
def test_round_trip_property(g):
    back = parse_graph(write_graph(g)).base
    assert back.labels == g.labels
    assert back.edges() == g.edges()

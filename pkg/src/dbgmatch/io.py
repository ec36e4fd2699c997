"""Text formats for graphs, patterns, OV instances and bundle metadata.

Graph files::

    dbg k=<int> sigma=<int>
    v <id> <symbol>
    e <tail> <head>
    il <id> <symbol> ... (k symbols, optional)

Lines starting with ``#`` are comments.  Plain digraphs use k=0 and carry no
``il`` lines.  Writers emit the canonical form: header, then vertices, edges
and implicit labels, each sorted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from dbgmatch.errors import ParseError
from dbgmatch.graph import DeBruijnGraph, LabeledDigraph
from dbgmatch.instances import InstanceBundle, OvInstance


@dataclass(frozen=True)
class DisplayMap:
    """Bijection between integer symbols and printable characters."""

    chars: str

    def __post_init__(self):
        if len(set(self.chars)) != len(self.chars) or any(c.isspace() for c in self.chars):
            raise ValueError(f"display characters must be distinct and printable: {self.chars!r}")

    @property
    def sigma(self) -> int:
        return len(self.chars)

    def render(self, symbols: Iterable[int]) -> str:
        try:
            return "".join(self.chars[s] for s in symbols)
        except IndexError:
            raise ValueError(f"symbol outside display map of size {self.sigma}") from None

    def parse(self, text: str, line: int | None = None) -> list[int]:
        out = []
        for col, ch in enumerate(text, 1):
            if ch.isspace():
                continue
            i = self.chars.find(ch)
            if i < 0:
                raise ParseError(f"character {ch!r} not in display map {self.chars!r}", line, col)
            out.append(i)
        return out


NPC_DISPLAY = DisplayMap("$#01")
SETH_DISPLAY = DisplayMap("0123")


def display_for(kind: str | None, sigma: int) -> DisplayMap:
    if kind == "npc":
        return NPC_DISPLAY
    if sigma <= 10:
        return DisplayMap("0123456789"[:sigma])
    raise ValueError(f"no display map for alphabet of size {sigma}")


# -- graphs ---------------------------------------------------------------

_HEADER = re.compile(r"dbg\s+k=(\d+)\s+sigma=(\d+)\s*$")


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


def _ints(fields: Sequence[str], line: int, start_col: int = 2) -> list[int]:
    out = []
    for j, f in enumerate(fields):
        try:
            out.append(int(f))
        except ValueError:
            raise ParseError(f"expected an integer, got {f!r}", line, start_col + j) from None
    return out


def parse_graph(text: str) -> DeBruijnGraph:
    """Parse a graph file.  Implicit labels are kept only if the file lists them."""
    lines = _content_lines(text)
    first = next(lines, None)
    if first is None:
        raise ParseError("empty graph file")
    no, header = first
    m = _HEADER.match(header)
    if not m:
        raise ParseError("expected header 'dbg k=<int> sigma=<int>'", no, 1)
    k, sigma = int(m.group(1)), int(m.group(2))
    if sigma < 1:
        raise ParseError("sigma must be positive", no)
    g = LabeledDigraph(sigma)
    edges: list[tuple[int, int, int]] = []
    implicit: dict[int, bytes] = {}
    il_lines: dict[int, int] = {}
    for no, line in lines:
        kind, *rest = line.split()
        if kind == "v":
            if len(rest) != 2:
                raise ParseError("vertex line needs 'v <id> <symbol>'", no)
            vid, sym = _ints(rest, no)
            if vid in g:
                raise ParseError(f"duplicate vertex {vid}", no, 2)
            if not 0 <= sym < sigma:
                raise ParseError(f"symbol {sym} outside alphabet of size {sigma}", no, 3)
            if vid < 0:
                raise ParseError("vertex ids must be non-negative", no, 2)
            g.add_vertex(sym, vid)
        elif kind == "e":
            if len(rest) != 2:
                raise ParseError("edge line needs 'e <tail> <head>'", no)
            u, v = _ints(rest, no)
            edges.append((no, u, v))
        elif kind == "il":
            if not rest:
                raise ParseError("implicit-label line needs 'il <id> <symbols>'", no)
            vid, *syms = _ints(rest, no)
            if len(syms) != k:
                raise ParseError(f"implicit label has {len(syms)} symbols, expected k={k}", no)
            for j, s in enumerate(syms):
                if not 0 <= s < sigma:
                    raise ParseError(f"symbol {s} outside alphabet of size {sigma}", no, 3 + j)
            if vid in implicit:
                raise ParseError(f"duplicate implicit label for vertex {vid}", no, 2)
            implicit[vid] = bytes(syms)
            il_lines[vid] = no
        else:
            raise ParseError(f"unknown record type {kind!r}", no, 1)
    for no, u, v in edges:
        for col, x in ((2, u), (3, v)):
            if x not in g:
                raise ParseError(f"edge refers to undeclared vertex {x}", no, col)
        g.add_edge(u, v)
    for vid, no in il_lines.items():
        if vid not in g:
            raise ParseError(f"implicit label for undeclared vertex {vid}", no, 2)
    return DeBruijnGraph(g, k, implicit)


def write_graph(g: LabeledDigraph | DeBruijnGraph, k: int | None = None) -> str:
    if isinstance(g, DeBruijnGraph):
        base, kk, implicit = g.base, g.k, g.implicit
    else:
        base, kk, implicit = g, 0, {}
    if k is not None:
        kk = k
    out = [f"dbg k={kk} sigma={base.sigma}"]
    out += [f"v {v} {base.labels[v]}" for v in base.vertices()]
    out += [f"e {u} {v}" for u, v in base.edges()]
    out += [f"il {v} " + " ".join(map(str, implicit[v])) for v in sorted(implicit)]
    return "\n".join(out) + "\n"


# -- patterns -------------------------------------------------------------


def parse_pattern(text: str, display: DisplayMap | None = None) -> list[int]:
    """One line of whitespace-separated integers, or display characters."""
    lines = [(no, raw) for no, raw in enumerate(text.splitlines(), 1) if raw.strip()]
    if len(lines) != 1:
        raise ParseError(f"pattern file must hold exactly one non-empty line, found {len(lines)}")
    no, line = lines[0]
    if display is not None:
        return display.parse(line, no)
    return _ints(line.split(), no, start_col=1)


def write_pattern(p: Sequence[int], display: DisplayMap | None = None) -> str:
    if display is not None:
        return display.render(p) + "\n"
    return " ".join(map(str, p)) + "\n"


# -- OV instances ---------------------------------------------------------

_OV_HEADER = re.compile(r"ov\s+N=(\d+)\s+d=(\d+)\s*$")


def _bit_row(line: str, d: int, no: int) -> tuple[int, ...]:
    cells = line.split() if " " in line or "\t" in line else list(line)
    if len(cells) != d:
        raise ParseError(f"expected {d} bits, found {len(cells)}", no)
    bits = []
    for j, c in enumerate(cells, 1):
        if c not in ("0", "1"):
            raise ParseError(f"expected a bit, got {c!r}", no, j)
        bits.append(int(c))
    return tuple(bits)


def parse_ov(text: str) -> OvInstance:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty OV file")
    no, header = lines[0]
    m = _OV_HEADER.match(header)
    if not m:
        raise ParseError("expected header 'ov N=<int> d=<int>'", no, 1)
    N, d = int(m.group(1)), int(m.group(2))
    rows = lines[1:]
    if len(rows) != 2 * N:
        last = rows[-1][0] if rows else no
        raise ParseError(f"expected {2 * N} vector lines, found {len(rows)}", last)
    vecs = [_bit_row(line, d, n) for n, line in rows]
    return OvInstance(vecs[:N], vecs[N:])


def write_ov(ov: OvInstance) -> str:
    out = [f"ov N={ov.N} d={ov.d}"]
    out += ["".join(map(str, v)) for v in ov.A]
    out += ["".join(map(str, v)) for v in ov.B]
    return "\n".join(out) + "\n"


# -- bundle metadata ------------------------------------------------------


def write_meta(bundle: InstanceBundle, extra: dict | None = None) -> str:
    """Key/value lines, then ``m <orig> <marked>`` and ``s <vertex> <section>`` records."""
    out = [f"kind {bundle.kind}", f"delta {bundle.delta}"]
    out += [f"{key} {val}" for key, val in bundle.params.as_dict().items() if key != "delta"]
    out.append(f"pattern_length {len(bundle.pattern)}")
    for key, val in (extra or {}).items():
        out.append(f"{key} {val}")
    out += [f"m {v} {m}" for v, m in sorted(bundle.marked.items())]
    out += [f"s {v} {s}" for v, s in sorted(bundle.sections.items())]
    return "\n".join(out) + "\n"


@dataclass
class Meta:
    values: dict[str, str]
    marked: dict[int, int]
    sections: dict[int, str]

    def int(self, key: str) -> int:
        return int(self.values[key])


def parse_meta(text: str) -> Meta:
    values: dict[str, str] = {}
    marked: dict[int, int] = {}
    sections: dict[int, str] = {}
    for no, line in _content_lines(text):
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "m":
            u, v = _ints(rest.split(), no)
            marked[u] = v
        elif key == "s":
            vid, _, sec = rest.partition(" ")
            sections[_ints([vid], no)[0]] = sec.strip()
        else:
            if key in values:
                raise ParseError(f"duplicate key {key!r}", no, 1)
            values[key] = rest
    return Meta(values, marked, sections)


def write_bundle(bundle: InstanceBundle, prefix: str | Path, extra: dict | None = None) -> list[Path]:
    """Write ``<prefix>.graph``, ``<prefix>.pattern`` and ``<prefix>.meta``."""
    prefix = Path(prefix)
    paths = [prefix.with_name(prefix.name + ext) for ext in (".graph", ".pattern", ".meta")]
    paths[0].write_text(write_graph(bundle.graph))
    paths[1].write_text(write_pattern(bundle.pattern))
    paths[2].write_text(write_meta(bundle, extra))
    return paths


def read_text(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")

"""Edge-list and graph6 text formats.

Edge-list: first non-comment line is n, then one ``u v`` pair per line; ``#`` starts a comment.
graph6: the usual bit-packed upper triangle in 6-bit groups offset by 63.
"""
from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .graph import Graph


def parse_edge_list(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"non-integer token in {raw!r}", line=lineno) from None
        if n is None:
            if len(nums) != 1 or nums[0] < 0:
                raise ParseError("first line must be a single vertex count", line=lineno)
            n = nums[0]
            continue
        if len(nums) != 2:
            raise ParseError(f"expected 'u v', got {raw!r}", line=lineno)
        u, v = nums
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge {u} {v} out of range for n={n}", line=lineno)
        if u == v:
            raise ParseError(f"self-loop at {u}", line=lineno)
        edges.append((u, v))
    if n is None:
        raise ParseError("missing vertex count", line=1)
    return Graph.from_edges(n, edges)


def emit_edge_list(g: Graph) -> str:
    lines = [str(g.n)] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("graph6: n too large")


def emit_graph6(g: Graph) -> str:
    bitstream = []
    for j in range(1, g.n):
        for i in range(j):
            bitstream.append(1 if g.has_edge(i, j) else 0)
    while len(bitstream) % 6:
        bitstream.append(0)
    chars = []
    for k in range(0, len(bitstream), 6):
        val = 0
        for b in bitstream[k:k + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    return _encode_n(g.n) + "".join(chars)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise ParseError(f"graph6: invalid character {ch!r}", byte=pos)
    if not s:
        raise ParseError("graph6: empty input", byte=0)
    if s[0] != "~":
        n, pos = ord(s[0]) - 63, 1
    elif len(s) > 1 and s[1] != "~":
        if len(s) < 4:
            raise ParseError("graph6: truncated size field", byte=len(s))
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 4
    else:
        if len(s) < 8:
            raise ParseError("graph6: truncated size field", byte=len(s))
        n = 0
        for ch in s[2:8]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 8
    need_bits = n * (n - 1) // 2
    need_chars = (need_bits + 5) // 6
    body = s[pos:]
    if len(body) != need_chars:
        raise ParseError(f"graph6: expected {need_chars} data bytes, got {len(body)}",
                         byte=pos + min(len(body), need_chars))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            val = ord(body[k // 6]) - 63
            if (val >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    # padding bits must be zero
    if need_chars and need_bits % 6:
        last = ord(body[-1]) - 63
        if last & ((1 << (6 - need_bits % 6)) - 1):
            raise ParseError("graph6: nonzero padding bits", byte=pos + need_chars - 1)
    return Graph.from_edges(n, edges)


def parse_graph(text: str, fmt: str = "edge-list") -> Graph:
    if fmt == "edge-list":
        return parse_edge_list(text)
    if fmt == "graph6":
        return parse_graph6(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def emit_graph(g: Graph, fmt: str = "edge-list") -> str:
    if fmt == "edge-list":
        return emit_edge_list(g)
    if fmt == "graph6":
        return emit_graph6(g) + "\n"
    raise ValueError(f"unknown graph format {fmt!r}")


def sniff_format(path: str | Path, text: str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".g6", ".graph6"):
        return "graph6"
    if suffix in (".el", ".edges", ".txt"):
        return "edge-list"
    first = text.strip().split("\n", 1)[0].strip()
    return "edge-list" if first.isdigit() else "graph6"


def read_graph(path: str | Path) -> Graph:
    text = Path(path).read_text()
    return parse_graph(text, sniff_format(path, text))


def write_graph(g: Graph, path: str | Path) -> None:
    fmt = "graph6" if Path(path).suffix.lower() in (".g6", ".graph6") else "edge-list"
    Path(path).write_text(emit_graph(g, fmt))

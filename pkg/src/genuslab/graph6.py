"""graph6 encoding (the undirected format used by nauty and friends)."""

from __future__ import annotations

from .graph import Graph, GraphError, pair_list


class Graph6Error(GraphError):
    pass


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(63 + n)
    if n <= 258047:
        return "~" + "".join(chr(63 + ((n >> s) & 63)) for s in (12, 6, 0))
    raise Graph6Error(f"graph6 cannot encode n={n}")


def write_graph6(g: Graph) -> str:
    p = g.n * (g.n - 1) // 2
    bits = g.code
    pad = (-p) % 6
    bits <<= pad
    nbytes = (p + pad) // 6
    body = "".join(chr(63 + ((bits >> (6 * (nbytes - 1 - i))) & 63)) for i in range(nbytes))
    return _encode_n(g.n) + body


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise Graph6Error("empty graph6 string")
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"byte {i}: character {ch!r} outside graph6 range 63..126")
    if s[0] == "~":
        if len(s) < 4 or s[1] == "~":
            raise Graph6Error("byte 1: only the 4-byte size prefix (n <= 258047) is supported")
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        off = 4
    else:
        n = ord(s[0]) - 63
        off = 1
    p = n * (n - 1) // 2
    need = (p + 5) // 6
    body = s[off:]
    if len(body) != need:
        raise Graph6Error(f"byte {off}: expected {need} adjacency bytes for n={n}, found {len(body)}")
    bits = 0
    for ch in body:
        bits = (bits << 6) | (ord(ch) - 63)
    pad = need * 6 - p
    if bits & ((1 << pad) - 1):
        raise Graph6Error(f"byte {off + need - 1}: nonzero padding bits")
    code = bits >> pad
    return Graph.from_code(n, code)


def code_to_graph6(n: int, code: int) -> str:
    return write_graph6(Graph.from_code(n, code))


__all__ = ["write_graph6", "parse_graph6", "Graph6Error", "code_to_graph6", "pair_list"]

"""Reading and writing graphs: graph6 strings and 0/1 adjacency text."""

from __future__ import annotations

from pathlib import Path

from .cayley import BitGraph, GraphError

_G6_HEADER = ">>graph6<<"


def to_graph6(g: BitGraph) -> str:
    n = g.n
    if n <= 62:
        out = [chr(n + 63)]
    else:
        out = ["~"] + [chr(((n >> s) & 63) + 63) for s in (12, 6, 0)]
    bits = [g.rows[i] >> j & 1 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def from_graph6(text: str) -> BitGraph:
    s = text.strip()
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER):]
    if not s or any(not 63 <= ord(c) <= 126 for c in s):
        raise GraphError(f"malformed graph6 string {text!r}")
    data = [ord(c) - 63 for c in s]
    if data[0] == 63:
        if len(data) < 4 or data[1] == 63:
            raise GraphError(f"malformed graph6 size field in {text!r}")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        data = data[4:]
    else:
        n = data[0]
        data = data[1:]
    if n > 64:
        raise GraphError(f"graph6 string has {n} vertices; at most 64 supported")
    nbits = n * (n - 1) // 2
    if len(data) != -(-nbits // 6):
        raise GraphError(f"graph6 string {text!r} has wrong length for n={n}")
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if data[k // 6] >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if nbits % 6 and data[-1] & ((1 << (6 - nbits % 6)) - 1):
        raise GraphError(f"graph6 string {text!r} has nonzero padding bits")
    return BitGraph(n, tuple(rows))


def parse_adjacency(text: str) -> BitGraph:
    """Rows of whitespace-separated 0/1 entries; ``/`` also separates rows, ``#`` starts a comment."""
    rows = []
    for line in text.replace("/", "\n").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([int(t) for t in line.replace(",", " ").split()])
        except ValueError:
            raise GraphError(f"non-integer entry in row {len(rows)}: {line!r}") from None
    if not rows:
        raise GraphError("no adjacency rows found")
    return BitGraph.from_matrix(rows)


def format_adjacency(g: BitGraph) -> str:
    return "".join(" ".join(map(str, row)) + "\n" for row in g.matrix())


def parse_graph(text: str) -> BitGraph:
    """Auto-detect graph6 (single token) or adjacency text."""
    tokens = text.split()
    if len(tokens) == 1 and not set(tokens[0]) <= {"0", "1"}:
        return from_graph6(tokens[0])
    return parse_adjacency(text)


def load_graph(path) -> BitGraph:
    return parse_graph(Path(path).read_text())

"""Canonical labeling of small graphs by partition refinement.

Ordered partitions are refined to equitable ones (cells split by the number
of neighbours each vertex has in a splitter cell), and ties are broken by
individualizing vertices of the first smallest non-singleton cell.  Every
leaf of the search tree gives a relabeling; the canonical form is the one
with the lexicographically least upper-triangle adjacency string.
Automorphisms discovered between equal leaves prune sibling subtrees.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .cayley import BitGraph

MAX_NODES = 500_000


class CanonicalizationAborted(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """``cert`` packs the upper triangle row by row, first pair most significant.

    ``perm[v]`` is the canonical label of vertex ``v``.
    """

    n: int
    cert: int
    perm: tuple[int, ...]

    @property
    def hex(self) -> str:
        nbits = self.n * (self.n - 1) // 2
        return format(self.cert, "0{}x".format(max(1, -(-nbits // 4))))

    def graph(self) -> BitGraph:
        return graph_from_cert(self.n, self.cert)


def graph_from_cert(n: int, cert: int) -> BitGraph:
    rows = [0] * n
    k = n * (n - 1) // 2
    for i in range(n):
        for j in range(i + 1, n):
            k -= 1
            if cert >> k & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return BitGraph(n, tuple(rows))


def _cert_of(rows: Sequence[int], order: Sequence[int]) -> int:
    n = len(order)
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    cert = 0
    for i, v in enumerate(order):
        # bits j > i of the relabeled row, most significant first
        r = rows[v]
        bits = 0
        while r:
            low = r & -r
            j = pos[low.bit_length() - 1]
            if j > i:
                bits |= 1 << (n - 1 - j)
            r ^= low
        cert = (cert << (n - 1 - i)) | bits
    return cert


def _refine(rows: Sequence[int], cells: list[list[int]], queue: deque[int]) -> list[list[int]]:
    """Split cells until equitable; ``queue`` holds splitter cell masks."""
    while queue:
        w = queue.popleft()
        out: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            counts = [(rows[v] & w).bit_count() for v in cell]
            if min(counts) == max(counts):
                out.append(cell)
                continue
            groups: dict[int, list[int]] = {}
            for v, c in zip(cell, counts):
                groups.setdefault(c, []).append(v)
            for c in sorted(groups):
                sub = groups[c]
                out.append(sub)
                m = 0
                for v in sub:
                    m |= 1 << v
                queue.append(m)
        cells = out
    return cells


def _mask(cell: Sequence[int]) -> int:
    m = 0
    for v in cell:
        m |= 1 << v
    return m


def _orbits(n: int, gens: list[tuple[int, ...]]) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(n)]


def canonical_form(g: BitGraph, max_nodes: int = MAX_NODES) -> CanonicalForm:
    n = g.n
    rows = g.rows
    if n == 0:
        return CanonicalForm(0, 0, ())

    # initial partition by degree, then refine
    by_deg: dict[int, list[int]] = {}
    for v in range(n):
        by_deg.setdefault(rows[v].bit_count(), []).append(v)
    cells = [by_deg[d] for d in sorted(by_deg)]
    cells = _refine(rows, cells, deque(_mask(c) for c in cells))

    best: list = [None, None]  # cert, order
    seen: dict[int, tuple[int, ...]] = {}
    auts: list[tuple[int, ...]] = []
    nodes = 0

    def leaf(cells: list[list[int]]) -> None:
        order = tuple(c[0] for c in cells)
        cert = _cert_of(rows, order)
        other = seen.get(cert)
        if other is not None:
            # both orders give the same graph: map order[i] -> other[i]
            gamma = [0] * n
            for a, b in zip(order, other):
                gamma[a] = b
            auts.append(tuple(gamma))
            return
        seen[cert] = order
        if best[0] is None or cert < best[0]:
            best[0], best[1] = cert, order

    def visit(cells: list[list[int]], prefix: list[int]) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise CanonicalizationAborted(f"search tree exceeded {max_nodes} nodes")
        if len(cells) == n:
            leaf(cells)
            return
        size = min(len(c) for c in cells if len(c) > 1)
        t = next(i for i, c in enumerate(cells) if len(c) == size)
        target = sorted(cells[t])
        tried: list[int] = []
        for v in target:
            if tried:
                stab = [a for a in auts if all(a[x] == x for x in prefix)]
                if stab:
                    orb = _orbits(n, stab)
                    if any(orb[v] == orb[u] for u in tried):
                        continue
            tried.append(v)
            rest = [u for u in cells[t] if u != v]
            child = cells[:t] + [[v], rest] + cells[t + 1:]
            child = _refine(rows, child, deque([1 << v]))
            visit(child, prefix + [v])

    visit(cells, [])
    order = best[1]
    perm = [0] * n
    for i, v in enumerate(order):
        perm[v] = i
    return CanonicalForm(n, best[0], tuple(perm))


def is_isomorphic(g: BitGraph, h: BitGraph, witness: bool = False):
    """Isomorphism test by canonical forms.

    With ``witness=True`` returns ``(flag, mapping)`` where ``mapping[v]`` is
    the image in ``h`` of vertex ``v`` of ``g`` (``None`` when not
    isomorphic).  The mapping is checked edge by edge before it is returned.
    """
    if g.n != h.n or sorted(g.degrees()) != sorted(h.degrees()):
        return (False, None) if witness else False
    cg, ch = canonical_form(g), canonical_form(h)
    if cg.cert != ch.cert:
        return (False, None) if witness else False
    inv_h = [0] * h.n
    for v, i in enumerate(ch.perm):
        inv_h[i] = v
    mapping = tuple(inv_h[cg.perm[v]] for v in range(g.n))
    if not is_isomorphism(g, h, mapping):
        raise AssertionError("canonical forms agree but composed mapping is not an isomorphism")
    return (True, mapping) if witness else True


def is_isomorphism(g: BitGraph, h: BitGraph, mapping: Sequence[int]) -> bool:
    if g.n != h.n or sorted(mapping) != list(range(g.n)):
        return False
    return g.relabel(mapping).rows == h.rows

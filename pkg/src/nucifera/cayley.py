"""Cayley graphs over :class:`~nucifera.groups.GroupTable` as row bitmasks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .groups import GroupTable


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class ConnectionSet:
    """Inverse-closed, identity-free subset of group elements (bit ``x`` = element ``x``)."""

    mask: int
    group_order: int

    @classmethod
    def from_elements(cls, g: GroupTable, elements: Iterable[int]) -> "ConnectionSet":
        mask = 0
        for x in elements:
            mask |= 1 << x
        s = cls(mask, g.order)
        s.check(g)
        return s

    def elements(self) -> list[int]:
        return [x for x in range(self.group_order) if self.mask >> x & 1]

    def __len__(self) -> int:
        return self.mask.bit_count()

    def check(self, g: GroupTable) -> None:
        if self.group_order != g.order or self.mask >> g.order:
            raise GraphError(f"connection set does not fit a group of order {g.order}")
        if self.mask & 1:
            raise GraphError("connection set contains the identity")
        for x in self.elements():
            if not self.mask >> g.inv[x] & 1:
                raise GraphError(f"connection set is not inverse-closed: {x} in S but {g.inv[x]} is not")


@dataclass(frozen=True)
class BitGraph:
    """Simple graph on ``n <= 64`` vertices; ``rows[i]`` is the neighbourhood bitmask of ``i``."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= 64 or len(self.rows) != self.n:
            raise GraphError(f"bad vertex count {self.n} for {len(self.rows)} rows")
        for i, r in enumerate(self.rows):
            if r >> self.n:
                raise GraphError(f"row {i} has bits beyond vertex {self.n - 1}")
            if r >> i & 1:
                raise GraphError(f"loop at vertex {i}")
            for j in range(i):
                if (r >> j & 1) != (self.rows[j] >> i & 1):
                    raise GraphError(f"adjacency not symmetric at ({i},{j})")

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]]) -> "BitGraph":
        n = len(matrix)
        rows = []
        for i, row in enumerate(matrix):
            if len(row) != n:
                raise GraphError(f"row {i} has {len(row)} entries, expected {n}")
            mask = 0
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise GraphError(f"entry ({i},{j}) = {v!r} is not 0 or 1")
                mask |= v << j
            rows.append(mask)
        return cls(n, tuple(rows))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "BitGraph":
        rows = [0] * n
        for u, v in edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    def matrix(self) -> list[list[int]]:
        return [[r >> j & 1 for j in range(self.n)] for r in self.rows]

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.rows[i] >> j & 1]

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    @property
    def degree(self) -> int | None:
        """Common degree when regular, else ``None``."""
        ds = set(self.degrees())
        return ds.pop() if len(ds) == 1 else None

    def relabel(self, perm: Sequence[int]) -> "BitGraph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        rows = [0] * self.n
        for v, r in enumerate(self.rows):
            m = 0
            while r:
                low = r & -r
                m |= 1 << perm[low.bit_length() - 1]
                r ^= low
            rows[perm[v]] = m
        return BitGraph(self.n, tuple(rows))

    def delete_vertex(self, v: int) -> "BitGraph":
        keep = [u for u in range(self.n) if u != v]
        return BitGraph.from_matrix([[self.rows[a] >> b & 1 for b in keep] for a in keep])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = frontier = 1
        while frontier:
            nxt = 0
            while frontier:
                low = frontier & -frontier
                nxt |= self.rows[low.bit_length() - 1]
                frontier ^= low
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1


def quotient_table(g: GroupTable) -> list[list[int]]:
    """``q[u][v] = v * u^-1``, the element that decides adjacency of ``u`` and ``v``."""
    return [[g.mul[v][g.inv[u]] for v in range(g.order)] for u in range(g.order)]


def cayley_graph(g: GroupTable, s: ConnectionSet) -> BitGraph:
    """``Cay(g, s)``: ``u ~ v`` iff ``v * u^-1`` is in ``s``."""
    s.check(g)
    rows = []
    for u in range(g.order):
        iu = g.inv[u]
        mask = 0
        for v in range(g.order):
            if s.mask >> g.mul[v][iu] & 1:
                mask |= 1 << v
        rows.append(mask)
    return BitGraph(g.order, tuple(rows))


def generates(g: GroupTable, s: ConnectionSet) -> bool:
    """Whether ``s`` generates ``g`` (equivalently, ``Cay(g, s)`` is connected)."""
    gens = s.elements()
    reached = [False] * g.order
    reached[0] = True
    stack, count = [0], 1
    while stack:
        x = stack.pop()
        row = g.mul[x]
        for t in gens:
            y = row[t]
            if not reached[y]:
                reached[y] = True
                count += 1
                stack.append(y)
    return count == g.order

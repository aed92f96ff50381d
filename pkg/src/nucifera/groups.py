"""Small finite groups as validated multiplication tables.

Every group is stored as an ``order x order`` table of element indices with
the identity at index 0.  Builders cover cyclic, dihedral, symmetric and
alternating groups plus direct products; anything else is imported from a
plain-text table and validated axiom by axiom.

Dihedral naming: ``D(n)`` is the dihedral group of *order* ``n`` (so ``D(6)``
is the symmetry group of a triangle), matching the tables this package
reproduces.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Sequence

MAX_ORDER = 64


class GroupError(ValueError):
    """Raised for out-of-range orders, bad specs and failed group axioms.

    ``axiom`` names the violated property (``"range"``, ``"latin"``,
    ``"identity"``, ``"associativity"``, ``"syntax"``, ``"order"``) and
    ``witness`` holds the offending indices, when there are any.
    """

    def __init__(self, message: str, axiom: str = "", witness: tuple = ()):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


@dataclass(frozen=True)
class GroupTable:
    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    name: str = field(default="", compare=False)

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul[y][x]
            k += 1
        return k

    def element_orders(self) -> list[int]:
        return [self.element_order(x) for x in range(self.order)]

    def to_text(self) -> str:
        lines = [str(self.order)]
        lines += [" ".join(map(str, row)) for row in self.mul]
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"GroupTable({self.name or '?'}, order={self.order})"


@dataclass(frozen=True)
class InvolutionPairPartition:
    involutions: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]

    @property
    def rank(self) -> int:
        """Number of independent choices; there are ``2**rank`` inverse-closed subsets."""
        return len(self.involutions) + len(self.pairs)


def _check_order(n: int, what: str) -> None:
    if not 1 <= n <= MAX_ORDER:
        raise GroupError(f"{what}: order {n} outside 1..{MAX_ORDER}", axiom="order")


def _from_mul(mul: Sequence[Sequence[int]], name: str) -> GroupTable:
    # builders already put the identity at 0; only inverses are derived here
    n = len(mul)
    inv = [0] * n
    for x in range(n):
        inv[x] = mul[x].index(0)
    return GroupTable(n, tuple(tuple(r) for r in mul), tuple(inv), name)


def build_cyclic(n: int) -> GroupTable:
    _check_order(n, f"C({n})")
    mul = [[(a + b) % n for b in range(n)] for a in range(n)]
    return _from_mul(mul, f"C({n})")


def build_dihedral(n: int) -> GroupTable:
    """Dihedral group of order ``n``; element ``i + m*j`` is ``r**i s**j`` with ``m = n/2``."""
    if n % 2 or n < 4:
        raise GroupError(f"D({n}): dihedral order must be even and at least 4", axiom="order")
    _check_order(n, f"D({n})")
    m = n // 2
    mul = [[0] * n for _ in range(n)]
    for a, b, c, d in itertools.product(range(m), range(2), range(m), range(2)):
        rot = (a + c) % m if b == 0 else (a - c) % m
        mul[a + m * b][c + m * d] = rot + m * ((b + d) % 2)
    return _from_mul(mul, f"D({n})")


def _perm_group(perms: list[tuple[int, ...]], name: str) -> GroupTable:
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x)): apply q first
    mul = [[index[tuple(p[q[x]] for x in range(len(p)))] for q in perms] for p in perms]
    return _from_mul(mul, name)


def _sign(p: tuple[int, ...]) -> int:
    s, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def build_symmetric(k: int) -> GroupTable:
    if k < 1:
        raise GroupError(f"S({k}): degree must be positive", axiom="order")
    _check_order(math.factorial(k), f"S({k})")
    return _perm_group(list(itertools.permutations(range(k))), f"S({k})")


def build_alternating(k: int) -> GroupTable:
    if k < 1:
        raise GroupError(f"A({k}): degree must be positive", axiom="order")
    _check_order(max(1, math.factorial(k) // 2), f"A({k})")
    perms = [p for p in itertools.permutations(range(k)) if _sign(p) == 1]
    return _perm_group(perms, f"A({k})")


def direct_product(g: GroupTable, h: GroupTable) -> GroupTable:
    """Componentwise product; pair ``(x, y)`` gets index ``x*|h| + y``."""
    n = g.order * h.order
    name = f"{g.name} x {h.name}"
    _check_order(n, name)
    m = h.order
    mul = [
        [g.mul[a // m][b // m] * m + h.mul[a % m][b % m] for b in range(n)]
        for a in range(n)
    ]
    return _from_mul(mul, name)


_BUILDERS = {
    "C": build_cyclic,
    "D": build_dihedral,
    "S": build_symmetric,
    "A": build_alternating,
}

_ATOM = re.compile(r"([CDSA])\s*\(\s*(\d+)\s*\)")
_TIMES = re.compile(r"[x×*]")


def parse_group_spec(text: str) -> GroupTable:
    """Parse ``C(n) | D(n) | S(k) | A(k)`` atoms joined by ``x`` into a group.

    Products associate to the left.  Syntax errors carry the 0-based
    character position in ``witness``.
    """
    pos, n = 0, len(text)
    group: GroupTable | None = None
    expect_atom = True

    def skip_ws(i: int) -> int:
        while i < n and text[i].isspace():
            i += 1
        return i

    while True:
        pos = skip_ws(pos)
        if expect_atom:
            m = _ATOM.match(text, pos)
            if not m:
                raise GroupError(
                    f"syntax error at position {pos}: expected C(n), D(n), S(k) or A(k) in {text!r}",
                    axiom="syntax", witness=(pos,))
            atom = _BUILDERS[m.group(1)](int(m.group(2)))
            group = atom if group is None else direct_product(group, atom)
            pos = m.end()
            expect_atom = False
        else:
            if pos == n:
                break
            if not _TIMES.match(text, pos):
                raise GroupError(
                    f"syntax error at position {pos}: expected 'x' in {text!r}",
                    axiom="syntax", witness=(pos,))
            pos += 1
            expect_atom = True
    assert group is not None
    return group


def canonical_spec(text: str) -> str:
    """Normalized display form of a group spec, e.g. ``'D(12) x C(2)'``."""
    return parse_group_spec(text).name


def validate_table(candidate: Sequence[Sequence[int]], name: str = "") -> GroupTable:
    """Check the group axioms on a raw table and return it with the identity at 0.

    Checks run in the order shape/range, Latin square, identity,
    associativity; the first failure raises :class:`GroupError` with a
    witness.
    """
    rows = [list(r) for r in candidate]
    n = len(rows)
    if n == 0:
        raise GroupError("empty table", axiom="range")
    _check_order(n, name or "table")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise GroupError(f"row {i} has {len(r)} entries, expected {n}", axiom="range", witness=(i,))
        for j, v in enumerate(r):
            if not isinstance(v, int) or not 0 <= v < n:
                raise GroupError(f"entry ({i},{j}) = {v!r} outside 0..{n - 1}", axiom="range", witness=(i, j))
    full = set(range(n))
    for i, r in enumerate(rows):
        if set(r) != full:
            raise GroupError(f"Latin-square violation in row {i}", axiom="latin", witness=(i,))
    for j in range(n):
        if {rows[i][j] for i in range(n)} != full:
            raise GroupError(f"Latin-square violation in column {j}", axiom="latin", witness=(j,))
    ident = [e for e in range(n)
             if all(rows[e][x] == x and rows[x][e] == x for x in range(n))]
    if not ident:
        raise GroupError("no two-sided identity element", axiom="identity")
    e = ident[0]
    for a, b, c in itertools.product(range(n), repeat=3):
        if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
            raise GroupError(f"associativity fails for ({a},{b},{c})", axiom="associativity", witness=(a, b, c))
    if e != 0:
        # swap labels e <-> 0
        relabel = list(range(n))
        relabel[0], relabel[e] = e, 0
        rows = [[relabel[rows[relabel[a]][relabel[b]]] for b in range(n)] for a in range(n)]
    return _from_mul(rows, name)


def parse_table_text(text: str) -> list[list[int]]:
    """Read the table file format: ``n`` on the first line, then ``n`` rows."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GroupError("empty table file", axiom="range")
    try:
        n = int(lines[0][0])
        rows = [[int(t) for t in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise GroupError(f"non-integer token in table file: {exc}", axiom="range") from None
    if len(lines[0]) != 1 or len(rows) != n:
        raise GroupError(f"header says {n} rows, found {len(rows)}", axiom="range")
    return rows


def load_table(path, name: str = "") -> GroupTable:
    with open(path) as fh:
        return validate_table(parse_table_text(fh.read()), name=name or str(path))


def involution_pair_partition(g: GroupTable) -> InvolutionPairPartition:
    involutions, pairs = [], []
    for x in range(1, g.order):
        y = g.inv[x]
        if y == x:
            involutions.append(x)
        elif x < y:
            pairs.append((x, y))
    return InvolutionPairPartition(tuple(involutions), tuple(pairs))

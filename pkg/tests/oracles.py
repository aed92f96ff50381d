"""Independent reference implementations used only by the tests.

None of these share code with the package: rational Gauss-Jordan,
cofactor expansion, exhaustive isomorphism search and brute-force group
checks.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np


def rational_inverse(m):
    """``(det, inverse)`` over the rationals; inverse is ``None`` when singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0, None
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        det *= p
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    assert det.denominator == 1
    return int(det), [row[n:] for row in a]


def cofactor_det(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def random_graph_matrix(rng: random.Random, n: int, p: float = 0.5):
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                m[i][j] = m[j][i] = 1
    return m


def all_graph_matrices(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        m = [[0] * n for _ in range(n)]
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                m[i][j] = m[j][i] = 1
        yield m


def brute_isomorphic(m1, m2) -> bool:
    """Backtracking over all bijections, extending one vertex at a time."""
    n = len(m1)
    if n != len(m2):
        return False
    if sorted(map(sum, m1)) != sorted(map(sum, m2)):
        return False
    image = [-1] * n
    used = [False] * n

    def extend(v: int) -> bool:
        if v == n:
            return True
        for w in range(n):
            if used[w] or sum(m1[v]) != sum(m2[w]):
                continue
            if all(m1[v][u] == m2[w][image[u]] for u in range(v)):
                image[v] = w
                used[w] = True
                if extend(v + 1):
                    return True
                used[w] = False
        return False

    return extend(0)


def brute_canonical_codes(n: int) -> np.ndarray:
    """For every labeled graph on ``n`` vertices (edge bitmask index), the
    least edge bitmask over all vertex permutations."""
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: k for k, p in enumerate(pairs)}
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    best = masks.copy()
    for perm in itertools.permutations(range(n)):
        img = np.zeros_like(masks)
        for k, (i, j) in enumerate(pairs):
            a, b = sorted((perm[i], perm[j]))
            img |= ((masks >> k) & 1) << index[(a, b)]
        np.minimum(best, img, out=best)
    return best


def matrix_from_edge_mask(n: int, bits: int):
    m = [[0] * n for _ in range(n)]
    for k, (i, j) in enumerate(itertools.combinations(range(n), 2)):
        if bits >> k & 1:
            m[i][j] = m[j][i] = 1
    return m


def first_nonassociative_triple(table):
    n = len(table)
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            return a, b, c
    return None


def classify_elements(table):
    """Count involutions and inverse pairs by searching each element's inverse."""
    n = len(table)
    e = next(x for x in range(n) if all(table[x][y] == y for y in range(n)))
    invol = 0
    pairs = 0
    for x in range(n):
        if x == e:
            continue
        y = next(y for y in range(n) if table[x][y] == e)
        if y == x:
            invol += 1
        elif x < y:
            pairs += 1
    return invol, pairs


def closure_size(table, gens):
    """Size of the subgroup generated by ``gens`` (BFS on products)."""
    n = len(table)
    e = next(x for x in range(n) if all(table[x][y] == y for y in range(n)))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = table[x][s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def random_loop(rng: random.Random, n: int):
    """Random Latin square with row/column 0 equal to the identity (backtracking)."""
    t = [[None] * n for _ in range(n)]
    for i in range(n):
        t[0][i] = i
        t[i][0] = i
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]

    def fill(k: int) -> bool:
        if k == len(cells):
            return True
        i, j = cells[k]
        vals = list(range(n))
        rng.shuffle(vals)
        for v in vals:
            if v in t[i] or any(t[r][j] == v for r in range(n)):
                continue
            t[i][j] = v
            if fill(k + 1):
                return True
            t[i][j] = None
        return False

    assert fill(0)
    return t

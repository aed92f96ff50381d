"""Exact determinant / adjugate certificates for 0-1 adjacency matrices.

The adjugate ``adj = det(A) * A^-1`` is computed modulo a few large primes
and lifted by Chinese remaindering.  The product of the primes is required to
exceed twice the Hadamard bound on every cofactor and on the determinant, so
the symmetric lift is the exact integer.  Zero decisions are only made on
lifted values; a nonzero residue is enough to prove an entry nonzero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cayley import BitGraph

PRIMES = (4611686018427387847, 4611686018427387817)
# used only when a configured prime happens to divide det(A)
SPARE_PRIMES = (4611686018427387787, 4611686018427387761, 4611686018427387751,
                4611686018427387737)


class ExactnessNotGuaranteed(ValueError):
    """The modulus product cannot certify matrices of this order."""


class ExactnessViolation(AssertionError):
    """An internal exactness check (adjugate identity or magnitude bound) failed."""


class Verdict(str, enum.Enum):
    SINGULAR = "Singular"
    DIAG_NONZERO = "DiagNonzero"
    OFFDIAG_ZERO = "OffdiagZero"
    NUCIFEROUS = "Nuciferous"


def hadamard_det_bound(n: int) -> int:
    """``floor(n**(n/2))``, a bound on ``|det|`` of any n x n 0-1 matrix."""
    return math.isqrt(n ** n) if n else 1


def hadamard_cofactor_bound(n: int) -> int:
    return hadamard_det_bound(n - 1) if n > 1 else 1


def certified_range(primes: Sequence[int] = PRIMES) -> int:
    """Largest order ``n <= 64`` whose determinant and cofactors lift exactly."""
    modulus = math.prod(primes)
    best = 0
    for n in range(1, 65):
        if 2 * max(hadamard_det_bound(n), hadamard_cofactor_bound(n)) + 2 < modulus:
            best = n
    return best


@dataclass(frozen=True)
class Certificate:
    n: int
    det: int
    adj: tuple[tuple[int, ...], ...] | None
    verdict: Verdict
    witness: tuple[int, ...] = ()
    primes_used: tuple[int, ...] = ()

    @property
    def nuciferous(self) -> bool:
        return self.verdict is Verdict.NUCIFEROUS

    def inverse(self) -> list[list[Fraction]]:
        """Exact ``A^-1`` as reduced fractions."""
        if self.det == 0 or self.adj is None:
            raise ValueError("singular matrix has no inverse")
        return [[Fraction(x, self.det) for x in row] for row in self.adj]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "det": str(self.det),
            "verdict": self.verdict.value,
            "witness": list(self.witness),
            "primes": [str(p) for p in self.primes_used],
            "adj": None if self.adj is None else [[str(x) for x in row] for row in self.adj],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        adj = d.get("adj")
        return cls(
            n=d["n"],
            det=int(d["det"]),
            adj=None if adj is None else tuple(tuple(int(x) for x in row) for row in adj),
            verdict=Verdict(d["verdict"]),
            witness=tuple(d.get("witness", ())),
            primes_used=tuple(int(p) for p in d.get("primes", ())),
        )


def _rows(a: BitGraph) -> list[list[int]]:
    return a.matrix()


def _eliminate(m: list[list[int]], p: int, rhs: list[list[int]] | None = None) -> int:
    """In-place Gauss-Jordan mod ``p`` (first nonzero pivot); returns det mod p.

    When ``rhs`` is given and the matrix is invertible mod ``p``, ``rhs`` is
    overwritten with ``A^-1 rhs``.  Returns 0 as soon as a column has no pivot.
    """
    n = len(m)
    det = 1
    for c in range(n):
        r = c
        while r < n and m[r][c] % p == 0:
            r += 1
        if r == n:
            return 0
        if r != c:
            m[c], m[r] = m[r], m[c]
            if rhs is not None:
                rhs[c], rhs[r] = rhs[r], rhs[c]
            det = -det
        piv = m[c][c] % p
        det = det * piv % p
        pinv = pow(piv, -1, p)
        row = m[c] = [x * pinv % p for x in m[c]]
        if rhs is not None:
            rrow = rhs[c] = [x * pinv % p for x in rhs[c]]
        targets = range(n) if rhs is not None else range(c + 1, n)
        for i in targets:
            if i == c:
                continue
            f = m[i][c] % p
            if f:
                m[i] = [(x - f * y) % p for x, y in zip(m[i], row)]
                if rhs is not None:
                    rhs[i] = [(x - f * y) % p for x, y in zip(rhs[i], rrow)]
    return det % p


def det_mod(a: BitGraph, p: int) -> int:
    """``det(A) mod p`` for the adjacency matrix of ``a``."""
    if a.n == 0:
        return 1 % p
    return _eliminate(_rows(a), p)


def _adj_mod(a: BitGraph, p: int) -> tuple[int, list[list[int]] | None]:
    n = a.n
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    d = _eliminate(_rows(a), p, ident)
    if d == 0:
        return 0, None
    return d, [[d * x % p for x in row] for row in ident]


def _lift(residues: Sequence[int], primes: Sequence[int]) -> int:
    """Symmetric CRT lift into ``(-M/2, M/2]``."""
    modulus = math.prod(primes)
    x = 0
    for r, p in zip(residues, primes):
        q = modulus // p
        x += r * q * pow(q, -1, p)
    x %= modulus
    return x - modulus if x > modulus // 2 else x


def adjugate_exact(a: BitGraph, primes: Sequence[int] = PRIMES) -> Certificate:
    n = a.n
    if n > certified_range(primes):
        raise ExactnessNotGuaranteed(
            f"order {n} exceeds certified range {certified_range(primes)} of the configured primes")
    if n == 0:
        raise ValueError("empty graph")
    bound = max(hadamard_det_bound(n), hadamard_cofactor_bound(n))

    used: list[int] = []
    adjs: list[list[list[int]]] = []
    dets: list[int] = []
    zero_primes: list[int] = []
    for p in list(primes) + list(SPARE_PRIMES):
        d, adj = _adj_mod(a, p)
        if d == 0:
            zero_primes.append(p)
            if math.prod(zero_primes) > bound:
                # every listed prime divides det and their product exceeds |det|
                return Certificate(n, 0, None, Verdict.SINGULAR, (), tuple(zero_primes))
            continue
        used.append(p)
        dets.append(d)
        adjs.append(adj)
        if math.prod(used) > 2 * bound + 2:
            break
    else:
        raise ExactnessNotGuaranteed("ran out of primes not dividing det(A)")

    det = _lift(dets, used)
    adj = tuple(
        tuple(_lift([m[i][j] for m in adjs], used) for j in range(n)) for i in range(n)
    )
    _check_identity(a, det, adj)
    if abs(det) > hadamard_det_bound(n) or any(
            abs(x) > hadamard_cofactor_bound(n) for row in adj for x in row):
        raise ExactnessViolation("lifted value exceeds the Hadamard bound")

    verdict, witness = _classify(det, adj)
    return Certificate(n, det, adj, verdict, witness, tuple(used))


def _check_identity(a: BitGraph, det: int, adj) -> None:
    n = a.n
    for i in range(n):
        r = a.rows[i]
        nbrs = [k for k in range(n) if r >> k & 1]
        for j in range(n):
            s = sum(adj[k][j] for k in nbrs)
            if s != (det if i == j else 0):
                raise ExactnessViolation(f"A*adj != det*I at ({i},{j})")


def _classify(det: int, adj) -> tuple[Verdict, tuple[int, ...]]:
    if det == 0:
        return Verdict.SINGULAR, ()
    n = len(adj)
    for i in range(n):
        if adj[i][i] != 0:
            return Verdict.DIAG_NONZERO, (i,)
    for i in range(n):
        for j in range(n):
            if i != j and adj[i][j] == 0:
                return Verdict.OFFDIAG_ZERO, (i, j)
    return Verdict.NUCIFEROUS, ()


def is_nuciferous(a: BitGraph, primes: Sequence[int] = PRIMES) -> Certificate:
    cert = adjugate_exact(a, primes)
    if cert.nuciferous and a.n >= 2 and not a.is_connected():
        raise ExactnessViolation("nuciferous verdict on a disconnected graph")
    return cert


def rank_mod(m: Sequence[Sequence[int]], p: int) -> int:
    rows = [[x % p for x in r] for r in m]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        prow = rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(rank + 1, len(rows)):
            f = rows[r][c]
            if f:
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], prow)]
        rank += 1
    return rank


def rank_exact(m: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    rows = [list(r) for r in m]
    if not rows:
        return 0
    nr, nc = len(rows), len(rows[0])
    rank, prev = 0, 1
    for c in range(nc):
        piv = next((r for r in range(rank, nr) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][c]
        for r in range(rank + 1, nr):
            rows[r] = [(pv * rows[r][k] - rows[r][c] * rows[rank][k]) // prev for k in range(nc)]
        prev = pv
        rank += 1
        if rank == nr:
            break
    return rank


def vertex_deleted_nullity_is_one(a: BitGraph, cert: Certificate, v: int) -> bool:
    """Whether deleting ``v`` leaves an adjacency matrix of nullity exactly one.

    The vanishing principal cofactor ``adj[v][v]`` gives nullity >= 1; a
    rank of ``n - 2`` modulo one prime gives nullity <= 1.
    """
    if not cert.nuciferous or cert.adj is None:
        raise ValueError(f"precondition: certificate verdict is {cert.verdict.value}, not Nuciferous")
    if not 0 <= v < a.n:
        raise ValueError(f"vertex {v} out of range")
    if cert.adj[v][v] != 0:
        return False
    m = a.delete_vertex(v).matrix()
    target = a.n - 2
    for p in PRIMES:
        if rank_mod(m, p) == target:
            return True
    return rank_exact(m) == target

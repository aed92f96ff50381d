"""Compiled prescreen over blocks of connection-set indices.

For each subset index the kernel assembles the connection set, drops it if
its size is out of range or it does not generate the group, and then solves
``A x = e_0`` modulo word-sized primes.  ``x[0]`` is the diagonal entry of
``A^-1`` (constant along the diagonal for a Cayley graph), so a nonzero
residue proves the graph is not nuciferous.

When ``x[0]`` vanishes the system is solved modulo every screening prime.
If some ``x[j]`` vanishes modulo all of them, the matching cofactor is
zero outright as long as the product of the primes beats twice the
cofactor bound; the caller decides that and passes ``offdiag_exact``.
Only the remaining subsets go to exact certification.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# product exceeds 2 * 36**18, the determinant bound for n <= 36
SCREEN_PRIMES = np.array([2147483647, 2147483629, 2147483587], dtype=np.int64)

# status codes
OUT_OF_RANGE = 0
NOT_GENERATING = 1
SINGULAR = 2
DIAG_NONZERO = 3
CANDIDATE = 4
OFFDIAG_ZERO = 5


@njit(cache=True)
def _solve_e0(a, work, x, n, p):
    """Solve ``a x = e_0`` mod p; returns False when singular mod p."""
    for i in range(n):
        for j in range(n):
            work[i, j] = a[i, j]
        x[i] = 0
    x[0] = 1
    for c in range(n):
        r = c
        while r < n and work[r, c] == 0:
            r += 1
        if r == n:
            return False
        if r != c:
            for j in range(c, n):
                t = work[c, j]
                work[c, j] = work[r, j]
                work[r, j] = t
            t = x[c]
            x[c] = x[r]
            x[r] = t
        # modular inverse of the pivot by Fermat
        piv = work[c, c]
        inv = 1
        base = piv
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for i in range(c + 1, n):
            f = work[i, c]
            if f != 0:
                f = f * inv % p
                for j in range(c, n):
                    work[i, j] = (work[i, j] - f * work[c, j]) % p
                x[i] = (x[i] - f * x[c]) % p
    for c in range(n - 1, -1, -1):
        s = x[c]
        for j in range(c + 1, n):
            s = (s - work[c, j] * x[j]) % p
        piv = work[c, c]
        inv = 1
        base = piv
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        x[c] = s * inv % p
    return True


@njit(cache=True)
def screen_block(basis_masks, basis_sizes, mul, quot, lo, hi, dmin, dmax, prune,
                 primes, status, offdiag_exact=False):
    """Classify subset indices ``lo..hi-1``; ``status[i - lo]`` gets a code."""
    n = mul.shape[0]
    k = basis_masks.shape[0]
    a = np.zeros((n, n), dtype=np.int64)
    work = np.zeros((n, n), dtype=np.int64)
    x = np.zeros(n, dtype=np.int64)
    zeros = np.zeros(n, dtype=np.int64)
    elems = np.zeros(n, dtype=np.int64)
    stack = np.zeros(n, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    for idx in range(lo, hi):
        s = np.int64(0)
        deg = 0
        for b in range(k):
            if (idx >> b) & 1:
                s |= basis_masks[b]
                deg += basis_sizes[b]
        if deg < dmin or deg > dmax:
            status[idx - lo] = OUT_OF_RANGE
            continue
        m = 0
        for e in range(n):
            if (s >> e) & 1:
                elems[m] = e
                m += 1
        if prune:
            for v in range(n):
                seen[v] = False
            seen[0] = True
            top = 1
            stack[0] = 0
            count = 1
            while top > 0:
                top -= 1
                u = stack[top]
                for t in range(m):
                    w = mul[u, elems[t]]
                    if not seen[w]:
                        seen[w] = True
                        stack[top] = w
                        top += 1
                        count += 1
            if count < n:
                status[idx - lo] = NOT_GENERATING
                continue
        for u in range(n):
            for v in range(n):
                a[u, v] = (s >> quot[u, v]) & 1
        code = SINGULAR
        for pi in range(primes.shape[0]):
            if _solve_e0(a, work, x, n, primes[pi]):
                code = DIAG_NONZERO if x[0] != 0 else CANDIDATE
                break
        if code == CANDIDATE and offdiag_exact:
            # zeros[j] counts the primes under which x[j] vanished
            for j in range(n):
                zeros[j] = 1 if x[j] == 0 else 0
            full = True
            for pj in range(primes.shape[0]):
                if pj == pi:
                    continue
                if not _solve_e0(a, work, x, n, primes[pj]):
                    full = False
                    break
                if x[0] != 0:
                    code = DIAG_NONZERO
                    break
                for j in range(n):
                    if x[j] == 0:
                        zeros[j] += 1
            if full and code == CANDIDATE:
                for j in range(1, n):
                    if zeros[j] == primes.shape[0]:
                        code = OFFDIAG_ZERO
                        break
        status[idx - lo] = code

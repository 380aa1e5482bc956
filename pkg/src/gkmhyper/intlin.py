"""Exact integer linear algebra on lists of Python ints.

Matrices are lists of rows.  Everything here works over Z with unbounded
integers; no floating point is ever involved.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def copy(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(r) for r in m]


def transpose(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    a = copy(m)
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Row Hermite normal form with the zero rows dropped.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``.  Two lattices are equal iff their forms are equal.
    """
    h, _ = _echelon(rows, ncols, track=False)
    return h


def hnf_with_transform(rows: Sequence[Sequence[int]], ncols: int | None = None):
    """Return ``(H, U)`` with ``U`` unimodular and ``U * rows = H_full``.

    ``H_full`` keeps the zero rows at the bottom so that the trailing rows of
    ``U`` span the left kernel of ``rows``.
    """
    return _echelon(rows, ncols, track=True)


def _echelon(rows, ncols, track):
    a = copy(rows)
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    u = identity(m) if track else None
    r = 0
    for c in range(n):
        if r == m:
            break
        # gcd-combine column c into row r
        for i in range(r + 1, m):
            if a[i][c] == 0:
                continue
            x, y = a[r][c], a[i][c]
            g, s, t = _xgcd(x, y)
            p, q = x // g, y // g
            ra, ia = a[r], a[i]
            a[r] = [s * v + t * w for v, w in zip(ra, ia)]
            a[i] = [-q * v + p * w for v, w in zip(ra, ia)]
            if track:
                ru, iu = u[r], u[i]
                u[r] = [s * v + t * w for v, w in zip(ru, iu)]
                u[i] = [-q * v + p * w for v, w in zip(ru, iu)]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-v for v in a[r]]
            if track:
                u[r] = [-v for v in u[r]]
        piv = a[r][c]
        for i in range(r):
            f = a[i][c] // piv
            if f:
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
                if track:
                    u[i] = [v - f * w for v, w in zip(u[i], u[r])]
        r += 1
    if track:
        return a, u
    return a[:r], None


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def rank(rows: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    return len(hnf(rows, ncols))


def left_kernel(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis of ``{y : y * rows = 0}`` (a saturated lattice)."""
    if not rows:
        return []
    h, u = hnf_with_transform(rows, ncols)
    return [u[i] for i in range(len(h)) if not any(h[i])]


def kernel(m: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis (as rows) of ``{x in Z^ncols : m x = 0}``, in Hermite form."""
    if not m:
        return identity(ncols)
    k = left_kernel(transpose(m), len(m))
    return hnf(k, ncols)


def smith_invariants(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of the matrix."""
    a = copy(rows)
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    out = []
    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, n):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        out.append(abs(a[t][t]))
        t += 1
    return out


def is_saturated(rows: Sequence[Sequence[int]], ncols: int | None = None) -> bool:
    """True iff the row lattice is a direct summand of Z^n."""
    return all(d == 1 for d in smith_invariants(rows, ncols))


def reduce_mod(h: Matrix, v: Sequence[int]) -> list[int]:
    """Reduce ``v`` against a Hermite basis ``h``; zero iff ``v`` lies in it."""
    v = list(v)
    for row in h:
        c = next(k for k, x in enumerate(row) if x)
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return v


def in_lattice(h: Matrix, v: Sequence[int]) -> bool:
    return not any(reduce_mod(h, v))


def solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """An integer solution of ``a x = b`` or None."""
    ncols = len(a[0]) if a else 0
    at = transpose(a, ncols) if a else [[] for _ in range(ncols)]
    # rows of at are the columns of a; find y with y * at = b
    h, u = hnf_with_transform(at, len(a))
    coeff = [0] * len(h)
    rest = list(b)
    for i, row in enumerate(h):
        if not any(row):
            break
        c = next(k for k, x in enumerate(row) if x)
        if rest[c] % row[c]:
            return None
        q = rest[c] // row[c]
        coeff[i] = q
        rest = [x - q * y for x, y in zip(rest, row)]
    if any(rest):
        return None
    return [sum(coeff[i] * u[i][k] for i in range(len(h))) for k in range(ncols)]


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def proportional(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff ``a`` and ``b`` are linearly dependent over Q."""
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            if a[i] * b[j] - a[j] * b[i]:
                return False
    return True


def inverse_unimodular(m: Sequence[Sequence[int]]) -> Matrix:
    """Integer inverse of a square matrix with determinant +-1."""
    n = len(m)
    h, u = hnf_with_transform(m, n)
    if h != identity(n):
        raise ValueError("matrix is not unimodular")
    return u

"""Hodge-Deligne polynomials e(X)(t), t = uv, of the hypersurface families.

Three independent evaluations are provided and compared in tests: closed
forms, the blow-up recursions e(Bl_Z X) = e(X) + (t + ... + t^{k-1}) e(Z),
and the binomial Betti formulas.  Polynomials are coefficient tuples,
lowest degree first.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from ..families import InvalidParams

Poly = tuple[int, ...]


def p_add(*ps: Poly) -> Poly:
    n = max((len(p) for p in ps), default=0)
    out = [0] * n
    for p in ps:
        for i, c in enumerate(p):
            out[i] += c
    return _trim(out)


def p_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _trim(c) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def one_plus_t(n: int) -> Poly:
    """(1 + t)^n."""
    return tuple(comb(n, k) for k in range(n + 1))


def geometric(n: int) -> Poly:
    """1 + t + ... + t^{n-1}, the polynomial of P^{n-1}; zero for n = 0."""
    return tuple([1] * n)


def t_pow(n: int) -> Poly:
    return tuple([0] * n + [1])


def _check(fam: str, i: int, j: int):
    if i < 0 or j < 0:
        raise InvalidParams("indices must be nonnegative")
    if fam == "br" and i == 0 and j < 2:
        raise InvalidParams(f"BR_{{{i},{j}}} is empty or a point")
    if fam == "r" and i + j < 2:
        raise InvalidParams(f"R_{{{i},{j}}} is empty or a point")


# --- closed forms -----------------------------------------------------------------

def hd_br(i: int, j: int) -> Poly:
    _check("br", i, j)
    if j == 0:
        return one_plus_t(i - 1)  # a Bott tower of dimension i - 1
    if i <= j:
        return p_mul(one_plus_t(i), geometric(j))
    return p_add(p_mul(one_plus_t(i), geometric(j)), p_mul(t_pow(j), one_plus_t(i - j - 1)))


def hd_r(i: int, j: int) -> Poly:
    _check("r", i, j)
    m = min(i, j)
    if m == 0:
        return one_plus_t(i + j - 1)
    if i == j:
        return p_add(*(p_mul(t_pow(l), one_plus_t(2 * i - 1 - 2 * l)) for l in range(i)))
    return p_add(*(p_mul(t_pow(l), one_plus_t(i + j - 1 - 2 * l)) for l in range(m + 1)))


# --- blow-up recursions ---------------------------------------------------------------

@lru_cache(maxsize=None)
def hd_br_recursive(i: int, j: int) -> Poly:
    """BR_{i,j} is the blow-up of BF_{i-1} x P^j along BR_{i-1,j-1} (codimension 2)."""
    if i == 0:
        return geometric(j)
    if j == 0:
        return one_plus_t(i - 1)
    return p_add(p_mul(one_plus_t(i - 1), geometric(j + 1)), p_mul(t_pow(1), hd_br_recursive(i - 1, j - 1)))


@lru_cache(maxsize=None)
def hd_r_recursive(i: int, j: int) -> Poly:
    """R_{i,j} is the blow-up of BF_{i-1} x BF_j along R_{i-1,j-1} (codimension 2)."""
    if i == 0:
        return one_plus_t(j - 1) if j >= 1 else ()
    if j == 0:
        return one_plus_t(i - 1)
    return p_add(one_plus_t(i + j - 1), p_mul(t_pow(1), hd_r_recursive(i - 1, j - 1)))


# --- Betti numbers ---------------------------------------------------------------------

def _c(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def betti_br_binomial(i: int, j: int) -> list[int]:
    """b^{2k}(BR_{i,j}) for i > j > 0 from binomial coefficients."""
    if not i > j > 0:
        raise InvalidParams("binomial formula needs i > j > 0")
    n = i + j - 1
    return [sum(_c(i, k - l) for l in range(j)) + _c(i - j - 1, k - j) for k in range(n + 1)]


def betti_r_binomial(i: int, j: int) -> list[int]:
    """b^{2k}(R_{i,j}) for i, j > 0 from binomial coefficients."""
    if not (i > 0 and j > 0 and i + j >= 2):
        raise InvalidParams("binomial formula needs i, j > 0")
    m = min(i, j)
    n = i + j - 1
    terms = range(m) if i == j else range(m + 1)
    return [sum(_c(i + j - 1 - 2 * l, k - l) for l in terms) for k in range(n + 1)]


def betti_from_hd(p: Poly) -> list[int]:
    return list(p)


def hd(family: str, i: int, j: int) -> Poly:
    if family == "br":
        return hd_br(i, j)
    if family == "r":
        return hd_r(i, j)
    if family == "bf":
        return one_plus_t(i)
    raise InvalidParams(f"no Hodge-Deligne formula for family {family!r}")


def is_palindromic(p: Poly) -> bool:
    return tuple(p) == tuple(reversed(p))

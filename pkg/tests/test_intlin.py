import math
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from gkmhyper import intlin


def matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_hnf_spans_same_lattice(m):
    n = len(m[0])
    h = intlin.hnf(m, n)
    assert len(h) == sympy.Matrix(m).rank()
    for row in m:
        assert intlin.in_lattice(h, row)
    for row in h:
        assert intlin.solve(intlin.transpose(m, n), row) is not None


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_hnf_transform_is_unimodular(m):
    n = len(m[0])
    h, u = intlin.hnf_with_transform(m, n)
    assert abs(intlin.det(u)) == 1
    prod = intlin.matmul(u, m)
    assert prod[:len(h)] == h
    assert all(not any(r) for r in prod[len(h):])


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_smith_matches_sympy(m):
    n = len(m[0])
    ours = intlin.smith_invariants(m, n)
    snf = smith_normal_form(sympy.Matrix(m), domain=sympy.ZZ)
    theirs = [abs(int(snf[k, k])) for k in range(min(snf.shape)) if snf[k, k] != 0]
    assert ours == theirs


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
@settings(max_examples=150, deadline=None)
def test_det_matches_sympy(m):
    assert intlin.det(m) == sympy.Matrix(m).det()


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_left_kernel(m):
    n = len(m[0])
    k = intlin.left_kernel(m, n)
    assert len(k) == len(m) - sympy.Matrix(m).rank()
    for row in k:
        assert not any(intlin.matvec(intlin.transpose(m, n), row))
    if k:
        assert intlin.is_saturated(k, len(m))


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_kernel(m):
    n = len(m[0])
    k = intlin.kernel(m, n)
    assert len(k) == n - sympy.Matrix(m).rank()
    for v in k:
        assert not any(intlin.matvec(m, v))


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=5))
def test_primitive(v):
    p = intlin.primitive(v)
    if any(v):
        assert math.gcd(*p) == 1
        assert intlin.proportional(p, v)
    else:
        assert not any(p)


def test_inverse_unimodular():
    m = [[2, 1, 0], [1, 1, 0], [3, 2, 1]]
    inv = intlin.inverse_unimodular(m)
    assert intlin.matmul(m, inv) == intlin.identity(3)


def test_solve_needs_integrality():
    # 2x = 1 has no integer solution
    assert intlin.solve([[2]], [1]) is None
    assert intlin.solve([[2, 0], [0, 3]], [4, 9]) == [2, 3]

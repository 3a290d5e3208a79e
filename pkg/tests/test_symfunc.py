import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lcslab.symfunc import (
    SymPoly,
    NotSymmetric,
    bound,
    density,
    dim_irrep,
    dominates,
    elementary,
    flambda_dims,
    numerator,
    partitions,
    schur,
    upper_series,
)


def bialternant(lam, n):
    t = sympy.symbols(f"t1:{n + 1}")
    num = sympy.Matrix(n, n, lambda i, j: t[j] ** (lam[i] + n - 1 - i))
    den = sympy.Matrix(n, n, lambda i, j: t[j] ** (n - 1 - i))
    poly = sympy.Poly(sympy.cancel(num.det() / den.det()), *t)
    return {tuple(m): int(c) for m, c in zip(poly.monoms(), poly.coeffs())}


def test_schur_two_one():
    assert schur((2, 1), 2).coeffs == {(2, 1): 1, (1, 2): 1}


def test_schur_at_ones():
    assert schur((2, 1, 0), 3).evaluate([1, 1, 1]) == 8


@pytest.mark.parametrize("lam,n", [((2, 1), 2), ((3, 1), 2), ((2, 1, 0), 3), ((3, 2, 1), 3), ((2, 1, 1, 0), 4)])
def test_schur_matches_bialternant(lam, n):
    assert schur(lam, n).coeffs == bialternant(lam, n)


@pytest.mark.parametrize("lam,n", [(p, n) for n in (2, 3, 4) for k in range(1, 6) for p in partitions(k, n)])
def test_hook_content_matches_tableaux(lam, n):
    assert schur(lam, n).evaluate([1] * n) == dim_irrep(lam, n)


def test_numerator_one_column():
    # N_(1) = 1 - (1 - t1)(1 - t2) = t1 + t2 - t1 t2
    assert numerator((1, 0), 2).coeffs == {(1, 0): 1, (0, 1): 1, (1, 1): -1}
    assert numerator((1, 1), 2).coeffs == {(1, 1): 1}
    assert numerator((2, 1), 2) == schur((2, 1), 2)


def test_closed_one_forms_series():
    # closed 1-forms on the plane: exact differentials of positive-degree polynomials
    f = flambda_dims((1, 0), 2, 4)
    for a in f.coeffs:
        assert f[a] == 1
    assert f[(0, 0)] == 0


def test_density():
    assert density((1, 1), 2) == 1
    assert density((3, 1), 2) == 3
    assert density((3, 2), 2) == 2


def test_bounds():
    assert bound(7, 2) == 11
    assert bound(3, 4, "m3") == 5
    assert bound(3, 2, "de") == 4
    with pytest.raises(ValueError):
        bound(2, 2)


def test_asymmetric_rejected():
    with pytest.raises(NotSymmetric):
        SymPoly(2, {(1, 0): 1})


def test_dominance():
    assert dominates((3, 1), (2, 2))
    assert not dominates((2, 2), (3, 1))
    assert dominates((3, 1, 1, 0), (2, 2, 1, 0))


def test_times_and_over_vanishing_inverse():
    s = schur((2, 1), 2).over_vanishing(8)
    assert s.times_vanishing().truncate(8) == schur((2, 1), 2).truncate(8)


def test_upper_series_positive():
    u = upper_series(3, 2, 6)
    assert all(c > 0 for a, c in u.coeffs.items() if sum(a) >= 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(2, 3), st.integers(2, 3))
def test_elementary_products_symmetric(j, k, n):
    p = elementary(min(j, n), n) * elementary(min(k, n), n)
    for a in p.coeffs:
        for perm in itertools.permutations(a):
            assert p[perm] == p[a]

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcslab.linalg import (
    BACKEND,
    DEFAULT_PRIMES,
    QQ,
    EchelonBasis,
    Field,
    PrimeMismatchError,
    _fallback,
    dual_prime,
    field_from_tag,
    naive_rank,
    rank_of,
    solve_rational,
    sparse,
)

P = DEFAULT_PRIMES[0]


def dense_to_sparse(row):
    return [(j, c) for j, c in enumerate(row) if c]


def test_field_rejects_small_characteristic():
    for p in (2, 3):
        with pytest.raises(ValueError):
            Field(p)


def test_field_rejects_composite_and_large():
    with pytest.raises(ValueError):
        Field(15)
    with pytest.raises(ValueError):
        Field(2**31 + 11)


def test_field_coercion():
    f = Field(7)
    assert f(Fraction(1, 2)) == 4
    assert QQ(Fraction(1, 2)) == Fraction(1, 2)
    assert field_from_tag("Q") is QQ or field_from_tag("Q") == QQ
    assert field_from_tag(P) == Field(P)


def test_insert_reports_growth():
    b = EchelonBasis(3)
    assert b.insert([(0, 1), (1, 1)])
    assert b.insert([(1, 1), (2, 1)])
    assert not b.insert([(0, 1), (2, P - 1)])
    assert b.dimension == 2


def test_dependent_rows_rank_one():
    assert rank_of([[(0, 1), (1, 2)], [(0, 2), (1, 4)]], 2) == 1


def test_rank_three_matrix_over_rationals():
    m = [[1, 0, 1], [0, 1, 1], [1, 1, 0]]
    assert rank_of([dense_to_sparse(r) for r in m], 3, QQ) == 3
    assert naive_rank(m, QQ) == 3


def test_membership():
    b = EchelonBasis(3, QQ)
    b.insert([(0, 1), (1, 1)])
    assert [(0, 2), (1, 2)] in b
    assert [(2, 1)] not in b


def test_sparse_normalizes():
    assert sparse([(2, 1), (0, 3), (2, -1)]) == [(0, 3)]
    assert sparse([(1, P + 2)], Field(P)) == [(1, 2)]


def test_solve_rational():
    cols = [[(0, 1)], [(1, 1)], [(0, 1), (1, 1)]]
    x = solve_rational(cols, [(0, 2), (1, 3)])
    assert sum(c * dict(col).get(0, 0) for c, col in zip(x, cols)) == 2
    assert solve_rational([[(0, 1)]], [(1, 1)]) is None


def test_dual_prime_agreement_and_mismatch():
    assert dual_prime(lambda f: 5) == 5
    with pytest.raises(PrimeMismatchError):
        dual_prime(lambda f: f.p)


matrices = st.integers(1, 8).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=1, max_size=10))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_naive_elimination(m):
    ncols = len(m[0])
    rows = [dense_to_sparse(r) for r in m]
    for field in (Field(P), Field(7), QQ):
        assert rank_of(rows, ncols, field) == naive_rank(m, field)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_compiled_and_fallback_agree(m):
    ncols = len(m[0])
    p = Field(P)
    rows = [sparse(dense_to_sparse(r), p) for r in m]
    indptr = np.cumsum([0] + [len(r) for r in rows]).astype(np.int64)
    idx = np.array([j for r in rows for j, _ in r], dtype=np.int64)
    dat = np.array([c for r in rows for _, c in r], dtype=np.int64)
    a = _fallback.ModEchelon(ncols, P)
    grew_a = a.absorb(indptr, idx, dat)
    if BACKEND == "compiled":
        from lcslab.linalg._kernels import ModEchelon

        b = ModEchelon(ncols, P)
        grew_b = b.absorb(indptr, idx, dat)
        assert list(grew_a) == list(grew_b)
        assert np.array_equal(a.dense_rows(), b.dense_rows())
    assert a.rank == naive_rank(m, p)


def test_fallback_backend_selected_by_env(monkeypatch):
    import importlib

    import lcslab.linalg as linalg

    monkeypatch.setenv("LCSLAB_PURE_PYTHON", "1")
    mod = importlib.reload(linalg)
    try:
        assert mod.BACKEND == "python"
        assert mod.rank_of([[(0, 1)], [(1, 1)], [(0, 1), (1, 1)]], 2) == 2
    finally:
        monkeypatch.delenv("LCSLAB_PURE_PYTHON")
        importlib.reload(linalg)

import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from stabletwist.intinv import (
    NotSymmetric,
    SizeMismatch,
    congruence_report,
    derived_equivalence_conclusion,
    determinant,
    is_symmetric,
    odd_diagonal_invariant,
    smith_normal_form,
)

C_LAMBDA = [[8, 8, 1], [8, 8, 0], [1, 0, 1]]
C_GAMMA = [[8, 8, 3], [8, 8, 4], [3, 4, 2]]


def square(max_n=5, lo=-6, hi=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)
    )


def symmetric(max_n=5, lo=-6, hi=6):
    def sym(M):
        n = len(M)
        return [[M[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)]

    return square(max_n, lo, hi).map(sym)


def oracle_snf(M):
    D = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
    d = [abs(int(D[i, i])) for i in range(len(M))]
    nz = sorted(x for x in d if x)
    return nz + [0] * (len(d) - len(nz))


@given(square())
def test_determinant_matches_oracle(M):
    assert determinant(M) == int(sympy.Matrix(M).det())


@given(square(max_n=4))
def test_snf_matches_oracle(M):
    d = smith_normal_form(M)
    assert d == oracle_snf(M)
    nz = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(symmetric(max_n=8, lo=-3, hi=3))
def test_odd_diagonal_matches_brute_force(M):
    n = len(M)
    A = np.array(M)
    brute = any(int(x @ A @ x) % 2 for x in (np.array(v) for v in itertools.product((0, 1), repeat=n)))
    assert odd_diagonal_invariant(M) == brute


def test_odd_diagonal_brute_force_size_ten():
    rng = np.random.default_rng(3)
    for _ in range(5):
        X = rng.integers(-3, 4, size=(10, 10))
        M = (X + X.T).tolist()
        for i in range(10):
            M[i][i] = int(rng.integers(-3, 4))
        A = np.array(M)
        brute = any(int(x @ A @ x) % 2 for x in (np.array(v) for v in itertools.product((0, 1), repeat=10)))
        assert odd_diagonal_invariant(M) == brute


def unimodular(n, draw):
    """Product of elementary integer matrices, entries kept small."""
    P = np.eye(n, dtype=object)
    for _ in range(draw(st.integers(0, 4))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        E = np.eye(n, dtype=object)
        if i == j:
            E[i, i] = -1
        else:
            E[i, j] = draw(st.integers(-3, 3))
        P = P.dot(E)
    return P


@given(st.data())
def test_invariants_under_unimodular_congruence(data):
    M = data.draw(symmetric(max_n=4, lo=-3, hi=3))
    n = len(M)
    P = unimodular(n, data.draw)
    assert int(sympy.Matrix(P.tolist()).det()) in (1, -1)
    N = P.T.dot(np.array(M, dtype=object)).dot(P).tolist()
    assert is_symmetric(N)
    assert determinant(N) == determinant(M)
    assert smith_normal_form(N) == smith_normal_form(M)
    assert odd_diagonal_invariant(N) == odd_diagonal_invariant(M)
    assert congruence_report(M, N).verdict == "Inconclusive"


def test_cartan_matrices_from_example():
    assert determinant(C_LAMBDA) == determinant(C_GAMMA) == -8
    assert odd_diagonal_invariant(C_LAMBDA) and not odd_diagonal_invariant(C_GAMMA)
    v = congruence_report(C_LAMBDA, C_GAMMA)
    assert v.verdict == "NotCongruent" and v.invariant == "odd_diagonal"
    assert v.details["smith_normal_form"][0] == v.details["smith_normal_form"][1] == [1, 1, 8]
    text = derived_equivalence_conclusion(v)
    assert "cannot be lifted" in text and "derived" in text


def test_determinant_separates_scaled_identity():
    v = congruence_report([[1, 0], [0, 1]], [[2, 0], [0, 2]])
    assert v.verdict == "NotCongruent" and v.invariant == "determinant"


def test_errors():
    with pytest.raises(NotSymmetric):
        congruence_report([[1, 2], [3, 4]], [[1, 0], [0, 1]])
    with pytest.raises(NotSymmetric):
        odd_diagonal_invariant([[0, 1], [0, 0]])
    with pytest.raises(SizeMismatch):
        congruence_report([[1]], [[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        determinant([[1, 2]])
    assert determinant([]) == 1

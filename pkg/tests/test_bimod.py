import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabletwist import permgroup as pg
from stabletwist.algebra import group_algebra, subalgebra_gen, truncated_polynomial
from stabletwist.bimod import (
    AlgebraMismatch,
    NotWellDefined,
    apply_bimodule,
    bimodule_projective_cover,
    direct_sum_bimodules,
    free_bimodule_map,
    induced_bimodule,
    is_bimodule_hom,
    kernel_bimodule,
    left_right_projective,
    lift_H,
    mult_map,
    pure_tensor,
    quotient_bimodule,
    regular_bimodule,
    tensor_class,
)
from stabletwist.expr import element
from stabletwist.modrep import (
    generated_submodule,
    induce,
    is_projective,
    iso_test,
    quotient,
    regular_module,
    restrict,
    simple_modules,
    strip_projectives,
    trivial_module,
)


@pytest.fixture(scope="module")
def kS4(F2):
    return group_algebra(F2, pg.symmetric_group(4))


@pytest.fixture(scope="module")
def R12(kS4):
    return subalgebra_gen(kS4, [element(kS4, "(12)")])


@pytest.fixture(scope="module")
def T12(kS4, R12):
    return induced_bimodule(kS4, R12)


def test_regular_bimodule(kS4):
    M = regular_bimodule(kS4)
    assert M.check()
    assert left_right_projective(M)
    F = kS4.field
    assert is_bimodule_hom(M, M, F.eye(M.dim))


def test_induced_dims(kS4, R12, T12):
    assert T12.dim == 24 * 24 // 2 == 288
    assert T12.check()
    scalars = subalgebra_gen(kS4, [kS4.unit])
    assert induced_bimodule(kS4, scalars).dim == 24**2


def test_multiplication_map(kS4, T12):
    d0 = mult_map(T12)
    F = kS4.field
    assert F.rank(d0) == 24
    assert is_bimodule_hom(T12, regular_bimodule(kS4), d0)
    K, _ = kernel_bimodule(T12, d0)
    assert K.dim == 264
    assert K.check()
    one = tensor_class(T12, pure_tensor(kS4, kS4.unit, kS4.unit))
    assert np.array_equal(F.matmul(one[None, :], d0)[0], kS4.unit)


def test_pure_tensor_balanced_over_R(kS4, T12):
    r = element(kS4, "(12)")
    a, b = element(kS4, "(123)"), element(kS4, "(34)")
    lhs = tensor_class(T12, pure_tensor(kS4, kS4.mul(a, r), b))
    rhs = tensor_class(T12, pure_tensor(kS4, a, kS4.mul(r, b)))
    assert np.array_equal(lhs, rhs)
    # not balanced over elements outside R
    s = element(kS4, "(13)")
    lhs = tensor_class(T12, pure_tensor(kS4, kS4.mul(a, s), b))
    rhs = tensor_class(T12, pure_tensor(kS4, a, kS4.mul(s, b)))
    assert not np.array_equal(lhs, rhs)


def test_induced_is_left_right_projective(T12):
    assert left_right_projective(T12)


def test_apply_regular_is_identity(kS4):
    M = regular_bimodule(kS4)
    for X in [trivial_module(kS4), *simple_modules(kS4)]:
        assert iso_test(apply_bimodule(X, M), X)


def test_apply_induced_is_induce_restrict(kS4, R12, T12):
    X = trivial_module(kS4)
    Y = apply_bimodule(X, T12)
    Ind, _, _ = induce(restrict(X, R12), R12)
    assert Y.dim == 12
    assert iso_test(Y, Ind)


def test_strip_after_induced_restriction(kS4, R12, T12):
    by_dim = {S.dim: S for S in simple_modules(kS4)}
    # the two-dimensional simple is free over k<(12)>, so S (x)_R A is projective
    S = by_dim[2]
    assert is_projective(restrict(S, R12))
    assert apply_bimodule(S, T12).dim == 24
    assert strip_projectives(apply_bimodule(S, T12)).dim == 0
    # the trivial module is not, and a non-projective part survives
    k = by_dim[1]
    assert not is_projective(restrict(k, R12))
    assert strip_projectives(apply_bimodule(k, T12)).dim == 4


def test_brauer_induced_bimodule(brauer):
    A = brauer
    R = subalgebra_gen(A, [element(A, s) for s in ("e1", "alpha", "beta")])
    T = induced_bimodule(A, R)
    assert left_right_projective(T)
    X = apply_bimodule(simple_modules(A)[0], T)
    # S1 restricted to R is e1R/alpha R, so the result is e1A/alphaA
    assert X.dim == 8 and not is_projective(X)


def test_simple_bimodule_not_left_right_projective(F2):
    A = truncated_polynomial(F2, 2)
    M = regular_bimodule(A)
    top, _ = quotient_bimodule(M, A.radical)
    assert top.dim == 1 and top.check()
    assert not left_right_projective(top)
    assert left_right_projective(M)


def test_direct_sum_and_cover(F2):
    A = group_algebra(F2, pg.cyclic_group(4))
    M = regular_bimodule(A)
    D = direct_sum_bimodules([M, M])
    assert D.dim == 8 and D.check()
    T = induced_bimodule(A, subalgebra_gen(A, [A.unit]))
    cov = bimodule_projective_cover(T)
    assert cov.module.dim == T.dim == 16
    assert F2.rank(cov.map) == T.dim
    assert is_bimodule_hom(cov.module, T, cov.map)
    K, _ = kernel_bimodule(T, mult_map(T))
    kcov = bimodule_projective_cover(K)
    assert F2.rank(kcov.map) == K.dim == 12
    assert len(kcov.summands) == 1


def test_lift_identity_and_functoriality(kS4, T12):
    F = kS4.field
    B = subalgebra_gen(kS4, [element(kS4, "(34)")])
    Bk = B.algebra
    one = pure_tensor(Bk, Bk.unit, Bk.unit)
    ident = lift_H(T12, B, [[one]])
    assert np.array_equal(ident.matrix, F.eye(T12.dim))
    assert ident.square_commutes
    h = B.coords(element(kS4, "(34)"))
    h = np.atleast_2d(h)[0]
    x = F.add(pure_tensor(Bk, h, Bk.unit), pure_tensor(Bk, Bk.unit, h))
    y = F.add(one, pure_tensor(Bk, h, h))
    fx, fy = free_bimodule_map(Bk, [[x]]), free_bimodule_map(Bk, [[y]])
    xy = F.matmul(F.matmul(one[None, :], fx), fy)[0]
    lx, ly, lxy = (lift_H(T12, B, [[v]]) for v in (x, y, xy))
    assert lx.square_commutes and ly.square_commutes
    assert np.array_equal(F.matmul(lx.matrix, ly.matrix), lxy.matrix)
    assert is_bimodule_hom(T12, T12, lx.matrix)


def test_lift_rejects_non_commuting_image(kS4, T12):
    B = subalgebra_gen(kS4, [element(kS4, "(13)")])
    Bk = B.algebra
    h = np.atleast_2d(B.coords(element(kS4, "(13)")))[0]
    with pytest.raises(NotWellDefined):
        lift_H(T12, B, [[pure_tensor(Bk, Bk.unit, h)]])


def test_algebra_mismatch(F2, kS4):
    other = group_algebra(F2, pg.cyclic_group(2))
    with pytest.raises(AlgebraMismatch):
        induced_bimodule(kS4, subalgebra_gen(other, [other.unit]))
    with pytest.raises(AlgebraMismatch):
        apply_bimodule(trivial_module(other), regular_bimodule(kS4))


_CACHE = {}


def _c4():
    if "A" not in _CACHE:
        from stabletwist.exactcore import make_field

        A = group_algebra(make_field(2), pg.cyclic_group(4))
        R = subalgebra_gen(A, [element(A, "(13)(24)")])
        _CACHE["A"] = (A, R, induced_bimodule(A, R))
    return _CACHE["A"]


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_apply_induced_matches_induction_random(seed):
    A, R, T = _c4()
    F = A.field
    rng = np.random.default_rng(seed)
    M = regular_module(A)
    X = quotient(M, generated_submodule(M, F.random(rng, (1, A.dim))))[0]
    Ind, _, _ = induce(restrict(X, R), R)
    Y = apply_bimodule(X, T)
    assert Y.dim == 2 * X.dim
    assert iso_test(Y, Ind, seed)

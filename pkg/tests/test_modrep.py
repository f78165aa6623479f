import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabletwist import permgroup as pg
from stabletwist.algebra import group_algebra, subalgebra_gen, truncated_polynomial
from stabletwist.expr import element
from stabletwist.modrep import (
    LoewyProfile,
    cartan_matrix,
    composition_factors,
    cosyzygy,
    direct_sum,
    endo_trivial_test,
    endomorphism_algebra,
    generated_submodule,
    hom_dim,
    hom_space,
    induce,
    injective_hull,
    is_projective,
    iso_test,
    loewy,
    projective_cover,
    projective_indecomposable,
    quotient,
    radical_of,
    regular_module,
    relative_syzygy,
    restrict,
    simple_modules,
    socle_profile,
    stable_hom_dim,
    strip_projectives,
    submodule,
    syzygy,
    trivial_module,
)

S4 = pg.symmetric_group(4)


@pytest.fixture(scope="module")
def kD8(F2):
    return group_algebra(F2, pg.dihedral_group(8))


@pytest.fixture(scope="module")
def kS4(F4):
    A = group_algebra(F4, S4)
    A.set_idempotents([element(A, s) for s in ["1+(123)+(132)", "1+w*(123)+w^2*(132)", "1+w^2*(123)+w*(132)"]])
    return A


def random_module(A, seed, gens=2):
    """A cyclic quotient of the regular module by a random submodule."""
    F = A.field
    rng = np.random.default_rng(seed)
    M = regular_module(A)
    sub = generated_submodule(M, F.random(rng, (gens, A.dim)))
    return quotient(M, sub)[0]


def test_simple_modules(kS4, lam, kD8):
    assert sorted(S.dim for S in simple_modules(kS4)) == [1, 2]
    assert [S.dim for S in simple_modules(lam)] == [1, 1]
    assert [S.dim for S in simple_modules(kD8)] == [1]


def test_hom_examples_brauer(brauer):
    P1, P2 = (projective_indecomposable(brauer, i)[0] for i in range(2))
    S1, S2 = simple_modules(brauer)
    assert hom_dim(P1, P1) == 8
    assert hom_dim(S1, P2) == 0
    assert hom_dim(S1, S1) == 1
    assert hom_dim(P1, P1, "sylvester") == hom_dim(P1, P1, "presentation")


def test_hom_space_intertwines(brauer):
    P1 = projective_indecomposable(brauer, 0)[0]
    S1 = simple_modules(brauer)[0]
    F = brauer.field
    for f in hom_space(P1, S1):
        for a, b in zip(P1.gen_actions, S1.gen_actions):
            assert np.array_equal(F.matmul(a, f), F.matmul(f, b))


def test_brauer_projective_diagrams(brauer):
    P1, P2 = (projective_indecomposable(brauer, i)[0] for i in range(2))
    assert [sum(l) for l in loewy(P1).layers] == [1, 2, 2, 2, 2, 2, 2, 2, 1]
    want = LoewyProfile.parse("[1]/[1 2]/[2 2]/[1 2]/[1 1]/[1 2]/[2 2]/[1 2]/[1]", brauer.simple_labels)
    assert loewy(P1) == want
    assert P2.dim == 16


def test_loewy_semisimple_single_layer(kS4):
    S = direct_sum(simple_modules(kS4))
    assert loewy(S).length == 1


def test_loewy_profile_text_round_trip():
    p = LoewyProfile.parse("[1 2]/[1 2 1]/[2 1]", ("1", "2"))
    assert str(p) == "[1 2]/[1 1 2]/[1 2]"
    assert p.composition_factors() == {"1": 4, "2": 3}
    assert p.to_json() == [{"1": 1, "2": 1}, {"1": 2, "2": 1}, {"1": 1, "2": 1}]


def test_syzygy_examples_over_lambda(lam):
    S1, S2 = simple_modules(lam)
    P2 = projective_indecomposable(lam, 1)[0]
    K = syzygy(S2)
    assert K.dim == P2.dim - 1 == 4
    assert str(socle_profile(K)) == "[1]/[1 2]/[2]"
    assert str(loewy(K)) == "[1 2]/[1]/[2]"
    X = cosyzygy(cosyzygy(S2))
    assert X.dim == 7
    assert loewy(X) == LoewyProfile.parse("[1 2]/[1 2 1]/[2 1]", lam.simple_labels)
    assert syzygy(P2).dim == 0


def test_projective_cover_examples(brauer, lam):
    P1 = projective_indecomposable(brauer, 0)[0]
    assert projective_cover(P1).module.dim == 16
    alphaA = brauer.field.span(brauer.lmul(element(brauer, "alpha")), brauer.dim)
    _, basis = projective_indecomposable(brauer, 0)
    Q, _ = quotient(P1, brauer.field.span(brauer.field.coords(basis, alphaA), 16))
    R = submodule(Q, radical_of(Q))[0]
    cov = projective_cover(R)
    assert [i for i, _ in cov.summands] == [1]


def test_injective_hull_embeds(lam):
    S1 = simple_modules(lam)[0]
    I, emb = injective_hull(S1)
    assert I.dim == projective_indecomposable(lam, 0)[0].dim
    assert lam.field.rank(emb) == 1


def test_strip_examples(kS4, lam):
    assert strip_projectives(regular_module(kS4)).dim == 0
    S = simple_modules(lam)[1]
    P = projective_indecomposable(lam, 0)[0]
    assert iso_test(strip_projectives(direct_sum([S, P])), S)


def test_is_projective_examples(F2, kS4):
    assert is_projective(regular_module(kS4))
    A = truncated_polynomial(F2, 2)
    assert not is_projective(simple_modules(A)[0])
    R = subalgebra_gen(kS4, [element(kS4, "(12)")])
    AR = restrict(regular_module(kS4), R)
    assert is_projective(AR) and AR.dim == 24


def test_iso_test_examples(lam):
    S1, S2 = simple_modules(lam)
    assert iso_test(S1, S1)
    r = iso_test(S1, S2)
    assert r.verdict == "NotIsomorphic"


def test_cartan_examples(lam, F4):
    P = [projective_indecomposable(lam, i)[0] for i in range(2)]
    C = np.asarray(cartan_matrix(P))
    assert np.array_equal(C, C.T)
    from stabletwist.algebra import semisimple_product

    S = semisimple_product(F4, 3)
    assert np.asarray(cartan_matrix([projective_indecomposable(S, i)[0] for i in range(3)])).tolist() == np.eye(
        3, dtype=int
    ).tolist()


def test_endomorphism_algebra_of_A_plus_S1(brauer):
    S1 = simple_modules(brauer)[0]
    E = endomorphism_algebra(direct_sum([regular_module(brauer), S1]))
    assert E.dim == 35
    assert E.is_associative()
    assert endomorphism_algebra(S1).dim == 1


def test_endo_trivial_examples(kD8):
    k = trivial_module(kD8)
    assert endo_trivial_test(k)
    assert endo_trivial_test(syzygy(k))
    assert syzygy(k).dim ** 2 % 8 == 1
    assert not endo_trivial_test(regular_module(kD8))


def test_relative_syzygy_of_trivial(kS4):
    N = subalgebra_gen(kS4, [element(kS4, "(12)"), element(kS4, "(34)")])
    K = relative_syzygy(trivial_module(kS4), N)
    assert K.dim == 5
    Ind, _, _ = induce(restrict(trivial_module(kS4), N), N)
    assert Ind.dim == 6


def test_relatively_projective_counit_splits(kS4):
    N = subalgebra_gen(kS4, [element(kS4, "(12)")])
    X = regular_module(kS4)
    K = relative_syzygy(X, N)
    assert K.dim == 24 * 12 - 24


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_syzygy_cosyzygy_inverse_kD8(seed):
    A = _kD8()
    M = random_module(A, seed)
    s = strip_projectives(M)
    assert iso_test(cosyzygy(syzygy(M)), s, seed)
    assert iso_test(syzygy(cosyzygy(M)), s, seed)
    assert iso_test(strip_projectives(s), s, seed)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_hom_from_projectives_counts_factors(seed):
    A = _lam()
    M = random_module(A, seed, gens=1)
    factors = composition_factors(M)
    for i, lab in enumerate(A.simple_labels):
        assert hom_dim(projective_indecomposable(A, i)[0], M) == factors[lab]


@settings(max_examples=20)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_iso_test_reflexive_symmetric(s1, s2):
    A = _kD8()
    M, N = random_module(A, s1), random_module(A, s2)
    assert iso_test(M, M)
    a, b = iso_test(M, N, s1), iso_test(N, M, s1)
    assert a.verdict == b.verdict
    assert stable_hom_dim(M, N) <= hom_dim(M, N)


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_endo_trivial_implies_dimension_congruence(seed):
    A = _kD8()
    M = strip_projectives(random_module(A, seed, gens=1))
    for X in (M, syzygy(M), cosyzygy(M)):
        if X.dim and endo_trivial_test(X):
            assert X.dim**2 % 8 == 1


_CACHE = {}


def _kD8():
    if "D8" not in _CACHE:
        from stabletwist.exactcore import make_field

        _CACHE["D8"] = group_algebra(make_field(2), pg.dihedral_group(8))
    return _CACHE["D8"]


def _lam():
    if "lam" not in _CACHE:
        from conftest import LAMBDA_ARROWS, LAMBDA_RELATIONS
        from stabletwist.algebra import QuiverPresentation, quiver_algebra
        from stabletwist.exactcore import make_field

        _CACHE["lam"] = quiver_algebra(
            make_field(2, 2, [1, 1, 1]), QuiverPresentation(["1", "2"], LAMBDA_ARROWS, LAMBDA_RELATIONS, 6)
        )
    return _CACHE["lam"]

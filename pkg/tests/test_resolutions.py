import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabletwist import permgroup as pg
from stabletwist.algebra import group_algebra, truncated_polynomial
from stabletwist.bimod import regular_bimodule
from stabletwist.exactcore import make_field
from stabletwist.modrep import iso_test, regular_module, trivial_module
from stabletwist.resolutions import (
    CharacteristicMismatch,
    ResolutionRejected,
    WrongCharacteristic,
    char_p_period1_resolution,
    free_bimodule,
    group_trivial_resolution,
    phi_functor,
    resolution_from_declaration,
    truncated_poly_resolution,
    verify_resolution,
)


@pytest.mark.parametrize("p,m,n", [(2, 1, 2), (3, 1, 2), (2, 2, 2), (3, 1, 3), (2, 1, 4)])
def test_truncated_poly_resolution_exact(p, m, n):
    B = truncated_polynomial(make_field(p, m), n)
    rep = verify_resolution(truncated_poly_resolution(B))
    assert rep.ok, rep.problems
    assert rep.ranks == [n, n * (n - 1), n]
    assert all(h == 0 for _, h in rep.homology)


@pytest.mark.parametrize("m", [1, 2])
def test_period_one_in_char_two(m):
    B = truncated_polynomial(make_field(2, m), 2)
    res = char_p_period1_resolution(B)
    assert res.period == 1
    rep = verify_resolution(res)
    assert rep.ok and rep.ranks == [2, 2]


def test_period_one_needs_char_two():
    with pytest.raises(WrongCharacteristic):
        char_p_period1_resolution(truncated_polynomial(make_field(3), 2))


def test_sabotaged_differential_shows_homology():
    B = truncated_polynomial(make_field(2), 2)
    res = truncated_poly_resolution(B)
    res.differentials[1] = [[np.zeros(4, np.uint8)]]
    rep = verify_resolution(res)
    assert not rep.ok
    assert dict(rep.homology)[1] == 2
    assert any("position 1" in p for p in rep.problems)


@pytest.mark.parametrize("p,n,period", [(2, 2, 1), (3, 3, 2), (2, 4, 2)])
def test_cyclic_group_resolutions(p, n, period):
    H = group_algebra(make_field(p), pg.cyclic_group(n))
    res = group_trivial_resolution(H)
    assert res.period == period
    assert verify_resolution(res).ok


def test_group_resolution_needs_p_dividing_order():
    with pytest.raises(CharacteristicMismatch):
        group_trivial_resolution(group_algebra(make_field(3), pg.cyclic_group(2)))


@pytest.mark.parametrize("p,n", [(2, 2), (3, 3)])
def test_phi_functor(p, n):
    H = group_algebra(make_field(p), pg.cyclic_group(n))
    Pk = phi_functor(trivial_module(H))
    assert Pk.check() and Pk.dim == n
    assert iso_test(Pk.carrier, regular_bimodule(H).carrier)
    PH = phi_functor(regular_module(H))
    assert PH.dim == n * n
    assert iso_test(PH.carrier, free_bimodule(H).carrier)


def test_declared_resolution():
    B = truncated_polynomial(make_field(2), 2)
    decl = {"period": 2, "multiplicities": [1, 1], "differentials": [["1"], [["1#x - x#1"]], ["1#x + x#1"]]}
    res = resolution_from_declaration(B, decl)
    assert res.name == "declared" and res.period == 2


def test_declared_resolution_rejected():
    B = truncated_polynomial(make_field(2), 2)
    with pytest.raises(ResolutionRejected):
        resolution_from_declaration(B, {"period": 2, "multiplicities": [1, 1], "differentials": [["1"]]})
    bad = {"period": 2, "multiplicities": [1, 1], "differentials": [["1"], [["1#x"]], ["1#x + x#1"]]}
    with pytest.raises(ResolutionRejected):
        resolution_from_declaration(B, bad)


@settings(max_examples=20)
@given(st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2)]), st.integers(2, 5))
def test_truncated_poly_resolution_property(field, n):
    B = truncated_polynomial(make_field(*field), n)
    rep = verify_resolution(truncated_poly_resolution(B))
    assert rep.ok and rep.composites_zero and rep.last_map_bimodule

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from doublepoisson.algebra import (
    BratteliDiagram,
    InvalidBratteli,
    MatrixUnit,
    SemiSimpleAlgebra,
    all_dimension_vectors,
    derivation_module_dimension,
    gauge_element,
    inner_derivation,
    inner_derivation_matrix,
    relative_derivation_oracle,
    relative_dimension_formula,
    relative_multiplicities,
    tensor,
)
from doublepoisson.exactmath import rank_and_kernel

E = MatrixUnit


def test_inner_derivation_on_c2():
    S = SemiSimpleAlgebra((1, 1))
    d = inner_derivation(S, {(E(1, 1, 1), E(2, 1, 1)): 1})
    assert d({E(2, 1, 1): 1}) == {(E(1, 1, 1), E(2, 1, 1)): 1}
    assert d({E(1, 1, 1): 1}) == {(E(1, 1, 1), E(2, 1, 1)): -1}


def test_inner_derivation_on_m2():
    S = SemiSimpleAlgebra((2,))
    d = inner_derivation(S, {(E(1, 1, 1), E(1, 1, 1)): 1})
    assert d({E(1, 1, 2): 1}) == {(E(1, 1, 1), E(1, 1, 2)): 1}


def test_one_tensor_one_gives_gauge_element():
    # 1 (x) 1 is not central in the inner structure: d_{1(x)1}(y) = 1 (x) y - y (x) 1
    S = SemiSimpleAlgebra((2, 1))
    d = inner_derivation(S, tensor(S.one(), S.one()))
    assert not d.is_zero()
    assert d == gauge_element(S)
    y = E(1, 1, 2)
    expected = tensor(S.one(), {y: 1})
    for k, c in tensor({y: 1}, S.one()).items():
        expected[k] = expected.get(k, 0) - c
    assert d({y: 1}) == {k: c for k, c in expected.items() if c}


@settings(max_examples=40)
@given(st.sampled_from([(1, 1), (2,), (2, 1)]), st.data())
def test_inner_derivations_are_derivations_and_linear(dims, data):
    S = SemiSimpleAlgebra(dims)
    units = S.units
    x = {(data.draw(st.sampled_from(units)), data.draw(st.sampled_from(units))): Fraction(data.draw(st.integers(-3, 3)))}
    y = {(data.draw(st.sampled_from(units)), data.draw(st.sampled_from(units))): Fraction(data.draw(st.integers(-3, 3)))}
    dx, dy = inner_derivation(S, x), inner_derivation(S, y)
    assert dx.is_derivation()
    xy = {k: x.get(k, 0) + y.get(k, 0) for k in set(x) | set(y)}
    assert inner_derivation(S, {k: v for k, v in xy.items() if v}) == dx + dy


@pytest.mark.parametrize("dims,expected", [((1,), 0), ((1, 1), 2), ((2, 3), 156)])
def test_derivation_module_dimension(dims, expected):
    dim, cert = derivation_module_dimension(SemiSimpleAlgebra(dims))
    assert dim == expected == cert["formula_dimension"]


def test_m2_m3_certificate():
    _, cert = derivation_module_dimension(SemiSimpleAlgebra((2, 3)))
    assert cert["loops"] == {1: 3, 2: 8}
    assert cert["arrows"] == {"2->1": 6, "1->2": 6}
    assert cert["tensor_dimension"] == 169


@pytest.mark.parametrize("dims", list(all_dimension_vectors(4, 3)))
def test_kernel_is_s(dims):
    S = SemiSimpleAlgebra(dims)
    _, kernel = rank_and_kernel(inner_derivation_matrix(S))
    assert len(kernel) == sum(d * d for d in dims)


def test_kernel_c2_is_two_dimensional():
    _, kernel = rank_and_kernel(inner_derivation_matrix(SemiSimpleAlgebra((1, 1))))
    assert len(kernel) == 2


def test_relative_c2_in_c4():
    S = SemiSimpleAlgebra((1, 1, 1, 1))
    B = BratteliDiagram((1, 1), ((1, 0), (1, 0), (0, 1), (0, 1)))
    r, r_off = relative_multiplicities(S, B)
    assert r == [0, 0, 0, 0]
    assert r_off == [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    assert relative_derivation_oracle(S, B) == relative_dimension_formula(S, B) == 4


def test_relative_c2_in_m2():
    S = SemiSimpleAlgebra((2,))
    B = BratteliDiagram((1, 1), ((1, 1),))
    assert relative_multiplicities(S, B)[0] == [1]
    assert relative_derivation_oracle(S, B) == 4


@pytest.mark.parametrize("dims", [(1, 1, 1), (2, 1), (3,)])
def test_identity_embedding_kills_everything(dims):
    S = SemiSimpleAlgebra(dims)
    assert relative_derivation_oracle(S, BratteliDiagram.identity(S)) == 0


def test_invalid_bratteli():
    S = SemiSimpleAlgebra((2,))
    with pytest.raises(InvalidBratteli):
        relative_multiplicities(S, BratteliDiagram((1,), ((1,),)))
    with pytest.raises(InvalidBratteli):
        BratteliDiagram((1,), ((-1,),))

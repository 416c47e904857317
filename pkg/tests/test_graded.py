from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from graded_tannakian.graded import (
    GradedSpace, GradedMap, GradingError, Z, ZZ, tensor_graded, tensor_maps,
    koszul_symmetry, dual_graded, associator, evaluation, coevaluation,
    convolve, unit_space,
)
from graded_tannakian.linalg import QMatrix


def test_tensor_examples():
    W = GradedSpace({0: 1, 1: 2, 3: 1})
    assert tensor_graded(unit_space(), W) == W
    assert tensor_graded(GradedSpace({2: 1}), GradedSpace({2: 1})) == GradedSpace({4: 1})
    assert tensor_graded(GradedSpace({1: 2}), GradedSpace({1: 2})) == GradedSpace({2: 4})


def test_koszul_sign_examples():
    assert Z.koszul_sign(0, 5) == 1
    assert Z.koszul_sign(1, 1) == -1
    assert Z.koszul_sign(1, 2) == 1
    # bigraded: epsilon is the product of coordinate signs
    assert ZZ.epsilon((1, 1)) == 1
    assert ZZ.koszul_sign((1, 0), (0, 1)) == -1


def test_koszul_map_on_odd_lines():
    V = GradedSpace({1: 1})
    s = koszul_symmetry(V, V)
    assert s.block(2) == QMatrix([[-1]])


def test_dual_examples():
    assert dual_graded(GradedSpace({0: 1})) == GradedSpace({0: 1})
    assert dual_graded(GradedSpace({2: 1})) == GradedSpace({-2: 1})
    assert dual_graded(GradedSpace({0: 1, 1: 2})) == GradedSpace({-1: 2, 0: 1})


def test_convention_mismatch():
    with pytest.raises(GradingError):
        tensor_graded(GradedSpace({0: 1}), GradedSpace({(0, 0): 1}))


spaces = st.dictionaries(st.integers(-2, 3), st.integers(0, 2), max_size=3).map(GradedSpace)


@settings(max_examples=50, deadline=None)
@given(spaces, spaces)
def test_symmetry_involutive(V, W):
    s = koszul_symmetry(V, W)
    assert (koszul_symmetry(W, V) @ s).is_identity()
    assert tensor_graded(V, W).total_dim == V.total_dim * W.total_dim


@settings(max_examples=50, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_sign_bimultiplicative(a, a2, b):
    s = Z.koszul_sign
    assert s(a, b) * s(b, a) == 1
    assert s(a + a2, b) == s(a, b) * s(a2, b)


@settings(max_examples=40, deadline=None)
@given(spaces)
def test_double_dual_and_zigzag(V):
    assert dual_graded(dual_graded(V)) == V
    # (id ⊗ ev)(coev ⊗ id) = id, checked by brute force on basis vectors
    ev, coev = evaluation(V), coevaluation(V)
    Vd = dual_graded(V)
    left = tensor_maps(coev, GradedMap.identity(V))            # 1⊗V -> (V⊗V*)⊗V
    a = associator(V, Vd, V)
    right = tensor_maps(GradedMap.identity(V), ev)              # V⊗(V*⊗V) -> V⊗1
    comp = right @ a @ left
    assert comp.to_matrix() == QMatrix.identity(V.total_dim)


@settings(max_examples=30, deadline=None)
@given(spaces, spaces, spaces)
def test_hexagon_and_convolution(U, V, W):
    # sigma_{U, V⊗W} = (id⊗sigma_{U,W}) a (sigma_{U,V}⊗id) a^{-1}
    a = associator
    lhs = a(V, W, U) @ koszul_symmetry(U, tensor_graded(V, W)) @ a(U, V, W)
    rhs = (tensor_maps(GradedMap.identity(V), koszul_symmetry(U, W)) @ a(V, U, W)
           @ tensor_maps(koszul_symmetry(U, V), GradedMap.identity(W)))
    assert lhs == rhs
    assert tensor_graded(U, V).dims == convolve(U.dims, V.dims)


def test_tensor_maps_functorial():
    V = GradedSpace({0: 2, 1: 1})
    f = GradedMap(V, V, {0: QMatrix([[1, 2], [0, 1]]), 1: QMatrix([[3]])})
    g = GradedMap(V, V, {0: QMatrix([[0, 1], [1, 0]]), 1: QMatrix([[F(1, 2)]])})
    assert tensor_maps(g @ f, f @ g) == tensor_maps(g, f) @ tensor_maps(f, g)
    assert GradedMap.from_matrix(V, V, f.to_matrix()) == f

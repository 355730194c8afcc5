import pytest

from doublepoisson.algebra import BratteliDiagram, SemiSimpleAlgebra, all_dimension_vectors, derivation_module_dimension
from doublepoisson.quiver import Arrow, Quiver, build_quiver, build_relative_quiver, quiver_dimension


def test_c3_quiver():
    Q = build_quiver(SemiSimpleAlgebra((1, 1, 1)))
    assert Q.vertex_count == 3
    assert len(Q) == 6
    assert not any(a.is_loop for a in Q)
    assert all(len(Q.arrows_between(i, j)) == 1 for i in (1, 2, 3) for j in (1, 2, 3) if i != j)


def test_m2_loops():
    Q = build_quiver(SemiSimpleAlgebra((2,)))
    assert sorted((a.primary, a.secondary) for a in Q.loops_at(1)) == [(1, 2), (2, 1), (2, 2)]


def test_c_has_no_arrows():
    assert len(build_quiver(SemiSimpleAlgebra((1,)))) == 0


def test_colours_follow_generator_convention():
    # y^{ij}_{pq} = e^i_{p1} (x) e^j_{1q}: p ranges over d_i (head), q over d_j (tail)
    Q = build_quiver(SemiSimpleAlgebra((3, 1)))
    arrows = Q.arrows_between(2, 1)
    assert sorted((a.primary, a.secondary) for a in arrows) == [(1, 1), (2, 1), (3, 1)]
    assert Arrow(1, 2, 3, 1).tensor()[0].row == 3


@pytest.mark.parametrize("dims", list(all_dimension_vectors(5, 3)))
def test_quiver_dimension_matches_brute_force(dims):
    S = SemiSimpleAlgebra(dims)
    assert quiver_dimension(S, build_quiver(S)) == derivation_module_dimension(S)[0]


def test_two_two_cycles():
    S = SemiSimpleAlgebra((1, 1, 1, 1))
    Q = build_relative_quiver(S, BratteliDiagram((1, 1), ((1, 0), (1, 0), (0, 1), (0, 1))))
    assert Q.counts() == {(1, 2): 1, (2, 1): 1, (3, 4): 1, (4, 3): 1}


def test_two_triangles():
    S = SemiSimpleAlgebra((1,) * 6)
    Q = build_relative_quiver(S, BratteliDiagram((1, 1), ((1, 0),) * 3 + ((0, 1),) * 3))
    expected = {(i, j): 1 for block in ((1, 2, 3), (4, 5, 6)) for i in block for j in block if i != j}
    assert Q.counts() == expected


def test_identity_embedding_is_discrete():
    S = SemiSimpleAlgebra((1, 1, 1))
    assert len(build_relative_quiver(S, BratteliDiagram.identity(S))) == 0


def test_json_round_trip_and_determinism():
    S = SemiSimpleAlgebra((2, 1))
    Q = build_quiver(S)
    assert Quiver.from_json(Q.to_json()) == Q
    assert build_quiver(S).to_json() == Q.to_json()

import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from dlcurve.snf import (AbelianGroupStructure, AbelianPresentation, det, invariant_factors,
                         lattice_basis, matmul, smith_normal_form)

matrices = st.integers(1, 6).flatmap(lambda m: st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


def test_identity():
    I = [[int(i == j) for j in range(4)] for i in range(4)]
    assert smith_normal_form(I)[1] == I


def test_diag_2_3():
    assert invariant_factors([[2, 0], [0, 3]]) == [1, 6]


def test_random_square_determinant_oracle():
    rng = random.Random(0)
    for _ in range(20):
        M = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)]
        U, D, V = smith_normal_form(M)
        assert abs(det(D)) == abs(det(M)) == abs(int(sympy.Matrix(M).det()))
        assert abs(det(U)) == 1 and abs(det(V)) == 1
        assert matmul(matmul(U, M), V) == D


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_against_sympy(M):
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    diag = [D[i][i] for i in range(min(len(M), len(M[0])))]
    ours = [d for d in diag if d]
    theirs = [abs(int(d)) for d in sympy_invariants(sympy.Matrix(M), domain=sympy.ZZ) if d]
    assert ours == theirs


def test_overflow():
    with pytest.raises(OverflowError):
        smith_normal_form([[2 ** 40]])


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_lattice_basis_same_group(M):
    n = len(M[0])
    B = lattice_basis(M, n)
    assert len(B) <= n
    a = AbelianPresentation(n, M).structure()
    _, D, _ = smith_normal_form(M)
    nz = [D[i][i] for i in range(min(len(M), n)) if D[i][i]]
    assert a.free_rank == n - len(nz)
    assert a.invariants == tuple(d for d in nz if d > 1)


def test_structure_basics():
    G = AbelianGroupStructure(0, (3, 3))
    assert G.order == 9 and str(G) == "Z/3 x Z/3" and G.p_torsion_trivial(2)
    assert not G.p_torsion_trivial(3)
    assert AbelianGroupStructure(2, ()).order is None
    assert str(AbelianGroupStructure(0, ())) == "0"
    with pytest.raises(ValueError):
        AbelianGroupStructure(0, (2, 3))
    with pytest.raises(ValueError):
        AbelianGroupStructure(0, (1,))


def test_presentation_with_no_relations():
    assert AbelianPresentation(3, []).structure() == AbelianGroupStructure(3, ())

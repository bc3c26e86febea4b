from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualorder.errors import IndexNotOne, NotSquare, ShapeMismatch, SingularMatrix
from dualorder.kernel import (
    Matrix,
    full_rank_factorization,
    group_inverse,
    inverse,
    is_group_invertible,
    matrix_index,
    moore_penrose,
    penrose_violations,
    rank,
    rref,
    to_rational,
)

from conftest import low_rank_matrices, matrices, rational_matrices, square_matrices

M = Matrix.from_rows


class TestConstruction:
    def test_from_rows_coerces_strings_and_ints(self):
        m = M([[1, "1/2"], ["-3", Fraction(2, 3)]])
        assert m[0, 1] == Fraction(1, 2)
        assert m[1, 0] == -3

    def test_floats_are_rejected(self):
        with pytest.raises(TypeError):
            to_rational(0.5)
        with pytest.raises(TypeError):
            to_rational(True)

    def test_ragged_rows(self):
        with pytest.raises(ShapeMismatch):
            M([[1, 2], [3]])

    def test_block_layout(self):
        e, e0 = M([[2]]), M([[5]])
        assert Matrix.block([[e0, e], [e, Matrix.zeros(1, 1)]]) == M([[5, 2], [2, 0]])

    def test_block_with_empty_blocks(self):
        a = M([[1, 2]])
        out = Matrix.block([[a, Matrix.zeros(1, 0)], [Matrix.zeros(0, 2), Matrix.zeros(0, 0)]])
        assert out == a

    def test_immutable_and_hashable(self):
        a = M([[1, 2], [3, 4]])
        assert hash(a) == hash(M([[1, 2], [3, 4]]))
        with pytest.raises(AttributeError):
            a._rows = ()


class TestArithmetic:
    def test_transpose(self):
        assert M([[1, 2], [3, 4]]).T == M([[1, 3], [2, 4]])

    def test_product(self):
        assert M([[1, 1], [0, 0]]) @ M([[1], [1]]) == M([[2], [0]])

    def test_shape_errors(self):
        with pytest.raises(ShapeMismatch):
            M([[1, 2]]) @ M([[1, 2]])
        with pytest.raises(ShapeMismatch):
            M([[1, 2]]) + M([[1], [2]])

    def test_exact_reciprocal(self):
        a, b = Fraction(7, 3), Fraction(3, 7)
        assert (M([[a]]) @ M([[b]])) == Matrix.identity(1)

    @given(matrices(), st.data())
    def test_transpose_of_product(self, a, data):
        b = data.draw(matrices(st.just(a.ncols), st.integers(1, 4)))
        assert (a @ b).T == b.T @ a.T


class TestRank:
    @pytest.mark.parametrize(
        "rows, expected",
        [
            ([[2, 1, 0], [1, 1, 0], [0, 0, 0]], 2),
            ([[0, 0, 0], [0, 0, 0], [0, 0, 0]], 0),
            ([[1, 1], [1, 1]], 1),
        ],
    )
    def test_examples(self, rows, expected):
        assert rank(M(rows)) == expected

    @given(rational_matrices())
    def test_rank_of_transpose(self, m):
        assert rank(m) == rank(m.T)

    @given(rational_matrices())
    def test_rank_matches_rref_pivots(self, m):
        assert rank(m) == len(rref(m)[1])


class TestRref:
    def test_examples(self):
        assert rref(M([[2, 4], [1, 2]])) == (M([[1, 2], [0, 0]]), [0])
        assert rref(Matrix.identity(3)) == (Matrix.identity(3), [0, 1, 2])
        assert rref(M([[0, 1], [1, 0]])) == (Matrix.identity(2), [0, 1])

    @given(rational_matrices())
    def test_idempotent(self, m):
        r, piv = rref(m)
        assert rref(r) == (r, piv)
        assert piv == sorted(set(piv))


class TestFullRankFactorization:
    def test_examples(self):
        f = full_rank_factorization(M([[1, 1], [1, 1]]))
        assert (f.left, f.right, f.rank) == (M([[1], [1]]), M([[1, 1]]), 1)
        f = full_rank_factorization(Matrix.identity(2))
        assert (f.left, f.right) == (Matrix.identity(2), Matrix.identity(2))
        f = full_rank_factorization(M([[1, 1], [0, 0], [0, 0]]))
        assert (f.left, f.right, f.rank) == (M([[1], [0], [0]]), M([[1, 1]]), 1)

    def test_zero_matrix_has_empty_factors(self):
        f = full_rank_factorization(Matrix.zeros(2, 3))
        assert f.rank == 0 and f.left.shape == (2, 0) and f.right.shape == (0, 3)
        assert f.left @ f.right == Matrix.zeros(2, 3)

    def test_round_trip_on_200_random_matrices(self):
        rng = random.Random(2024)
        for _ in range(200):
            m, n = rng.randint(1, 6), rng.randint(1, 6)
            r = rng.randint(0, min(m, n))
            a = M([[rng.randint(-9, 9) for _ in range(r)] for _ in range(m)], cols=r)
            b = M([[rng.randint(-9, 9) for _ in range(n)] for _ in range(r)], cols=n)
            x = a @ b if rng.random() < 0.5 else M([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
            f = full_rank_factorization(x)
            assert f.left @ f.right == x
            assert rank(f.left) == rank(f.right) == f.rank == rank(x)


class TestInverse:
    def test_inverse(self):
        assert inverse(M([[2, 1], [1, 1]])) == M([[1, -1], [-1, 2]])

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            inverse(M([[1, 2], [2, 4]]))

    def test_not_square(self):
        with pytest.raises(NotSquare):
            inverse(M([[1, 2]]))


class TestMoorePenrose:
    def test_examples(self):
        assert moore_penrose(Matrix.diag([2, 0])) == Matrix.diag([Fraction(1, 2), 0])
        assert moore_penrose(Matrix.zeros(2, 3)) == Matrix.zeros(3, 2)
        half = Fraction(1, 2)
        assert moore_penrose(M([[1, 1], [0, 0]])) == M([[half, 0], [half, 0]])

    @given(low_rank_matrices())
    def test_penrose_equations(self, m):
        assert penrose_violations(m, moore_penrose(m)) == []

    @given(rational_matrices(3))
    def test_involution(self, m):
        assert moore_penrose(moore_penrose(m)) == m


class TestIndexAndGroupInverse:
    def test_index_examples(self):
        assert matrix_index(Matrix.identity(3)) == 0
        assert matrix_index(M([[0, 1], [0, 0]])) == 2
        assert matrix_index(Matrix.diag([1, 0, 0])) == 1

    def test_index_not_square(self):
        with pytest.raises(NotSquare):
            matrix_index(M([[1, 2]]))

    def test_group_inverse_examples(self):
        e11 = Matrix.diag([1, 0, 0])
        assert group_inverse(e11) == e11
        f = M([[2, 1, 0], [1, 1, 0], [0, 0, 0]])
        assert group_inverse(f) == M([[1, -1, 0], [-1, 2, 0], [0, 0, 0]])
        assert group_inverse(M([[2, 1], [1, 1]])) == M([[1, -1], [-1, 2]])

    def test_index_two_is_rejected(self):
        with pytest.raises(IndexNotOne):
            group_inverse(M([[0, 1], [0, 0]]))

    @given(square_matrices(entries=st.integers(-3, 3)))
    def test_defining_equations(self, m):
        if not is_group_invertible(m):
            assert matrix_index(m) >= 2
            return
        g = group_inverse(m)
        assert m @ g @ m == m and g @ m @ g == g and m @ g == g @ m

    @given(square_matrices(entries=st.integers(-3, 3)))
    def test_symmetric_matrices_group_inverse_is_moore_penrose(self, m):
        s = m + m.T
        if is_group_invertible(s):
            assert group_inverse(s) == moore_penrose(s)

    @given(square_matrices(entries=st.integers(-3, 3)))
    def test_group_inverse_equals_mp_iff_range_symmetric(self, m):
        if not is_group_invertible(m):
            return
        p = moore_penrose(m)
        assert (group_inverse(m) == p) == (m @ p == p @ m)

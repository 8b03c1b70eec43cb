import math
import random
from fractions import Fraction

import pytest

from sllift.errors import BadShape, DependentRows, NotInvertible, NotSquare
from sllift.intmat import (
    IntMatrix,
    adjugate_mod,
    det,
    maximal_minors,
    norm_report,
    size_reduce,
    solve_mod,
)
from sllift.lifting import random_sl_matrix


def rand_matrix(rng, rows, cols, bound):
    return IntMatrix([[rng.randrange(-bound, bound + 1) for _ in range(cols)] for _ in range(rows)])


class TestDet:
    def test_examples(self):
        assert det(IntMatrix.identity(3)) == 1
        assert det(IntMatrix([[3, 5], [1, 2]])) == 1
        assert det(IntMatrix([[2, 0], [0, 2]])) == 4

    def test_not_square(self):
        with pytest.raises(NotSquare):
            det(IntMatrix([[1, 2, 3], [4, 5, 6]]))

    def test_bareiss_agrees_with_cofactor(self):
        # n = 5 goes through fraction-free elimination; pin it against the
        # Laplace expansion evaluated by hand via permutation sum
        rng = random.Random(11)
        from itertools import permutations

        def perm_det(m):
            n = m.nrows
            total = 0
            for perm in permutations(range(n)):
                sign = 1
                seen = list(perm)
                for i in range(n):
                    for j in range(i + 1, n):
                        if seen[i] > seen[j]:
                            sign = -sign
                total += sign * math.prod(m.rows[i][perm[i]] for i in range(n))
            return total

        for _ in range(25):
            m = rand_matrix(rng, 5, 5, 6)
            assert det(m) == perm_det(m)


class TestAdjugateMod:
    def test_identity(self):
        assert adjugate_mod(IntMatrix.identity(4), 7) == IntMatrix.identity(4)

    def test_rotation(self):
        got = adjugate_mod(IntMatrix([[0, -1], [1, 0]]), 5)
        assert got == IntMatrix([[0, 1], [4, 0]])

    def test_not_invertible(self):
        with pytest.raises(NotInvertible):
            adjugate_mod(IntMatrix([[2, 0], [0, 1]]), 5)

    def test_two_sided_inverse_mod_35(self):
        for seed in range(20):
            m = random_sl_matrix(3, 35, seed)
            inv = adjugate_mod(m, 35)
            assert (m @ inv).reduce_mod(35) == IntMatrix.identity(3)
            assert (inv @ m).reduce_mod(35) == IntMatrix.identity(3)


class TestMaximalMinors:
    def test_examples(self):
        assert maximal_minors(IntMatrix([[1, 0, 0], [0, 1, 0]])) == (0, 0, 1)
        assert maximal_minors(IntMatrix([[3, 5]])) == (-5, 3)
        top = IntMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
        assert maximal_minors(top) == (0, 0, 0, 1)

    def test_bad_shape(self):
        with pytest.raises(BadShape):
            maximal_minors(IntMatrix([[1, 2], [3, 4]]))

    def test_determinant_expansion(self):
        rng = random.Random(23)
        for _ in range(150):
            n = rng.randrange(2, 6)
            b = rand_matrix(rng, n - 1, n, 100)
            v = [rng.randrange(-100, 101) for _ in range(n)]
            c = maximal_minors(b)
            assert det(b.with_row(v)) == sum(x * y for x, y in zip(v, c))


class TestSolveMod:
    def test_examples(self):
        assert solve_mod(IntMatrix.identity(3), (2, 3, 0), 10) == (2, 3, 0)
        m = random_sl_matrix(3, 12, 4)
        assert solve_mod(m, m.row(0), 12) == (1, 0, 0)

    def test_reconstruction_and_cramer(self):
        rng = random.Random(31)
        for _ in range(100):
            n = rng.randrange(2, 5)
            q = rng.choice([12, 35, 64, 101])
            a = random_sl_matrix(n, q, rng.randrange(2**30))
            w = tuple(rng.randrange(q) for _ in range(n))
            alpha = solve_mod(a, w, q)
            for j in range(n):
                got = sum(alpha[i] * a.rows[i][j] for i in range(n)) % q
                assert got == w[j]
            # the last coefficient is exactly the Cramer determinant mod q
            cramer = det(IntMatrix(a.rows[: n - 1]).with_row(w)) % q
            assert alpha[n - 1] == cramer


class TestSizeReduce:
    def test_examples(self):
        assert size_reduce((0, 1), IntMatrix([[1, 0]])) == (0, 1)
        assert size_reduce((7, 0), IntMatrix([[1, 0]])) == (0, 0)
        assert size_reduce((100, 201), IntMatrix([[1, 2]])) == (0, 1)

    def test_dependent_rows(self):
        with pytest.raises(DependentRows):
            size_reduce((1, 2, 3), IntMatrix([[1, 2, 3], [2, 4, 6]]))

    def test_stays_in_coset(self):
        rng = random.Random(41)
        for _ in range(100):
            n = rng.randrange(2, 6)
            b = rand_matrix(rng, n - 1, n, 50)
            c = maximal_minors(b)
            if all(x == 0 for x in c):
                continue  # dependent rows
            v = [rng.randrange(-500, 501) for _ in range(n)]
            w = size_reduce(v, b)
            # v - w must be an integer combination of the rows of b
            diff = [x - y for x, y in zip(v, w)]
            g = [[Fraction(sum(r1[j] * r2[j] for j in range(n))) for r2 in b.rows] for r1 in b.rows]
            rhs = [Fraction(sum(r[j] * diff[j] for j in range(n))) for r in b.rows]
            from sllift.intmat import _solve_fractions

            coeffs = _solve_fractions(g, rhs)
            assert all(c.denominator == 1 for c in coeffs)
            for j in range(n):
                assert diff[j] == sum(coeffs[i] * b.rows[i][j] for i in range(n - 1))


class TestNormReport:
    def test_zero(self):
        assert norm_report(IntMatrix([[0, 0], [0, 0]])).op_norm_estimate == 0.0

    def test_sandwich(self):
        rng = random.Random(59)
        tol = 1e-6
        for _ in range(100):
            n = rng.randrange(1, 6)
            m = rand_matrix(rng, n, n, 10** rng.randrange(1, 5))
            rep = norm_report(m)
            assert rep.max_norm <= rep.op_norm_estimate * (1 + tol)
            assert rep.op_norm_estimate <= n * rep.max_norm * (1 + tol)


class TestIntMatrix:
    def test_shape_validation(self):
        with pytest.raises(BadShape):
            IntMatrix([])
        with pytest.raises(BadShape):
            IntMatrix([[1, 2], [3]])

    def test_mul_and_transpose(self):
        a = IntMatrix([[1, 2], [3, 4]])
        b = IntMatrix([[0, 1], [1, 0]])
        assert a @ b == IntMatrix([[2, 1], [4, 3]])
        assert a.transpose() == IntMatrix([[1, 3], [2, 4]])

    def test_max_norm(self):
        assert IntMatrix([[3, -9], [2, 1]]).max_norm() == 9

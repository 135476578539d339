import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bordertn.smith import box_solutions, matmul, smith_normal_form, solve_integer

int_matrices = st.integers(1, 3).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=m, max_size=m)))


def det(a):
    return round(np.linalg.det(np.array(a, dtype=float)))


class TestSmithForm:
    def test_known_example(self):
        U, S, V = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        assert [S[i][i] for i in range(3)] == [2, 6, 12]

    def test_cycle_system(self):
        A = [[1, -1, 1, 0], [1, 0, -1, 1]]
        U, S, V = smith_normal_form(A)
        assert [S[0][0], S[1][1]] == [1, 1]

    @settings(max_examples=60, deadline=None)
    @given(int_matrices)
    def test_decomposition(self, a):
        U, S, V = smith_normal_form(a)
        assert matmul(matmul(U, a), V) == S
        assert abs(det(U)) == 1 and abs(det(V)) == 1
        diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
        for i, row in enumerate(S):
            for j, x in enumerate(row):
                if i != j:
                    assert x == 0
        nonzero = [d for d in diag if d]
        assert all(d > 0 for d in nonzero)
        assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
        assert diag[len(nonzero):] == [0] * (len(diag) - len(nonzero))


class TestIntegerSolutions:
    def test_no_solution(self):
        with pytest.raises(ValueError):
            solve_integer([[2, 4]], [3])

    def test_inconsistent(self):
        with pytest.raises(ValueError):
            solve_integer([[1, 1], [1, 1]], [1, 2])

    @settings(max_examples=60, deadline=None)
    @given(int_matrices, st.data())
    def test_box_matches_enumeration(self, a, data):
        n = len(a[0])
        b = [data.draw(st.integers(-5, 5)) for _ in a]
        upper = [data.draw(st.integers(0, 3)) for _ in range(n)]
        brute = sorted(x for x in itertools.product(*(range(u + 1) for u in upper))
                       if all(sum(r * v for r, v in zip(row, x)) == t for row, t in zip(a, b)))
        assert box_solutions(a, b, [0] * n, upper) == brute

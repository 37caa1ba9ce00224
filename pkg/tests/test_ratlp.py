import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from qlimit import ratlp
from qlimit.errors import DimensionMismatch
from qlimit.ratlp import LinearProgram, feasible, solve, solve_equalities, verify_duality


def vertex_optimum(c, rows, rhs):
    """Brute-force oracle for max c·x s.t. rows·x <= rhs, x >= 0: best feasible vertex."""
    n = len(c)
    planes = [(list(r), b) for r, b in zip(rows, rhs)]
    planes += [([F(int(i == j)) for i in range(n)], F(0)) for j in range(n)]
    best = None
    for combo in itertools.combinations(planes, n):
        x = solve_equalities([p[0] for p in combo], [p[1] for p in combo])
        if x is None:
            continue
        # require a unique point: the chosen planes must be independent
        mat = [p[0] for p in combo]
        if _rank(mat) < n:
            continue
        if any(v < 0 for v in x):
            continue
        if any(sum(a * v for a, v in zip(r, x)) > b for r, b in zip(rows, rhs)):
            continue
        val = sum(a * v for a, v in zip(c, x))
        best = val if best is None else max(best, val)
    return best


def _rank(mat):
    m = [list(r) for r in mat]
    rank = 0
    for col in range(len(m[0])):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


class TestSolve:
    def test_single_variable(self):
        sol = solve(LinearProgram([1], "max", [([1], "<=", 3)]))
        assert sol.optimal and sol.value == 3 and sol.x == [3]

    def test_simplex_face(self):
        sol = solve(LinearProgram([1, 1], "max", [([1, 1], "<=", 1)]))
        assert sol.value == 1

    def test_textbook_with_duals(self):
        lp = LinearProgram([1, 1], "max", [([2, 1], "<=", 4), ([1, 3], "<=", 3)])
        sol = solve(lp)
        assert sol.value == F(11, 5) and sol.x == [F(9, 5), F(2, 5)]
        assert verify_duality(lp, sol)
        # strong duality: b·y equals the optimum
        assert sum(y * b for y, (_, _, b) in zip(sol.dual, lp.constraints)) == sol.value

    def test_infeasible(self):
        sol = solve(LinearProgram([1], "max", [([1], "=", 1), ([1], "=", 2)]))
        assert sol.status == ratlp.INFEASIBLE and not sol

    def test_unbounded(self):
        sol = solve(LinearProgram([1, 0], "max", [([0, 1], "<=", 1)]))
        assert sol.status == ratlp.UNBOUNDED

    def test_min_with_free_and_bounded_variables(self):
        lp = LinearProgram([1, 1], "min", [([1, -1], "=", F(1, 2))],
                           bounds=[(None, None), (F(-1), F(3))])
        sol = solve(lp)
        assert sol.value == F(-3, 2) and sol.x == [F(-1, 2), F(-1)]
        assert verify_duality(lp, sol)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            LinearProgram([1, 1], "max", [([1], "<=", 1)])
        lp = LinearProgram([1, 1])
        with pytest.raises(DimensionMismatch):
            lp.add([1, 2, 3], "<=", 1)

    def test_degenerate_program_terminates(self):
        # a classic cycling example for largest-coefficient pricing
        lp = LinearProgram([F(3, 4), -150, F(1, 50), -6], "max", [
            ([F(1, 4), -60, F(-1, 25), 9], "<=", 0),
            ([F(1, 2), -90, F(-1, 50), 3], "<=", 0),
            ([0, 0, 1, 0], "<=", 1)])
        sol = solve(lp)
        assert sol.value == F(1, 20)
        assert verify_duality(lp, sol)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 3).flatmap(lambda n: st.tuples(
        st.lists(st.integers(-3, 5), min_size=n, max_size=n),
        st.lists(st.lists(st.integers(0, 4), min_size=n, max_size=n), min_size=1, max_size=4),
        st.lists(st.integers(1, 9), min_size=4, max_size=4))))
    def test_against_vertex_enumeration(self, data):
        c, rows, rhs = data
        rhs = rhs[:len(rows)]
        # keep the region bounded: add a box row
        rows = rows + [[1] * len(c)]
        rhs = rhs + [10]
        c = [F(v) for v in c]
        rows = [[F(a) for a in r] for r in rows]
        rhs = [F(b) for b in rhs]
        lp = LinearProgram(c, "max", [(r, "<=", b) for r, b in zip(rows, rhs)])
        sol = solve(lp)
        assert sol.optimal
        assert sol.value == vertex_optimum(c, rows, rhs)
        assert verify_duality(lp, sol)


class TestFeasible:
    def test_contradiction(self):
        assert feasible([([1], "=", 1), ([1], "=", 2)], 1, [(None, None)]) is None

    def test_switch_interpolation(self):
        # p = a + b x1 + c x2 on the points 01 -> 0 and 10 -> 1
        rows = [([1, 0, 1], "=", 0), ([1, 1, 0], "=", 1)]
        x = feasible(rows, 3, [(None, None)] * 3)
        assert x is not None
        assert x[0] + x[2] == 0 and x[0] + x[1] == 1

    def test_parity_linear_infeasible(self):
        rows = []
        for a, b in itertools.product((0, 1), repeat=2):
            rows.append(([1, a, b], "=", a ^ b))
        assert feasible(rows, 3, [(None, None)] * 3) is None

    def test_inequalities_use_phase_one(self):
        x = feasible([([1, 1], ">=", 2), ([1, -1], "<=", 0)], 2)
        assert x is not None and x[0] + x[1] >= 2 and x[0] <= x[1]

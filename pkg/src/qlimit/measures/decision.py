"""Deterministic query complexity D(f) by memoized restriction recursion."""

import numpy as np

from .trees import Leaf, Query


def mobius(values, m):
    """Multilinear coefficients of a total function given as a length-2^m table.

    ``values[key]`` is the value at the point whose bits (most significant first)
    spell ``key``.  Returns the integer coefficient array indexed the same way.
    """
    a = np.asarray(values, dtype=np.int64).copy()
    for b in range(m):
        step = 1 << b
        a = a.reshape(-1, 2, step)
        a[:, 1, :] -= a[:, 0, :]
        a = a.reshape(-1)
    return a


def _popcount(arr):
    arr = np.asarray(arr, dtype=np.int64)
    out = np.zeros_like(arr)
    while arr.any():
        out += arr & 1
        arr = arr >> 1
    return out


class _Solver:
    def __init__(self, f, use_degree_bound=True):
        self.f = f
        self.pts = f.points
        self.vals = f.outputs
        self.use_degree_bound = use_degree_bound
        self.memo = {}

    def _bounds(self, idx):
        """(lower bound, candidate query positions, upper bound) for a non-constant subset."""
        sub = self.pts[idx]
        varying = np.flatnonzero(sub.min(axis=0) != sub.max(axis=0))
        m = len(varying)
        if not self.use_degree_bound or m > 24 or len(idx) != (1 << m):
            return 1, list(varying), m
        # the subset is a full subcube on the varying positions: the function is
        # total there, so its degree bounds D below and its relevant variables above
        w = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
        key = sub[:, varying].astype(np.int64) @ w
        table = np.zeros(1 << m, dtype=np.int64)
        table[key] = self.vals[idx]
        coef = mobius(table, m)
        support = np.flatnonzero(coef)
        deg = int(_popcount(support).max())
        used = int(np.bitwise_or.reduce(support))
        relevant = [int(varying[j]) for j in range(m) if used >> (m - 1 - j) & 1]
        return max(deg, 1), relevant, len(relevant)

    def solve(self, idx):
        key = idx.tobytes()
        hit = self.memo.get(key)
        if hit is not None:
            return hit[0]
        v = self.vals[idx]
        if v.min() == v.max():
            self.memo[key] = (0, None)
            return 0
        lb, candidates, ub = self._bounds(idx)
        # querying candidates in any order gives height <= ub
        best, best_var = ub, candidates[0]
        if lb < ub:
            col = self.pts[idx]
            for i in candidates:
                mask = col[:, i] == 0
                a = self.solve(idx[mask])
                if 1 + a >= best:
                    continue
                b = self.solve(idx[~mask])
                if 1 + max(a, b) < best:
                    best, best_var = 1 + max(a, b), i
                    if best == lb:
                        break
        self.memo[key] = (best, best_var)
        return best

    def tree(self, idx):
        value = self.solve(idx)
        if value == 0:
            return Leaf(int(self.vals[idx[0]]))
        var = self.memo[idx.tobytes()][1]
        mask = self.pts[idx][:, var] == 0
        return Query(int(var) + 1, self.tree(idx[mask]), self.tree(idx[~mask]))


def _root(f):
    return np.arange(len(f), dtype=np.int64)


def deterministic_complexity(f, use_degree_bound=True):
    """D(f): minimum height of a decision tree computing ``f`` on its domain.

    ``use_degree_bound`` enables the pruning ``deg <= D <= #relevant bits`` on
    subproblems that are full subcubes; turning it off gives the plain
    minimax recursion.
    """
    return _Solver(f, use_degree_bound).solve(_root(f))


def optimal_tree(f, use_degree_bound=True):
    """A decision tree of height D(f) computing ``f``."""
    return _Solver(f, use_degree_bound).tree(_root(f))

"""Exact randomized query complexity for small functions via LPs over trees.

Trees are summarized by their *profile* on the domain: the output and the
number of queries on every domain point.  Only profiles matter to the LPs, so
trees are enumerated profile-wise, querying only positions that still split
the current sub-domain, and a tree is dropped when another one with the same
outputs costs pointwise no more.
"""

from fractions import Fraction
from typing import NamedTuple

from .. import ratlp
from ..errors import ArityTooLarge
from .certificates import verify_certificate
from .trees import Leaf, Query, RandomizedAlgorithm, path_assignment

MAX_ARITY = 3

FLAVORS = {
    "height": "height", "R": "height", "worst": "height",
    "expected": "expected", "Rbar": "expected",
    "zero": "zero", "R0": "zero",
}


class RandomizedResult(NamedTuple):
    value: Fraction
    algorithm: RandomizedAlgorithm
    lp: ratlp.LinearProgram
    solution: ratlp.Solution


def _pareto(entries):
    """Drop entries whose cost vector is pointwise >= another's (first of equals kept)."""
    entries = sorted(entries, key=lambda e: sum(e[0]))
    kept = []
    for costs, tree in entries:
        if any(all(a <= b for a, b in zip(k, costs)) for k, _ in kept):
            continue
        kept.append((costs, tree))
    return kept


def tree_profiles(f):
    """Non-dominated trees for ``f``'s domain: list of (outputs, costs, tree).

    ``outputs`` and ``costs`` are tuples aligned with ``f.domain``.
    """
    domain = f.domain
    memo = {}

    def profiles(rows):
        hit = memo.get(rows)
        if hit is not None:
            return hit
        size = len(rows)
        groups = {}
        for b in (0, 1):
            groups[(b,) * size] = [((0,) * size, Leaf(b))]
        for i in range(f.n):
            split = [domain[r][i] == "1" for r in rows]
            if all(split) or not any(split):
                continue
            rows0 = tuple(r for r, s in zip(rows, split) if not s)
            rows1 = tuple(r for r, s in zip(rows, split) if s)
            p0, p1 = profiles(rows0), profiles(rows1)
            for o0, c0, t0 in p0:
                for o1, c1, t1 in p1:
                    outs, costs = [], []
                    it0, it1 = iter(zip(o0, c0)), iter(zip(o1, c1))
                    for s in split:
                        o, c = next(it1) if s else next(it0)
                        outs.append(o)
                        costs.append(c + 1)
                    groups.setdefault(tuple(outs), []).append(
                        (tuple(costs), Query(i + 1, t0, t1)))
        result = [(outs, costs, tree) for outs, entries in groups.items()
                  for costs, tree in _pareto(entries)]
        memo[rows] = result
        return result

    return profiles(tuple(range(len(domain))))


def _algorithm(columns, weights):
    return RandomizedAlgorithm([(col[2], w) for col, w in zip(columns, weights) if w])


def randomized_complexity(f, epsilon=Fraction(1, 3), flavor="expected", max_arity=MAX_ARITY):
    """Exact R_ε (``height``), R̄_ε (``expected``) or R_0 (``zero``) of ``f``.

    Returns a :class:`RandomizedResult` whose ``algorithm`` attains the value.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    flavor = FLAVORS[flavor]
    if f.n > max_arity:
        raise ArityTooLarge(f"randomized complexity enumerates trees; n <= {max_arity} only")
    epsilon = Fraction(0) if flavor == "zero" else Fraction(epsilon)
    target = tuple(f(x) for x in f.domain)
    columns = tree_profiles(f)
    if epsilon == 0:
        columns = [c for c in columns if c[0] == target]
    N = len(target)

    def wrong_rows(cols):
        return [[int(c[0][r] != target[r]) for c in cols] for r in range(N)]

    if flavor == "height":
        for h in range(f.n + 1):
            cols = [c for c in columns if max(c[1]) <= h]
            if not cols:
                continue
            lp = ratlp.LinearProgram([0] * len(cols), "min")
            lp.add([1] * len(cols), "=", 1)
            if epsilon:
                for row in wrong_rows(cols):
                    lp.add(row, "<=", epsilon)
            sol = ratlp.solve(lp)
            if sol.optimal:
                return RandomizedResult(Fraction(h), _algorithm(cols, sol.x), lp, sol)
        raise AssertionError("the full-query tree is always feasible")

    # expected cost: variables p_1..p_m and t; minimize t
    m = len(columns)
    lp = ratlp.LinearProgram([0] * m + [1], "min")
    lp.add([1] * m + [0], "=", 1)
    for r in range(N):
        lp.add([c[1][r] for c in columns] + [-1], "<=", 0)
    if epsilon:
        for row in wrong_rows(columns):
            lp.add(row + [0], "<=", epsilon)
    sol = ratlp.solve(lp)
    return RandomizedResult(sol.value, _algorithm(columns, sol.x[:m]), lp, sol)


def leaves_are_certificates(f, algorithm):
    """Every support tree's path on every domain input is a certificate for that input."""
    return all(verify_certificate(f, x, path_assignment(tree, x))
               for tree, _ in algorithm.support for x in f.domain)

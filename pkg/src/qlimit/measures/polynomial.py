"""Exact and approximate polynomial degree.

A polynomial is a dict mapping a monomial (tuple of 1-based positions) to
its rational coefficient.
"""

import itertools
from fractions import Fraction

import numpy as np

from .. import ratlp
from ..errors import ArityTooLarge
from .decision import mobius

MAX_ARITY = 10


def monomials(n, d):
    return [m for size in range(d + 1) for m in itertools.combinations(range(1, n + 1), size)]


def evaluate(poly, x):
    return sum((c for m, c in poly.items() if all(x[i - 1] == "1" for i in m)), Fraction(0))


def _row(x, monos):
    return [1 if all(x[i - 1] == "1" for i in m) else 0 for m in monos]


def _check_arity(f):
    if f.n > MAX_ARITY:
        raise ArityTooLarge(f"polynomial measures are limited to n <= {MAX_ARITY}")


def _binary_search(lo, hi, ok):
    """Least d in [lo, hi] with ok(d) true; ok is monotone and ok(hi) holds."""
    witness = None
    while lo < hi:
        mid = (lo + hi) // 2
        w = ok(mid)
        if w is not None:
            hi, witness = mid, w
        else:
            lo = mid + 1
    return lo, witness


def _total_polynomial(f):
    """Unique multilinear representation of a total function (Möbius inversion)."""
    table = np.zeros(1 << f.n, dtype=np.int64)
    table[f.keys] = f.outputs
    coef = mobius(table, f.n)
    poly = {}
    for key in np.flatnonzero(coef).tolist():
        mono = tuple(i + 1 for i in range(f.n) if key >> (f.n - 1 - i) & 1)
        poly[mono] = Fraction(int(coef[key]))
    return poly


def degree_witness(f):
    """(deg(f), a representing polynomial of that degree)."""
    if f.is_total and f.n <= 24:
        poly = _total_polynomial(f)
        return max((len(m) for m in poly), default=0), poly
    _check_arity(f)
    points = f.domain
    rhs = [f(x) for x in points]

    def ok(d):
        monos = monomials(f.n, d)
        sol = ratlp.solve_equalities([_row(x, monos) for x in points], rhs)
        if sol is None:
            return None
        return {m: c for m, c in zip(monos, sol) if c}

    d, poly = _binary_search(0, f.n, ok)
    if poly is None:
        poly = ok(d)
    return d, poly


def degree(f):
    return degree_witness(f)[0]


def approx_degree_witness(f, epsilon=Fraction(1, 3)):
    """(adeg_ε(f), polynomial).

    ``|p(x) - f(x)| <= ε`` on Dom(f) and ``0 <= p(x) <= 1`` on all of {0,1}^n.
    """
    _check_arity(f)
    epsilon = Fraction(epsilon)
    cube = ["".join(b) for b in itertools.product("01", repeat=f.n)]

    def ok(d):
        monos = monomials(f.n, d)
        cons = []
        for x in cube:
            row = _row(x, monos)
            cons.append((row, ">=", 0))
            cons.append((row, "<=", 1))
        for x, v in f.items():
            row = _row(x, monos)
            cons.append((row, ">=", v - epsilon))
            cons.append((row, "<=", v + epsilon))
        sol = ratlp.feasible(cons, len(monos), [(None, None)] * len(monos))
        if sol is None:
            return None
        return {m: c for m, c in zip(monos, sol) if c}

    d, poly = _binary_search(0, f.n, ok)
    if poly is None:
        poly = ok(d)
    return d, poly


def approx_degree(f, epsilon=Fraction(1, 3)):
    return approx_degree_witness(f, epsilon)[0]


def represents(f, poly):
    return all(evaluate(poly, x) == v for x, v in f.items())

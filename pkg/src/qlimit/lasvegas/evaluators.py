"""Bounded-error evaluators for nodes of a composed tree.

``estimate(inp, depth, idx, rng)`` returns a guess for the value of node
(depth, idx) of a :class:`LazyComposedInput`, paying for every leaf it reads.
``error_bound`` is a proven upper bound on the probability of a wrong guess.
"""

import math
from fractions import Fraction

from ..errors import ArityTooLarge
from ..measures.randomized import randomized_complexity


def repetitions(p, eps, method="chernoff"):
    """Least odd r such that a majority of r runs of a p-error estimator errs w.p. <= eps.

    ``chernoff`` uses exp(-2 r (1/2 - p)^2) <= eps; ``exact`` uses the exact
    binomial tail.  A zero-error estimator needs a single run.
    """
    p, eps = Fraction(p), Fraction(eps)
    if p == 0:
        return 1
    if not p < Fraction(1, 2):
        raise ValueError("amplification needs error below 1/2")
    if not 0 < eps < 1:
        raise ValueError("target error must lie in (0, 1)")
    if method == "chernoff":
        gap = float(Fraction(1, 2) - p)
        r = max(1, math.ceil(math.log(1 / float(eps)) / (2 * gap * gap)))
        return r if r % 2 else r + 1
    if method == "exact":
        r = 1
        while majority_error(p, r) > eps:
            r += 2
        return r
    raise ValueError(f"unknown method {method!r}")


def majority_error(p, r):
    """Exact probability that the majority of r independent p-error runs is wrong."""
    p = Fraction(p)
    return sum(math.comb(r, j) * p ** j * (1 - p) ** (r - j) for j in range((r + 1) // 2, r + 1))


class Evaluator:
    name = "evaluator"
    error_bound = Fraction(0)

    def estimate(self, inp, depth, idx, rng):
        raise NotImplementedError

    def estimate_at(self, inp, address, rng):
        return self.estimate(inp, len(address), inp.index_of(address), rng)

    def amplified(self, inp, depth, idx, rng, eps, method="chernoff"):
        """Majority vote over enough runs to bring the error to ``eps``."""
        r = repetitions(self.error_bound, eps, method)
        if r == 1:
            return self.estimate(inp, depth, idx, rng)
        ones = sum(self.estimate(inp, depth, idx, rng) for _ in range(r))
        return int(2 * ones > r)


class DirectionalNAND(Evaluator):
    """Zero-error NAND-tree evaluation: read a random child first and skip the
    other one when the first already fixes the answer (a 0 child)."""

    name = "DirectionalNAND"

    def estimate(self, inp, depth, idx, rng):
        k, leaf, coin = inp.k, inp.leaf, rng.getrandbits

        def ev(d, i):
            if d == k:
                return leaf(i)
            first = coin(1)
            if ev(d + 1, 2 * i + first) == 0:
                return 1
            return 1 - ev(d + 1, 2 * i + 1 - first)

        return ev(depth, idx)


# (first, second, third) child orders, drawn uniformly
_MAJ_ORDERS = ((0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 0, 1), (1, 2, 0), (2, 1, 0))


class NaiveMAJ3(Evaluator):
    """Zero-error MAJ3-tree evaluation: read two random children and the third
    only when they disagree."""

    name = "NaiveMAJ3"

    def estimate(self, inp, depth, idx, rng):
        k, leaf, pick = inp.k, inp.leaf, rng.randrange

        def ev(d, i):
            if d == k:
                return leaf(i)
            a, b, c = _MAJ_ORDERS[pick(6)]
            base = 3 * i
            va = ev(d + 1, base + a)
            if va == ev(d + 1, base + b):
                return va
            return ev(d + 1, base + c)

        return ev(depth, idx)


class GenericAmplified(Evaluator):
    """Evaluate any small f recursively with an optimal bounded-error tree mix.

    At each node a tree is drawn from an optimal R_{1/4} (height) algorithm for
    f; each child it reads is estimated recursively and amplified to error
    1/(12h) with h the tree height, so a node errs with probability at most
    1/4 + h/(12h) = 1/3.
    """

    name = "GenericAmplified"
    error_bound = Fraction(1, 3)

    def __init__(self, f, method="chernoff"):
        if f.n > 3:
            raise ArityTooLarge("the generic evaluator needs exact R for n <= 3")
        res = randomized_complexity(f, Fraction(1, 4), "height")
        self.f = f
        self.support = res.algorithm.support
        self.cum = []
        total = Fraction(0)
        for _, p in self.support:
            total += p
            self.cum.append(total)
        self.height = max(res.algorithm.height, 1)
        self.child_eps = Fraction(1, 12 * self.height)
        self.method = method

    def _draw(self, rng):
        u = Fraction(rng.getrandbits(53), 2 ** 53)
        for (tree, _), c in zip(self.support, self.cum):
            if u < c:
                return tree
        return self.support[-1][0]

    def estimate(self, inp, depth, idx, rng):
        if depth == inp.k:
            return inp.leaf(idx)
        node = self._draw(rng)
        n = inp.n
        while not hasattr(node, "value"):
            child = n * idx + node.index - 1
            if depth + 1 == inp.k:
                bit = inp.leaf(child)
            else:
                bit = self.amplified(inp, depth + 1, child, rng, self.child_eps, self.method)
            node = node.one if bit else node.zero
        return node.value


class NoisyEvaluator(Evaluator):
    """Wraps an evaluator and flips its answer with probability ``flip``."""

    def __init__(self, inner, flip):
        self.inner = inner
        self.flip = Fraction(flip)
        self.name = f"Noisy({inner.name},{self.flip})"
        self.error_bound = min(Fraction(1), inner.error_bound + self.flip)

    def estimate(self, inp, depth, idx, rng):
        bit = self.inner.estimate(inp, depth, idx, rng)
        if rng.random() < self.flip:
            return 1 - bit
        return bit


EVALUATORS = {"DirectionalNAND": DirectionalNAND, "NaiveMAJ3": NaiveMAJ3,
              "GenericAmplified": GenericAmplified}


def make_evaluator(name, f=None):
    if name == "GenericAmplified":
        return GenericAmplified(f)
    if name not in EVALUATORS:
        raise ValueError(f"unknown evaluator {name!r}")
    return EVALUATORS[name]()


def default_evaluator(f):
    """The zero-error evaluator for NAND2 / MAJ3, otherwise the generic one."""
    from ..boolfn import catalog
    if f == catalog("NAND2"):
        return DirectionalNAND()
    if f == catalog("MAJ3"):
        return NaiveMAJ3()
    return GenericAmplified(f)

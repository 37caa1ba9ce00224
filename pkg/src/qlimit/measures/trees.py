"""Deterministic decision trees and probability mixtures of them."""

from dataclasses import dataclass
from fractions import Fraction

from ..boolfn import PartialAssignment


@dataclass(frozen=True)
class Leaf:
    value: int

    def evaluate(self, x):
        return self.value

    def path(self, x):
        return ()

    @property
    def height(self):
        return 0

    def cost(self, x):
        return 0

    def to_json(self):
        return self.value


@dataclass(frozen=True)
class Query:
    """Query bit ``index`` (1-based) and continue in ``zero`` or ``one``."""

    index: int
    zero: object
    one: object

    def _child(self, x):
        return self.one if x[self.index - 1] == "1" else self.zero

    def evaluate(self, x):
        node = self
        while isinstance(node, Query):
            node = node._child(x)
        return node.value

    def path(self, x):
        """Queried (index, bit) pairs, root first."""
        out = []
        node = self
        while isinstance(node, Query):
            out.append((node.index, int(x[node.index - 1])))
            node = node._child(x)
        return tuple(out)

    def cost(self, x):
        return len(self.path(x))

    @property
    def height(self):
        return 1 + max(self.zero.height, self.one.height)

    def to_json(self):
        return {"q": self.index, "0": self.zero.to_json(), "1": self.one.to_json()}


DecisionTree = (Leaf, Query)


def tree_from_json(doc):
    if isinstance(doc, int):
        return Leaf(doc)
    return Query(doc["q"], tree_from_json(doc["0"]), tree_from_json(doc["1"]))


def well_formed(tree, n, seen=frozenset()):
    """No index repeats on a root-to-leaf path and every index lies in 1..n."""
    if isinstance(tree, Leaf):
        return tree.value in (0, 1)
    if not 1 <= tree.index <= n or tree.index in seen:
        return False
    seen = seen | {tree.index}
    return well_formed(tree.zero, n, seen) and well_formed(tree.one, n, seen)


def verify_tree(f, tree):
    """True iff ``tree`` is a valid decision tree on ``n(f)`` bits computing ``f``."""
    return well_formed(tree, f.n) and all(tree.evaluate(x) == v for x, v in f.items())


def path_assignment(tree, x):
    return PartialAssignment.from_positions(len(x), dict(tree.path(x)))


class RandomizedAlgorithm:
    """A probability distribution over decision trees."""

    def __init__(self, support):
        support = [(t, Fraction(p)) for t, p in support if p != 0]
        if sum(p for _, p in support) != 1 or any(p < 0 for _, p in support):
            raise ValueError("probabilities must be non-negative and sum to 1")
        self.support = support

    def cost(self, x):
        return sum(p * t.cost(x) for t, p in self.support)

    def error(self, f, x):
        return sum(p for t, p in self.support if t.evaluate(x) != f(x))

    @property
    def height(self):
        return max(t.height for t, _ in self.support)

    def max_cost(self, f):
        return max(self.cost(x) for x in f.domain)

    def max_error(self, f):
        return max(self.error(f, x) for x in f.domain)

    def __len__(self):
        return len(self.support)

    def to_json(self):
        return [{"p": f"{p.numerator}/{p.denominator}", "tree": t.to_json()}
                for t, p in self.support]

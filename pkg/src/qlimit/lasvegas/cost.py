"""Exact worst-case expected query cost of the zero-error evaluators.

W[l][v] is the largest expected number of leaf queries the evaluator makes on
a depth-l subtree whose root has value v, the maximum taken over all inputs.
A leaf costs one query, so W[0][v] = 1.  Because the evaluator treats the
children independently, the worst input is found level by level: W[l][v] is
the maximum over child patterns p in f^{-1}(v) of the expected cost of
reading p when child i costs W[l-1][p_i].
"""

from dataclasses import dataclass
from fractions import Fraction

from ..errors import UnsupportedEvaluator

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


def _nand_pattern_cost(p, w):
    # a random child first; the second is read only when the first is 1
    a, b = p
    first_a = w[a] + (w[b] if a == 1 else 0)
    first_b = w[b] + (w[a] if b == 1 else 0)
    return HALF * (first_a + first_b)


def _maj_pattern_cost(p, w):
    # a random pair first; the third child only when the pair disagrees
    total = Fraction(0)
    for i, j, rest in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        cost = w[p[i]] + w[p[j]]
        if p[i] != p[j]:
            cost += w[p[rest]]
        total += cost
    return THIRD * total


PATTERN_COST = {"DirectionalNAND": ("NAND2", _nand_pattern_cost),
                "NaiveMAJ3": ("MAJ3", _maj_pattern_cost)}


@dataclass
class CostTable:
    evaluator: str
    levels: list  # levels[l] = {v: W[l][v]}
    worst: list   # worst[l] = {v: maximizing child pattern}, empty at l = 0

    def W(self, level, value=1):
        return self.levels[level][value]

    def ratio(self, level, value=1):
        """W[l][v] / W[l-1][v]."""
        return self.levels[level][value] / self.levels[level - 1][value]

    def to_json(self):
        rows = []
        for l, (w, p) in enumerate(zip(self.levels, self.worst)):
            rows.append({"level": l,
                         "W": {str(v): f"{q.numerator}/{q.denominator}" for v, q in w.items()},
                         "pattern": {str(v): s for v, s in p.items()}})
        return {"evaluator": self.evaluator, "levels": rows}


def exact_expected_cost(evaluator, f, levels):
    """The exact table W[0..levels] for a supported evaluator on its function."""
    from ..boolfn import catalog

    name = evaluator if isinstance(evaluator, str) else getattr(evaluator, "name", "")
    if name not in PATTERN_COST:
        raise UnsupportedEvaluator(f"no exact cost model for evaluator {name!r}")
    fname, cost = PATTERN_COST[name]
    if f != catalog(fname):
        raise UnsupportedEvaluator(f"{name} evaluates {fname} only")
    patterns = {v: [tuple(int(c) for c in x) for x in f.preimage(v)] for v in (0, 1)}
    table = [{0: Fraction(1), 1: Fraction(1)}]
    worst = [{}]
    for _ in range(levels):
        w = table[-1]
        row, arg = {}, {}
        for v in (0, 1):
            best = None
            for p in patterns[v]:
                c = cost(p, w)
                if best is None or c > best:
                    best, arg[v] = c, "".join(map(str, p))
            row[v] = best
        table.append(row)
        worst.append(arg)
    return CostTable(name, table, worst)

"""Exact query-complexity measures on explicit partial functions."""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import UnknownName
from .certificates import (CertificateReport, certificate_complexity, min_certificate,
                           verify_certificate)
from .decision import deterministic_complexity, optimal_tree
from .polynomial import (approx_degree, approx_degree_witness, degree, degree_witness,
                         represents)
from .randomized import (RandomizedResult, leaves_are_certificates, randomized_complexity,
                         tree_profiles)
from .sensitivity import (block_sensitivity, block_sensitivity_witness,
                          fractional_block_sensitivity, fractional_block_sensitivity_witness,
                          minimal_sensitive_blocks, sensitivity, sensitivity_witness,
                          verify_blocks)
from .trees import Leaf, Query, RandomizedAlgorithm, tree_from_json, verify_tree

DEFAULT_EPSILON = Fraction(1, 3)


def rational_str(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass
class MeasureReport:
    measure: str
    value: Fraction
    witness: dict = field(default=None)

    def to_json(self):
        doc = {"measure": self.measure, "value": rational_str(self.value)}
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _value_only(fn):
    return lambda f, epsilon: fn(f)


MEASURES = {
    "D": _value_only(deterministic_complexity),
    "C": _value_only(lambda f: certificate_complexity(f).C),
    "C0": _value_only(lambda f: certificate_complexity(f).C0),
    "C1": _value_only(lambda f: certificate_complexity(f).C1),
    "s": _value_only(sensitivity),
    "bs": _value_only(block_sensitivity),
    "fbs": _value_only(fractional_block_sensitivity),
    "deg": _value_only(degree),
    "adeg": lambda f, epsilon: approx_degree(f, epsilon),
    "R0": lambda f, epsilon: randomized_complexity(f, 0, "zero").value,
    "Rbar": lambda f, epsilon: randomized_complexity(f, epsilon, "expected").value,
    "R": lambda f, epsilon: randomized_complexity(f, epsilon, "height").value,
}

# the measures reported by ``--all`` (randomized ones only when n <= 3)
STANDARD = ("C", "D", "s", "bs", "fbs", "deg", "R0")


def compute(name, f, epsilon=DEFAULT_EPSILON):
    """Value of the named measure on ``f`` as a Fraction."""
    if name not in MEASURES:
        raise UnknownName(name)
    return Fraction(MEASURES[name](f, Fraction(epsilon)))


def report(name, f, epsilon=DEFAULT_EPSILON):
    """A :class:`MeasureReport` with a re-verified witness where one exists."""
    epsilon = Fraction(epsilon)
    if name == "D":
        tree = optimal_tree(f)
        assert verify_tree(f, tree)
        return MeasureReport("D", Fraction(tree.height), {"tree": tree.to_json()})
    if name in ("C", "C0", "C1"):
        rep = certificate_complexity(f)
        value = getattr(rep, name)
        xs = [x for x in f.domain if rep.sizes[x] == value and
              (name == "C" or f(x) == int(name[1]))]
        x = xs[0]
        p = rep.witnesses[x]
        assert verify_certificate(f, x, p)
        return MeasureReport(name, Fraction(value), {"input": x, "certificate": p.bits})
    if name == "s":
        value, x, bits = sensitivity_witness(f)
        return MeasureReport("s", Fraction(value), {"input": x, "bits": list(bits)})
    if name == "bs":
        value, x, blocks = block_sensitivity_witness(f)
        assert verify_blocks(f, x, blocks)
        return MeasureReport("bs", Fraction(value),
                             {"input": x, "blocks": [list(b) for b in blocks]})
    if name == "fbs":
        value, x, weights = fractional_block_sensitivity_witness(f)
        return MeasureReport("fbs", value, {"input": x, "weights": [
            {"block": list(b), "w": rational_str(w)} for b, w in weights.items()]})
    if name in ("deg", "adeg"):
        d, poly = degree_witness(f) if name == "deg" else approx_degree_witness(f, epsilon)
        if name == "deg":
            assert represents(f, poly)
        return MeasureReport(name, Fraction(d), {"polynomial": [
            {"monomial": list(m), "c": rational_str(c)} for m, c in poly.items()]})
    if name in ("R0", "Rbar", "R"):
        flavor = {"R0": "zero", "Rbar": "expected", "R": "height"}[name]
        res = randomized_complexity(f, 0 if name == "R0" else epsilon, flavor)
        return MeasureReport(name, res.value, {"algorithm": res.algorithm.to_json()})
    if name in MEASURES:
        return MeasureReport(name, compute(name, f, epsilon))
    raise UnknownName(name)


__all__ = [
    "CertificateReport", "Leaf", "MeasureReport", "MEASURES", "Query", "RandomizedAlgorithm",
    "RandomizedResult", "STANDARD", "approx_degree", "approx_degree_witness",
    "block_sensitivity", "block_sensitivity_witness", "certificate_complexity", "compute",
    "degree", "degree_witness", "deterministic_complexity", "fractional_block_sensitivity",
    "fractional_block_sensitivity_witness", "leaves_are_certificates", "min_certificate",
    "minimal_sensitive_blocks", "optimal_tree", "randomized_complexity", "rational_str",
    "report", "represents", "sensitivity", "sensitivity_witness", "tree_from_json",
    "tree_profiles", "verify_blocks", "verify_certificate", "verify_tree",
]

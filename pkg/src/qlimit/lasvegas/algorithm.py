"""The recursive certificate-finding algorithm A_k (classical flavor).

A_1 reads all n bits and returns a minimal certificate.  A_k estimates the
n children of the root, picks a minimal certificate c of f for the estimated
string z, and certifies each child fixed by c with A_{k-1}, retrying a child
whose run fails.  Any inconsistency ends the run with ⊥, so a returned
certificate is always correct.
"""

import json
import math
import random
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction

from ..boolfn import PartialAssignment
from ..measures.certificates import certificate_complexity, verify_certificate

ALGORITHM_PRNG = "random.Random (MT19937)"


@dataclass
class RecursiveCertificate:
    """Value b of a node, the certificate c over its children, and sub-certificates.

    At depth 1 the children are leaves and ``c`` fixes leaf bits directly.
    """

    value: int
    assignment: PartialAssignment
    children: dict = field(default_factory=dict)  # child index -> RecursiveCertificate

    def flatten(self, address=()):
        """Leaf address -> bit for every leaf the certificate fixes."""
        if not self.children:
            return {address + (i - 1,): b for i, b in self.assignment.items()}
        out = {}
        for i, child in self.children.items():
            out.update(child.flatten(address + (i,)))
        return out

    @property
    def size(self):
        return len(self.flatten())

    def to_json(self):
        doc = {"value": self.value, "c": self.assignment.bits}
        if self.children:
            doc["children"] = {str(i): ch.to_json() for i, ch in sorted(self.children.items())}
        return doc


@dataclass
class RunResult:
    certificate: RecursiveCertificate  # None means ⊥
    queries: int

    @property
    def bot(self):
        return self.certificate is None


class Transcript:
    """Collects JSON-lines events: query, estimate, retry, output."""

    def __init__(self):
        self.events = []

    def add(self, event, **data):
        self.events.append({"event": event, **data})

    def dumps(self):
        return "".join(json.dumps(e, sort_keys=True) + "\n" for e in self.events)


def default_retries(f):
    """1 + ceil(log2 C(f)) attempts per certified child."""
    c = max(certificate_complexity(f).C, 1)
    return 1 + math.ceil(math.log2(c))


def run_Ak(f, k, inp, evaluator, seed=None, rng=None, retries=None, transcript=None,
           method="chernoff"):
    """Run A_k on ``inp``; returns a :class:`RunResult` (certificate or ⊥).

    Children are estimated to error 1/(4n) with majority-vote amplification.
    The query count includes every leaf read, estimates and retries included.
    """
    if k < 1 or k != inp.k:
        raise ValueError("k must be positive and match the input depth")
    if rng is None:
        rng = random.Random(seed)
    if retries is None:
        retries = default_retries(f)
    eps = Fraction(1, 4 * f.n)
    # minimal certificates, lexicographic tie-break, for every domain point
    best_cert = certificate_complexity(f).witnesses
    n = f.n
    start = inp.queries
    if transcript is not None:
        previous = inp.listener
        inp.listener = lambda a, b: transcript.add("query", address=list(a), bit=b)

    def run(depth, idx):
        if depth == k - 1:
            z = "".join(str(inp.leaf(n * idx + i)) for i in range(n))
            if z not in f:  # impossible for a consistent input
                return None
            return RecursiveCertificate(f(z), best_cert[z])
        z = "".join(str(evaluator.amplified(inp, depth + 1, n * idx + i, rng, eps, method))
                    for i in range(n))
        if transcript is not None:
            transcript.add("estimate", address=list(inp.address_of(depth, idx)), z=z)
        if z not in f:
            return None
        c = best_cert[z]
        children = {}
        for i, bit in c.items():
            sub = None
            for attempt in range(retries):
                sub = run(depth + 1, n * idx + i - 1)
                if sub is not None:
                    break
                if transcript is not None:
                    transcript.add("retry", address=list(inp.address_of(depth + 1, n * idx + i - 1)),
                                   attempt=attempt + 1)
            if sub is None or sub.value != bit:
                return None
            children[i - 1] = sub
        return RecursiveCertificate(f(z), c, children)

    try:
        cert = run(0, 0)
    finally:
        if transcript is not None:
            inp.listener = previous
    result = RunResult(cert, inp.queries - start)
    if transcript is not None:
        transcript.add("output", bot=result.bot, queries=result.queries,
                       value=None if cert is None else cert.value,
                       size=None if cert is None else cert.size)
    return result


@lru_cache(maxsize=4096)
def _certifies(f, p, value):
    consistent = [y for y in f.domain if p.contained_in(y)]
    return bool(consistent) and all(f(y) == value for y in consistent)


def verify_recursive(f, k, cert, inp, address=()):
    """Level-by-level check that ``cert`` certifies the node at ``address`` of ``inp``."""
    if cert is None or cert.assignment.n != f.n:
        return False
    if not _certifies(f, cert.assignment, cert.value):
        return False
    level = k - len(address)
    if level == 1:
        if cert.children:
            return False
        return all(inp.peek(address + (i - 1,)) == b for i, b in cert.assignment.items())
    fixed = dict(cert.assignment.items())
    if set(cert.children) != {i - 1 for i in fixed}:
        return False
    for i, b in fixed.items():
        child = cert.children[i - 1]
        if child.value != b or not verify_recursive(f, k, child, inp, address + (i - 1,)):
            return False
    return True


def verify_flat(f, k, cert, inp):
    """The flattened leaf assignment agrees with the input (used with verify_recursive)."""
    return all(inp.peek(a) == b for a, b in cert.flatten().items())


__all__ = ["ALGORITHM_PRNG", "RecursiveCertificate", "RunResult", "Transcript",
           "default_retries", "run_Ak", "verify_certificate", "verify_flat", "verify_recursive"]

"""Certificates and certificate complexity."""

import itertools
from functools import lru_cache
from dataclasses import dataclass

import numpy as np

from ..boolfn import PartialAssignment


def _as_assignment(p):
    return p if isinstance(p, PartialAssignment) else PartialAssignment(p)


def verify_certificate(f, x, p):
    """``p ⊆ x`` and every domain point consistent with ``p`` has value ``f(x)``."""
    p = _as_assignment(p)
    if x not in f or p.n != f.n or not p.contained_in(x):
        return False
    v = f(x)
    return all(f(y) == v for y in f.domain if p.contained_in(y))


def bit_columns(f):
    """Per-position 0/1 columns of the domain (position 1 first) as int64 arrays."""
    return [f.points[:, i].astype(np.int64) for i in range(f.n)]


def min_certificate(f, x):
    """Smallest certificate for ``x``; ties go to the lexicographically smallest index set."""
    v = f(x)
    pts = f.points
    vals = f.outputs
    xb = np.array([int(c) for c in x], dtype=np.uint8)
    opposite = pts[vals != v]
    for size in range(f.n + 1):
        for pos in itertools.combinations(range(f.n), size):
            cols = list(pos)
            if not np.any(np.all(opposite[:, cols] == xb[cols], axis=1)):
                return PartialAssignment.of(x, [i + 1 for i in pos])
    raise AssertionError("the full input is always a certificate")


@dataclass
class CertificateReport:
    C: int
    C0: int
    C1: int
    sizes: dict  # x -> C_x(f)
    witnesses: dict  # x -> PartialAssignment

    def argmax(self, b=None):
        xs = [x for x in self.sizes if b is None or self._values[x] == b]
        return max(xs, key=lambda x: (self.sizes[x], [-ord(c) for c in x]))


@lru_cache(maxsize=32)
def certificate_complexity(f):
    """C(f), C0(f), C1(f) and a minimal certificate for every domain point.

    Subsets of positions are tried in increasing size and lexicographic order,
    all inputs at once: a subset certifies every input whose projection onto it
    is monochromatic over the domain.  Results are cached per function and
    must be treated as read-only.
    """
    N = len(f)
    vals = f.outputs.astype(np.int64)
    cols = bit_columns(f)
    sizes = np.full(N, -1, dtype=np.int64)
    chosen = [None] * N
    unresolved = np.ones(N, dtype=bool)
    for size in range(f.n + 1):
        for pos in itertools.combinations(range(f.n), size):
            key = np.zeros(N, dtype=np.int64)
            for i in pos:
                key = (key << 1) | cols[i]
            total = np.bincount(key, minlength=1 << size)
            ones = np.bincount(key, weights=vals, minlength=1 << size)
            mono = (ones == 0) | (ones == total)
            hit = unresolved & mono[key]
            if hit.any():
                sizes[hit] = size
                for r in np.flatnonzero(hit):
                    chosen[r] = pos
                unresolved &= ~hit
                if not unresolved.any():
                    break
        if not unresolved.any():
            break
    domain = f.domain
    size_map = {x: int(sizes[r]) for r, x in enumerate(domain)}
    witnesses = {x: PartialAssignment.of(x, [i + 1 for i in chosen[r]])
                 for r, x in enumerate(domain)}
    c0 = max((size_map[x] for x in f.preimage(0)), default=0)
    c1 = max((size_map[x] for x in f.preimage(1)), default=0)
    report = CertificateReport(max(c0, c1), c0, c1, size_map, witnesses)
    report._values = {x: f(x) for x in domain}
    return report


def certificate_size(f):
    return certificate_complexity(f).C

"""Sensitivity, block sensitivity and fractional block sensitivity."""

from fractions import Fraction

import numpy as np

from .. import ratlp
from ..errors import ArityTooLarge, TooManyBlocks
from .certificates import certificate_complexity

MAX_BLOCK_ARITY = 20
DEFAULT_BLOCK_CAP = 1 << 16


def _bits_to_positions(mask, n):
    return tuple(i + 1 for i in range(n) if mask >> (n - 1 - i) & 1)


def sensitivity_witness(f):
    """(s(f), x, sensitive positions of x) with the first maximizing x in sorted order."""
    keys = f.keys
    lookup = dict(zip(keys.tolist(), f.outputs.tolist()))
    best = (0, f.domain[0], ())
    for x, key, v in zip(f.domain, keys.tolist(), f.outputs.tolist()):
        sens = tuple(i + 1 for i in range(f.n)
                     if lookup.get(key ^ (1 << (f.n - 1 - i)), v) != v)
        if len(sens) > best[0]:
            best = (len(sens), x, sens)
    return best


def sensitivity(f):
    return sensitivity_witness(f)[0]


def minimal_sensitive_blocks(f, x, cap=DEFAULT_BLOCK_CAP):
    """Inclusion-minimal sensitive blocks of ``x`` as bitmasks (bit 1 most significant).

    Only blocks B with ``x^B`` in the domain are sensitive, so candidates are
    ``x XOR y`` over domain points y with the other value.  A maximum disjoint
    (or fractional) packing can always use minimal blocks only.
    """
    if f.n > MAX_BLOCK_ARITY:
        raise ArityTooLarge(f"block enumeration is limited to n <= {MAX_BLOCK_ARITY}")
    r = int(np.searchsorted(f.keys, int(x, 2)))
    v = f.outputs[r]
    blocks = np.unique(f.keys[f.outputs != v] ^ f.keys[r])
    if len(blocks) > cap:
        raise TooManyBlocks(f"{len(blocks)} candidate blocks at {x} exceed cap {cap}")
    sizes = _popcount(blocks)
    kept = np.zeros(0, dtype=np.int64)
    for size in np.unique(sizes):
        layer = blocks[sizes == size]
        if len(kept):
            # a block is minimal iff no smaller sensitive block is a subset of it
            covered = ((layer[:, None] & kept[None, :]) == kept[None, :]).any(axis=1)
            layer = layer[~covered]
        kept = np.concatenate([kept, layer])
    return kept.tolist()


def _popcount(arr):
    arr = np.asarray(arr, dtype=np.int64)
    out = np.zeros_like(arr)
    while arr.any():
        out += arr & 1
        arr = arr >> 1
    return out


def _max_packing(blocks, bound):
    """Largest family of pairwise disjoint bitmasks (branch and bound).

    ``bound`` is an a-priori upper bound on the answer used to stop early.
    """
    blocks = sorted(blocks, key=lambda b: (bin(b).count("1"), b))
    best = []

    def grow(chosen, used, rest):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if len(best) >= bound:
            return True
        if len(chosen) + len(rest) <= len(best):
            return False
        for j, b in enumerate(rest):
            if len(chosen) + len(rest) - j <= len(best):
                break
            if b & used:
                continue
            remaining = [c for c in rest[j + 1:] if not c & (used | b)]
            chosen.append(b)
            done = grow(chosen, used | b, remaining)
            chosen.pop()
            if done:
                return True
        return False

    grow([], 0, blocks)
    return best


def block_sensitivity_witness(f, cap=DEFAULT_BLOCK_CAP):
    """(bs(f), x, blocks as tuples of 1-based positions).

    Inputs are scanned by decreasing C_x since bs_x <= C_x, and the scan stops
    once C_x cannot beat the best packing found.
    """
    return _bs_scan(f, cap, prefer=None)


def _bs_scan(f, cap, prefer):
    if f.is_constant:
        return 0, f.domain[0], ()
    cert = certificate_complexity(f)
    order = sorted(f.domain, key=lambda x: (-cert.sizes[x], prefer is not None and f(x) != prefer))
    best_val, best_x, best_blocks = 0, None, ()

    def preferred_over_best(x):
        return prefer is not None and f(best_x) != prefer and f(x) == prefer

    for x in order:
        cx = cert.sizes[x]
        if cx < best_val:
            break
        if best_x is not None and cx == best_val and not preferred_over_best(x):
            continue
        packing = _max_packing(minimal_sensitive_blocks(f, x, cap), cx)
        k = len(packing)
        if best_x is None or k > best_val or (k == best_val and preferred_over_best(x)):
            best_val, best_x = k, x
            best_blocks = tuple(_bits_to_positions(b, f.n) for b in packing)
    return best_val, best_x, best_blocks


def block_sensitivity(f, cap=DEFAULT_BLOCK_CAP):
    return block_sensitivity_witness(f, cap)[0]


def bs_witness_preferring(f, value, cap=DEFAULT_BLOCK_CAP):
    """Like :func:`block_sensitivity_witness` but, among maximizers, picks an
    input with ``f(x) == value`` whenever one exists."""
    return _bs_scan(f, cap, prefer=value)


def fbs_at(f, x, cap=DEFAULT_BLOCK_CAP):
    """(fbs_x(f), weights) from the exact LP over minimal sensitive blocks."""
    blocks = minimal_sensitive_blocks(f, x, cap)
    if not blocks:
        return Fraction(0), {}
    lp = ratlp.LinearProgram([1] * len(blocks), "max")
    for i in range(f.n):
        bit = 1 << (f.n - 1 - i)
        row = [1 if b & bit else 0 for b in blocks]
        if any(row):
            lp.add(row, "<=", 1)
    sol = ratlp.solve(lp)
    weights = {_bits_to_positions(b, f.n): w for b, w in zip(blocks, sol.x) if w}
    return sol.value, weights


def fractional_block_sensitivity_witness(f, cap=DEFAULT_BLOCK_CAP):
    """(fbs(f), x, block weights).  Uses fbs_x <= C_x to skip inputs."""
    if f.is_constant:
        return Fraction(0), f.domain[0], {}
    cert = certificate_complexity(f)
    best = (Fraction(-1), None, {})
    for x in sorted(f.domain, key=lambda x: -cert.sizes[x]):
        if cert.sizes[x] <= best[0]:
            break
        value, weights = fbs_at(f, x, cap)
        if value > best[0]:
            best = (value, x, weights)
    return best


def fractional_block_sensitivity(f, cap=DEFAULT_BLOCK_CAP):
    return fractional_block_sensitivity_witness(f, cap)[0]


def verify_blocks(f, x, blocks):
    """Blocks are pairwise disjoint and each flip of ``x`` lands in Dom with the other value."""
    seen = set()
    for block in blocks:
        if not block or seen & set(block):
            return False
        seen |= set(block)
        y = "".join(("1" if c == "0" else "0") if i + 1 in block else c
                    for i, c in enumerate(x))
        if y not in f or f(y) == f(x):
            return False
    return True

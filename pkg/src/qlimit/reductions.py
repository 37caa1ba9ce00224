"""Reductions between partial functions: witnesses, replay, search and the
constructive reductions (S∘f ≲ f, PrOR_bs∘S ≲ f, lifting through composition).

Every reduction ``f ≲ g`` corresponds to a *literal map* φ sending inputs of
f to inputs of g, where each coordinate of φ(x) is a constant or a bit x_i
(or its negation, for ≲′), with φ(Dom f) ⊆ Dom g and g(φ(x)) = f(x).  Each
elementary step is such a map, maps compose, and conversely every literal
map is realized by a short step sequence (:func:`witness_from_map`).  The
search in :func:`decide` enumerates literal maps, so its negative answers are
exact.

A coordinate is ``("c", b)`` for the constant b or ``("x", i, neg)`` for bit
i (0-based) of the source input, negated when ``neg`` is 1.
"""

import itertools
import json
from dataclasses import dataclass

from . import boolfn
from .boolfn import PartialFunction, catalog, compose, negate_output
from .errors import (EmptyPromise, QLimitError, StepInapplicable, SwitchabilityRequired)

WEAK = "weak"
STRONG = "strong"

# --- steps ------------------------------------------------------------------


@dataclass(frozen=True)
class IndexRename:
    perm: tuple  # perm[i-1] = π(i), 1-based

    def apply(self, f):
        return boolfn.rename_indices(f, self.perm)

    def coordinate_map(self, f):
        return [("x", p - 1, 0) for p in self.perm]

    def to_json(self):
        return {"op": "IndexRename", "perm": list(self.perm)}


@dataclass(frozen=True)
class AddSuperfluous:
    strings: tuple

    def apply(self, f):
        return boolfn.add_superfluous(f, self.strings)

    def coordinate_map(self, f):
        return [("x", i, 0) for i in range(f.n)]

    def to_json(self):
        return {"op": "AddSuperfluous", "strings": list(self.strings)}


@dataclass(frozen=True)
class RemoveSuperfluous:
    indices: tuple  # 1-based

    def apply(self, f):
        return boolfn.remove_superfluous(f, self.indices)

    def coordinate_map(self, f):
        drop = set(self.indices)
        fill = f.domain[0]
        out, k = [], 0
        for i in range(1, f.n + 1):
            if i in drop:
                out.append(("c", int(fill[i - 1])))
            else:
                out.append(("x", k, 0))
                k += 1
        return out

    def to_json(self):
        return {"op": "RemoveSuperfluous", "indices": list(self.indices)}


@dataclass(frozen=True)
class DuplicateBit:
    i: int

    def apply(self, f):
        return boolfn.duplicate_bit(f, self.i)

    def coordinate_map(self, f):
        return [("x", k, 0) for k in range(f.n)]

    def to_json(self):
        return {"op": "DuplicateBit", "i": self.i}


@dataclass(frozen=True)
class RemoveDuplicate:
    """Remove bit ``j``, a copy of bit ``i``."""

    i: int
    j: int

    def apply(self, f):
        return boolfn.remove_duplicate(f, self.i, self.j)

    def coordinate_map(self, f):
        def new(k):  # 1-based old index -> 0-based new index
            return k - 1 if k < self.j else k - 2
        return [("x", new(self.i) if k == self.j else new(k), 0) for k in range(1, f.n + 1)]

    def to_json(self):
        return {"op": "RemoveDuplicate", "i": self.i, "j": self.j}


@dataclass(frozen=True)
class RestrictPromise:
    promise: tuple

    def apply(self, f):
        return boolfn.restrict(f, self.promise)

    def coordinate_map(self, f):
        return [("x", i, 0) for i in range(f.n)]

    def to_json(self):
        return {"op": "RestrictPromise", "promise": list(self.promise)}


@dataclass(frozen=True)
class NegateBits:
    z: str

    def apply(self, f):
        return boolfn.negate_bits(f, self.z)

    def coordinate_map(self, f):
        return [("x", i, int(c)) for i, c in enumerate(self.z)]

    def to_json(self):
        return {"op": "NegateBits", "z": self.z}


_STEP_TYPES = {cls.__name__: cls for cls in (
    IndexRename, AddSuperfluous, RemoveSuperfluous, DuplicateBit, RemoveDuplicate,
    RestrictPromise, NegateBits)}


def step_from_json(doc):
    op = doc.get("op")
    if op == "IndexRename":
        return IndexRename(tuple(doc["perm"]))
    if op == "AddSuperfluous":
        return AddSuperfluous(tuple(doc["strings"]))
    if op == "RemoveSuperfluous":
        return RemoveSuperfluous(tuple(doc["indices"]))
    if op == "DuplicateBit":
        return DuplicateBit(int(doc["i"]))
    if op == "RemoveDuplicate":
        return RemoveDuplicate(int(doc["i"]), int(doc["j"]))
    if op == "RestrictPromise":
        return RestrictPromise(tuple(doc["promise"]))
    if op == "NegateBits":
        return NegateBits(doc["z"])
    raise ValueError(f"unknown step {op!r}")


# --- witnesses --------------------------------------------------------------


@dataclass
class ReductionWitness:
    """Replaying ``steps`` from ``source`` (g) yields ``target`` (f): f ≲ g."""

    source: PartialFunction
    steps: list
    target: PartialFunction
    mode: str = WEAK

    def to_json(self):
        return {"mode": self.mode, "source": boolfn.to_json(self.source),
                "steps": [s.to_json() for s in self.steps],
                "target": boolfn.to_json(self.target)}

    def dumps(self):
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        if doc.get("mode") not in (WEAK, STRONG):
            raise ValueError("mode must be 'weak' or 'strong'")
        return cls(boolfn.from_json(doc["source"]), [step_from_json(s) for s in doc["steps"]],
                   boolfn.from_json(doc["target"]), doc["mode"])


def replay(witness):
    """Apply every step; returns the final function or raises StepInapplicable."""
    h = witness.source
    for k, step in enumerate(witness.steps):
        if isinstance(step, NegateBits) and witness.mode == WEAK:
            raise StepInapplicable(k, "bit negation is not allowed in a weak witness")
        try:
            h = step.apply(h)
        except (QLimitError, ValueError, IndexError) as exc:
            raise StepInapplicable(k, str(exc)) from exc
    return h


def verify(witness):
    """True iff replay reproduces the target exactly."""
    return replay(witness) == witness.target


def concatenate(first, second):
    """From ``first: f ≲ g`` and ``second: g ≲ h`` build ``f ≲ h``."""
    if first.source != second.target:
        raise ValueError("witnesses do not chain")
    mode = STRONG if STRONG in (first.mode, second.mode) else WEAK
    return ReductionWitness(second.source, list(second.steps) + list(first.steps),
                            first.target, mode)


def witness_map(witness):
    """The literal map of a witness: one coordinate per source bit, over target bits."""
    h = witness.source
    coords = [("x", i, 0) for i in range(h.n)]
    for step in witness.steps:
        tau = step.coordinate_map(h)
        coords = [_substitute(c, tau) for c in coords]
        h = step.apply(h)
    return coords


def _substitute(coord, tau):
    if coord[0] == "c":
        return coord
    t = tau[coord[1]]
    if t[0] == "c":
        return ("c", t[1] ^ coord[2])
    return ("x", t[1], t[2] ^ coord[2])


def apply_map(coords, x):
    return "".join(str(c[1]) if c[0] == "c" else str(int(x[c[1]]) ^ c[2]) for c in coords)


def map_is_reduction(f, g, coords):
    for x, v in f.items():
        y = apply_map(coords, x)
        if g.get(y) != v:
            return False
    return True


# --- witness construction from a literal map --------------------------------


def witness_from_map(f, g, coords, mode=None):
    """A verified step sequence realizing the literal map ``coords`` (f ≲ g)."""
    if len(coords) != g.n or not map_is_reduction(f, g, coords):
        raise ValueError("the map does not reduce f to g")
    negated = any(c[0] == "x" and c[2] for c in coords)
    if mode is None:
        mode = STRONG if negated else WEAK
    if negated and mode == WEAK:
        raise ValueError("a weak witness cannot use negated literals")
    used = {c[1] for c in coords if c[0] == "x"}
    if used == set(range(f.n)):
        steps = _direct_route(f, g, coords)
    else:
        steps = _padded_route(f, g, coords)
    w = ReductionWitness(g, steps, f, mode)
    if not verify(w):
        raise AssertionError("constructed witness failed to replay")
    return w


def _negation_mask(coords, width):
    z = ["0"] * width
    for p, c in enumerate(coords):
        if c[0] == "x" and c[2]:
            z[p] = "1"
    return "".join(z)


def _direct_route(f, g, coords):
    steps = []
    image = sorted({apply_map(coords, x) for x in f.domain})
    if image != list(g.domain):
        steps.append(RestrictPromise(tuple(image)))
    z = _negation_mask(coords, g.n)
    if "1" in z:
        steps.append(NegateBits(z))
    labels = [("c", c[1]) if c[0] == "c" else ("x", c[1]) for c in coords]
    consts = tuple(p + 1 for p, lab in enumerate(labels) if lab[0] == "c")
    if consts:
        steps.append(RemoveSuperfluous(consts))
        labels = [lab for lab in labels if lab[0] == "x"]
    # drop repeated variables, rightmost first so earlier positions stay put
    for j in range(len(labels) - 1, -1, -1):
        first = labels.index(labels[j])
        if first < j:
            steps.append(RemoveDuplicate(first + 1, j + 1))
            del labels[j]
    perm = tuple(lab[1] + 1 for lab in labels)
    if perm != tuple(range(1, f.n + 1)):
        steps.append(IndexRename(perm))
    return steps


def _padded_route(f, g, coords):
    """Append f's own input as superfluous bits, tie g's bits to it, then drop g's bits."""
    steps = [AddSuperfluous(tuple(f.domain)),
             RestrictPromise(tuple(sorted(apply_map(coords, x) + x for x in f.domain)))]
    z = _negation_mask(coords, g.n)
    if "1" in z:
        steps.append(NegateBits(z + "0" * f.n))
    labels = [("g", c[1]) if c[0] == "x" else ("c",) for c in coords]
    labels += [("x", i) for i in range(f.n)]
    consts = tuple(p + 1 for p, lab in enumerate(labels) if lab[0] == "c")
    if consts:
        steps.append(RemoveSuperfluous(consts))
        labels = [lab for lab in labels if lab[0] != "c"]
    while labels[0][0] == "g":
        var = labels[0][1]
        steps.append(RemoveDuplicate(labels.index(("x", var)) + 1, 1))
        del labels[0]
    return steps


# --- search -----------------------------------------------------------------


@dataclass
class Decision:
    status: str  # "Reducible" | "NotReducible" | "Inconclusive"
    witness: ReductionWitness = None
    nodes: int = 0

    def __bool__(self):
        return self.status == "Reducible"


class _BudgetExhausted(Exception):
    pass


def find_map(f, g, mode=WEAK, budget=10 ** 6):
    """First literal map reducing f to g in a fixed search order, or None.

    Coordinates are tried as x_1..x_n, then (for ≲′) their negations, then
    the constants 0 and 1.  Partial maps are pruned unless every domain point's
    image prefix extends to a string of g with the right value.
    """
    xs = f.domain
    vals = [f(x) for x in xs]
    prefixes = {b: [set() for _ in range(g.n + 1)] for b in (0, 1)}
    for y, b in g.items():
        for L in range(g.n + 1):
            prefixes[b][L].add(y[:L])
    if any(not prefixes[v][0] for v in set(vals)):
        return None, 0
    choices = [("x", i, 0) for i in range(f.n)]
    if mode == STRONG:
        choices += [("x", i, 1) for i in range(f.n)]
    choices += [("c", 0), ("c", 1)]
    dead = set()
    nodes = 0

    def bit(ch, x):
        return str(ch[1]) if ch[0] == "c" else str(int(x[ch[1]]) ^ ch[2])

    def dfs(L, prefs, chosen):
        nonlocal nodes
        if L == g.n:
            return list(chosen)
        for ch in choices:
            nodes += 1
            if nodes > budget:
                raise _BudgetExhausted
            new = tuple(p + bit(ch, x) for p, x in zip(prefs, xs))
            if any(p not in prefixes[v][L + 1] for p, v in zip(new, vals)):
                continue
            if (L + 1, new) in dead:
                continue
            chosen.append(ch)
            found = dfs(L + 1, new, chosen)
            chosen.pop()
            if found is not None:
                return found
            dead.add((L + 1, new))
        return None

    try:
        result = dfs(0, tuple("" for _ in xs), [])
    except _BudgetExhausted:
        return _BudgetExhausted, nodes
    return result, nodes


def decide(f, g, mode=WEAK, budget=10 ** 6):
    """Decide f ≲ g (``weak``) or f ≲′ g (``strong``).

    Returns a :class:`Decision`; ``Inconclusive`` only when the node budget
    runs out.  ``NotReducible`` is exact because every reduction is a literal
    map and the search covers all of them.
    """
    coords, nodes = find_map(f, g, mode, budget)
    if coords is _BudgetExhausted:
        return Decision("Inconclusive", None, nodes)
    if coords is None:
        return Decision("NotReducible", None, nodes)
    return Decision("Reducible", witness_from_map(f, g, coords, mode), nodes)


@dataclass
class Switchability:
    status: str  # "StronglySwitchable" | "Switchable" | "No" | "Inconclusive"
    witness: ReductionWitness = None

    @property
    def switchable(self):
        return self.status in ("Switchable", "StronglySwitchable")


def is_switchable(f, budget=10 ** 6):
    """Is ¬f ≲ f (strongly switchable) or ¬f ≲′ f (switchable)?"""
    nf = negate_output(f)
    weak = decide(nf, f, WEAK, budget)
    if weak:
        return Switchability("StronglySwitchable", weak.witness)
    strong = decide(nf, f, STRONG, budget)
    if strong:
        return Switchability("Switchable", strong.witness)
    if "Inconclusive" in (weak.status, strong.status):
        return Switchability("Inconclusive")
    return Switchability("No")


# --- constructive reductions --------------------------------------------------


def switch_compose_witness(f, cap=None):
    """S∘f ≲ f: add a second copy of f's input as superfluous bits, then promise
    that the two halves have different values."""
    target = compose(catalog("S"), f, cap)
    promise = tuple(sorted(x + y for x in f.domain for y in f.domain if f(x) != f(y)))
    if not promise:
        raise EmptyPromise("S∘f is empty for constant f")
    steps = [AddSuperfluous(tuple(f.domain)), RestrictPromise(promise)]
    w = ReductionWitness(f, steps, target, WEAK)
    if not verify(w):
        raise AssertionError("switch composition witness failed to replay")
    return w


def pror_switch(k):
    return compose(catalog("PrOR", k), catalog("S"))


def bs_reduction_witness(f, blocks_witness=None):
    """Witness for PrOR_bs(f)∘S ≲ f following the block-flip construction.

    Restrict to x and its block flips, drop bits outside the blocks, collapse
    each block to one bit per x-value, pad single-bit blocks with a superfluous
    bit promised to be its negation, and arrange the pairs to read 01 on x.

    Among inputs attaining bs(f) a 0-input is used when one exists.  When only
    1-inputs attain it the same construction yields the negation of
    PrOR_bs∘S, and that is the target returned.
    """
    from .measures.sensitivity import bs_witness_preferring

    if blocks_witness is None:
        k, x, blocks = bs_witness_preferring(f, 0)
    else:
        k, x, blocks = blocks_witness
    if k == 0:
        raise ValueError("a constant function has bs = 0")
    flips = []
    for block in blocks:
        flips.append("".join(("1" if c == "0" else "0") if i + 1 in block else c
                             for i, c in enumerate(x)))
    steps = [RestrictPromise(tuple(sorted({x, *flips})))]
    h = steps[0].apply(f)
    # labels: (block index, x-value) for block bits, None for constant bits
    where = {}
    for j, block in enumerate(blocks):
        for i in block:
            where[i] = j
    labels = [(where[i + 1], int(x[i])) if i + 1 in where else None for i in range(f.n)]
    consts = tuple(p + 1 for p, lab in enumerate(labels) if lab is None)
    if consts:
        steps.append(RemoveSuperfluous(consts))
        h = steps[-1].apply(h)
        labels = [lab for lab in labels if lab is not None]
    for jpos in range(len(labels) - 1, -1, -1):
        first = labels.index(labels[jpos])
        if first < jpos:
            steps.append(RemoveDuplicate(first + 1, jpos + 1))
            h = steps[-1].apply(h)
            del labels[jpos]
    for j in range(len(blocks)):
        present = [lab for lab in labels if lab[0] == j]
        if len(present) == 1:
            pos = labels.index(present[0])
            steps.append(AddSuperfluous(("0", "1")))
            h = steps[-1].apply(h)
            keep = tuple(sorted(y for y in h.domain if y[-1] != y[pos]))
            steps.append(RestrictPromise(keep))
            h = steps[-1].apply(h)
            labels.append((j, 1 - present[0][1]))
    # pair j occupies target positions 2j+1 (the bit that is 0 on x) and 2j+2
    perm = tuple(2 * j + (1 if v == 0 else 2) for j, v in labels)
    if perm != tuple(range(1, len(perm) + 1)):
        steps.append(IndexRename(perm))
        h = steps[-1].apply(h)
    target = pror_switch(k)
    if f(x) == 1:
        target = negate_output(target)
    w = ReductionWitness(f, steps, target, WEAK)
    if not verify(w):
        raise AssertionError("block sensitivity witness failed to replay")
    return w


def _shift(coord, offset):
    return coord if coord[0] == "c" else ("x", coord[1] + offset, coord[2])


def lift_reduction(witness, other, side="inner", switch_witness=None, cap=None):
    """Lift a reduction through composition.

    ``side="inner"``: from ``g′ ≲ g`` and f = ``other`` build ``f∘g′ ≲ f∘g``.
    ``side="outer"``: from ``f′ ≲ f`` and g = ``other`` build ``f′∘g ≲ f∘g``;
    negated outer literals need ``switch_witness`` for ¬g ≲ g (or ≲′).

    The literal map of the given witness is applied blockwise and the
    composed map is turned back into steps, then verified.
    """
    phi = witness_map(witness)
    if side == "inner":
        f = other
        g2, g = witness.target, witness.source
        source, target = compose(f, g, cap), compose(f, g2, cap)
        coords = [_shift(c, b * g2.n) for b in range(f.n) for c in phi]
        return witness_from_map(target, source, coords, witness.mode)
    if side != "outer":
        raise ValueError("side must be 'inner' or 'outer'")
    g = other
    f2, f = witness.target, witness.source
    source, target = compose(f, g, cap), compose(f2, g, cap)
    sigma = None
    if any(c[0] == "x" and c[2] for c in phi):
        if switch_witness is None:
            raise SwitchabilityRequired("negated outer bits need a switch witness for g")
        if switch_witness.source != g or switch_witness.target != negate_output(g):
            raise ValueError("switch witness must reduce the negation of g to g")
        sigma = witness_map(switch_witness)
    coords = []
    for c in phi:
        if c[0] == "c":
            pre = g.preimage(c[1])
            if not pre:
                raise ValueError(f"g never takes the value {c[1]}")
            coords += [("c", int(b)) for b in pre[0]]
        elif c[2] == 0:
            coords += [("x", c[1] * g.n + t, 0) for t in range(g.n)]
        else:
            coords += [_shift(s, c[1] * g.n) for s in sigma]
    mode = STRONG if witness.mode == STRONG or any(c[0] == "x" and c[2] for c in coords) \
        else WEAK
    return witness_from_map(target, source, coords, mode)


# --- canonical forms ----------------------------------------------------------


def canonical_form(f, negations=True):
    """Lexicographically least table over index permutations (and bit negations)."""
    best = None
    masks = ["".join(m) for m in itertools.product("01", repeat=f.n)] if negations else ["0" * f.n]
    for perm in itertools.permutations(range(1, f.n + 1)):
        g = boolfn.rename_indices(f, perm)
        for z in masks:
            h = boolfn.negate_bits(g, z) if "1" in z else g
            key = tuple(sorted(h.items()))
            if best is None or key < best:
                best = key
    return (f.n, best)

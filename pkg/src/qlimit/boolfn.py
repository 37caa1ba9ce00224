"""Possibly partial Boolean functions, block composition and the
well-behaved transformations (renaming, superfluous bits, duplication,
bit negation, promise restriction).

Bit positions in the public API are 1-based: index 1 is the leftmost
character of an input string.
"""

import itertools
import json
import os
import re
from functools import cached_property

import numpy as np

from .errors import EmptyPromise, NotDroppable, ParseError, SizeCapExceeded, UnknownName

DEFAULT_CAP = 2 ** 26


def default_cap():
    """Materialization cap in candidate strings; ``QLIMIT_CAP`` overrides it."""
    env = os.environ.get("QLIMIT_CAP")
    return int(env) if env else DEFAULT_CAP


def _check_bits(s, alphabet="01"):
    return isinstance(s, str) and all(c in alphabet for c in s)


class PartialAssignment:
    """A string over ``{0,1,*}``; equated with its set of fixed (index, bit) pairs."""

    __slots__ = ("bits",)

    def __init__(self, bits):
        if not _check_bits(bits, "01*"):
            raise ValueError(f"not a partial assignment: {bits!r}")
        self.bits = bits

    @classmethod
    def from_positions(cls, n, fixed):
        """Build from a mapping ``{index (1-based): bit}``."""
        chars = ["*"] * n
        for i, b in fixed.items():
            chars[i - 1] = str(int(b))
        return cls("".join(chars))

    @classmethod
    def of(cls, x, positions):
        """The sub-assignment of the full string ``x`` on ``positions`` (1-based)."""
        keep = set(positions)
        return cls("".join(c if i + 1 in keep else "*" for i, c in enumerate(x)))

    @property
    def n(self):
        return len(self.bits)

    @property
    def size(self):
        return sum(c != "*" for c in self.bits)

    @property
    def fixed(self):
        return tuple(i + 1 for i, c in enumerate(self.bits) if c != "*")

    def items(self):
        return [(i + 1, int(c)) for i, c in enumerate(self.bits) if c != "*"]

    def consistent(self, other):
        other = other.bits if isinstance(other, PartialAssignment) else other
        return all(a == b or a == "*" or b == "*" for a, b in zip(self.bits, other))

    def contained_in(self, x):
        """``p ⊆ x``: every fixed position of ``p`` agrees with ``x``."""
        x = x.bits if isinstance(x, PartialAssignment) else x
        return len(x) == len(self.bits) and all(
            a == "*" or a == b for a, b in zip(self.bits, x))

    def __eq__(self, other):
        return isinstance(other, PartialAssignment) and self.bits == other.bits

    def __hash__(self):
        return hash(("pa", self.bits))

    def __repr__(self):
        return f"PartialAssignment({self.bits!r})"

    def __str__(self):
        return self.bits


class PartialFunction:
    """A Boolean function ``f: Dom(f) -> {0,1}`` with ``Dom(f) ⊆ {0,1}^n``.

    The domain is stored explicitly as a hash table, so sparse promises
    (such as ``S∘f`` or ``PrOR_n``) stay small.  Instances are immutable.
    """

    def __init__(self, n, table):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"arity must be a positive integer, got {n!r}")
        n = int(n)
        items = dict(table)
        if not items:
            raise EmptyPromise("a function must have a non-empty domain")
        clean = {}
        for x, v in items.items():
            if len(x) != n or not _check_bits(x):
                raise ValueError(f"domain string {x!r} is not an {n}-bit string")
            if v not in (0, 1):
                raise ValueError(f"value at {x!r} must be 0 or 1, got {v!r}")
            clean[x] = int(v)
        self._n = n
        self._table = clean

    @classmethod
    def from_callable(cls, n, fn, domain=None):
        if domain is None:
            domain = ("".join(bits) for bits in itertools.product("01", repeat=n))
        return cls(n, {x: int(fn(x)) for x in domain})

    @property
    def n(self):
        return self._n

    @property
    def table(self):
        return dict(self._table)

    def items(self):
        return self._table.items()

    @cached_property
    def domain(self):
        return tuple(sorted(self._table))

    def __call__(self, x):
        return self._table[x]

    def get(self, x, default=None):
        return self._table.get(x, default)

    def __contains__(self, x):
        return x in self._table

    def __len__(self):
        return len(self._table)

    def __iter__(self):
        return iter(self.domain)

    @property
    def is_total(self):
        return len(self._table) == 2 ** self._n

    @cached_property
    def range(self):
        return frozenset(self._table.values())

    @property
    def is_constant(self):
        return len(self.range) == 1

    @cached_property
    def _preimages(self):
        pre = {0: [], 1: []}
        for x in self.domain:
            pre[self._table[x]].append(x)
        return {b: tuple(xs) for b, xs in pre.items()}

    def preimage(self, b):
        return self._preimages[b]

    # numpy views, rows in sorted-domain order
    @cached_property
    def points(self):
        arr = np.frombuffer("".join(self.domain).encode(), dtype=np.uint8) - ord("0")
        arr = arr.reshape(len(self.domain), self._n)
        arr.setflags(write=False)
        return arr

    @cached_property
    def outputs(self):
        arr = np.fromiter((self._table[x] for x in self.domain), dtype=np.uint8,
                          count=len(self.domain))
        arr.setflags(write=False)
        return arr

    @cached_property
    def keys(self):
        """Domain strings as integers, bit 1 being the most significant."""
        weights = 1 << np.arange(self._n - 1, -1, -1, dtype=np.int64)
        return self.points.astype(np.int64) @ weights

    def __eq__(self, other):
        if not isinstance(other, PartialFunction):
            return NotImplemented
        return self._n == other._n and self._table == other._table

    @cached_property
    def _hash(self):
        return hash((self._n, frozenset(self._table.items())))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if len(self._table) <= 8:
            body = ", ".join(f"{x}:{v}" for x, v in sorted(self._table.items()))
            return f"PartialFunction(n={self._n}, {{{body}}})"
        return f"PartialFunction(n={self._n}, |Dom|={len(self._table)})"


# --- composition ------------------------------------------------------------

def compose(f, g, cap=None):
    """Block composition ``f∘g`` on ``n(f)·n(g)`` bits."""
    cap = default_cap() if cap is None else cap
    candidates = len(g) ** f.n
    if candidates > cap:
        raise SizeCapExceeded(
            f"composing would enumerate {len(g)}^{f.n} = {candidates} strings (cap {cap})")
    pre = (g.preimage(0), g.preimage(1))
    table = {}
    for y, v in f.items():
        for combo in itertools.product(*(pre[c == "1"] for c in y)):
            table["".join(combo)] = v
    if not table:
        raise EmptyPromise("composition has an empty domain")
    return PartialFunction(f.n * g.n, table)


def power(f, k, cap=None):
    """``f^k``; ``f^0`` is the 1-bit identity."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return identity()
    result = f
    for _ in range(k - 1):
        # associativity lets us pick whichever split enumerates fewer strings
        if len(result) ** f.n <= len(f) ** result.n:
            result = compose(f, result, cap)
        else:
            result = compose(result, f, cap)
    return result


# --- catalog ----------------------------------------------------------------

def identity():
    return PartialFunction(1, {"0": 0, "1": 1})


def switch():
    return PartialFunction(2, {"01": 0, "10": 1})


def _total(n, fn):
    return PartialFunction.from_callable(n, fn)


def _weight(x):
    return x.count("1")


_CATALOG = {
    "I": (lambda n: identity(), 1),
    "S": (lambda n: switch(), 2),
    "NAND": (lambda n: _total(n, lambda x: int("0" in x)), None),
    "MAJ": (lambda n: _total(n, lambda x: int(2 * _weight(x) > n)), None),
    "PROR": (lambda n: PartialFunction(n, {x: _weight(x) for x in (
        "0" * n, *("0" * i + "1" + "0" * (n - i - 1) for i in range(n)))}), None),
    "AND": (lambda n: _total(n, lambda x: int("0" not in x)), None),
    "OR": (lambda n: _total(n, lambda x: int("1" in x)), None),
    "PARITY": (lambda n: _total(n, lambda x: _weight(x) % 2), None),
    "CONST0": (lambda n: _total(n, lambda x: 0), None),
    "CONST1": (lambda n: _total(n, lambda x: 1), None),
}

_DEFAULT_SIZES = {"NAND": 2, "MAJ": 3}


def catalog(name, size=None):
    """Named functions: I, S, NAND2, MAJ3, PrOR_n, AND_n, OR_n, PARITY_n, CONST0_n, CONST1_n.

    The size may be given separately or as a numeric suffix (``"PrOR3"``).
    """
    m = re.fullmatch(r"(CONST[01]|[A-Z]+?)_?(\d*)", str(name).upper())
    if not m:
        raise UnknownName(name)
    base, suffix = m.group(1), m.group(2)
    if base not in _CATALOG:
        raise UnknownName(name)
    build, fixed = _CATALOG[base]
    if suffix and size is not None and int(suffix) != size:
        raise ValueError(f"conflicting sizes for {name!r}: {suffix} vs {size}")
    n = int(suffix) if suffix else size
    if fixed is not None:
        if n not in (None, fixed):
            raise ValueError(f"{base} has fixed arity {fixed}")
        n = fixed
    if n is None:
        n = _DEFAULT_SIZES.get(base)
    if n is None:
        raise ValueError(f"{base} needs a size")
    if n < 1:
        raise ValueError("size must be positive")
    return build(n)


# --- transformations --------------------------------------------------------

def negate_output(f):
    return PartialFunction(f.n, {x: 1 - v for x, v in f.items()})


def _xor(x, z):
    return "".join("1" if a != b else "0" for a, b in zip(x, z))


def negate_bits(f, z):
    """Alphabet renaming: ``f_z(x) = f(x ⊕ z)``."""
    if len(z) != f.n or not _check_bits(z):
        raise ValueError(f"mask must be an {f.n}-bit string")
    return PartialFunction(f.n, {_xor(x, z): v for x, v in f.items()})


def rename_indices(f, perm):
    """Index renaming ``f_π(x) = f(x_π)`` with ``(x_π)_i = x_{π(i)}``; ``perm[i-1] = π(i)``."""
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, f.n + 1)):
        raise ValueError(f"not a permutation of 1..{f.n}: {perm}")
    table = {}
    for y, v in f.items():
        x = [""] * f.n
        for i, p in enumerate(perm):
            x[p - 1] = y[i]
        table["".join(x)] = v
    return PartialFunction(f.n, table)


def restrict(f, promise):
    promise = set(promise)
    if not promise:
        raise EmptyPromise("restriction to an empty promise")
    missing = [x for x in promise if x not in f]
    if missing:
        raise ValueError(f"promise is not a subset of Dom(f): {sorted(missing)[:3]}")
    return PartialFunction(f.n, {x: f(x) for x in promise})


def add_superfluous(f, strings, cap=None):
    """Append superfluous bits ranging over ``strings`` (all of the same length)."""
    strings = sorted(set(strings))
    if not strings:
        raise EmptyPromise("superfluous bits need at least one assignment")
    m = len(strings[0])
    if m < 1 or any(len(s) != m or not _check_bits(s) for s in strings):
        raise ValueError("superfluous assignments must be equal-length bit strings")
    cap = default_cap() if cap is None else cap
    if len(f) * len(strings) > cap:
        raise SizeCapExceeded("superfluous-bit domain exceeds the cap")
    return PartialFunction(f.n + m, {x + s: v for x, v in f.items() for s in strings})


def duplicate_bit(f, i):
    """Append a copy of bit ``i``."""
    if not 1 <= i <= f.n:
        raise IndexError(i)
    return PartialFunction(f.n + 1, {x + x[i - 1]: v for x, v in f.items()})


def _project(x, keep):
    return "".join(x[i] for i in keep)


def is_superfluous(f, indices):
    """True when the bits in ``indices`` are superfluous: the value ignores them and
    the promise factors as (rest) × (fixed set of assignments to them)."""
    idx = sorted(set(indices))
    if not idx or any(not 1 <= i <= f.n for i in idx):
        return False
    if len(idx) == f.n:
        return False
    sel = [i - 1 for i in idx]
    rest = [i for i in range(f.n) if i not in set(sel)]
    groups = {}
    values = {}
    for x, v in f.items():
        r = _project(x, rest)
        groups.setdefault(r, set()).add(_project(x, sel))
        if values.setdefault(r, v) != v:
            return False
    shapes = {frozenset(s) for s in groups.values()}
    return len(shapes) == 1


def remove_superfluous(f, indices):
    if not is_superfluous(f, indices):
        raise NotDroppable(f"bits {sorted(set(indices))} are not superfluous")
    drop = {i - 1 for i in indices}
    keep = [i for i in range(f.n) if i not in drop]
    return PartialFunction(len(keep), {_project(x, keep): v for x, v in f.items()})


def are_duplicates(f, i, j):
    return i != j and all(x[i - 1] == x[j - 1] for x in f.domain)


def remove_duplicate(f, i, j):
    """Delete bit ``j``, which must equal bit ``i`` on the whole domain."""
    if not (1 <= i <= f.n and 1 <= j <= f.n) or not are_duplicates(f, i, j):
        raise NotDroppable(f"bit {j} is not a duplicate of bit {i}")
    keep = [k for k in range(f.n) if k != j - 1]
    return PartialFunction(f.n - 1, {_project(x, keep): v for x, v in f.items()})


def drop_bit(f, i):
    """Remove bit ``i`` if it is superfluous or duplicates another bit."""
    if not 1 <= i <= f.n:
        raise IndexError(i)
    if is_superfluous(f, [i]):
        return remove_superfluous(f, [i])
    for j in range(1, f.n + 1):
        if are_duplicates(f, j, i):
            return remove_duplicate(f, j, i)
    raise NotDroppable(f"bit {i} is neither superfluous nor a duplicate")


# --- serialization ----------------------------------------------------------

def to_json(f):
    return {"n": f.n, "entries": [[x, f(x)] for x in f.domain]}


def from_json(doc):
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    try:
        n = doc["n"]
        entries = doc["entries"]
    except (KeyError, TypeError):
        raise ParseError("expected an object with fields 'n' and 'entries'") from None
    table = {}
    for k, entry in enumerate(entries):
        try:
            bits, value = entry
        except (TypeError, ValueError):
            raise ParseError(f"entry {k} is not a [bits, value] pair") from None
        if bits in table:
            raise ParseError(f"duplicate bitstring {bits!r} in entry {k}")
        table[bits] = value
    try:
        return PartialFunction(n, table)
    except (ValueError, EmptyPromise) as exc:
        raise ParseError(str(exc)) from None


def to_text(f):
    lines = [f"n={f.n}"]
    lines += [f"{x} {f(x)}" for x in f.domain]
    return "\n".join(lines) + "\n"


def from_text(text):
    n = None
    table = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        line = line.strip()
        if n is None:
            m = re.fullmatch(r"n\s*=\s*(\d+)", line)
            if not m:
                raise ParseError("expected header 'n=<int>'", lineno, col)
            n = int(m.group(1))
            if n < 1:
                raise ParseError("arity must be positive", lineno, col + 2)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected '<bits> <value>'", lineno, col)
        bits, value = parts
        if len(bits) != n or not _check_bits(bits):
            bad = next((k for k, c in enumerate(bits) if c not in "01"), min(len(bits), n))
            raise ParseError(f"expected a string of {n} bits", lineno, col + bad)
        if value not in ("0", "1"):
            raise ParseError("value must be 0 or 1", lineno, col + len(bits) + 1)
        if bits in table:
            raise ParseError(f"duplicate bitstring {bits}", lineno, col)
        table[bits] = int(value)
    if n is None:
        raise ParseError("missing header 'n=<int>'", 1, 1)
    if not table:
        raise ParseError("no entries", None)
    return PartialFunction(n, table)


def dumps(f, fmt="json"):
    if fmt == "json":
        return json.dumps(to_json(f))
    if fmt == "text":
        return to_text(f)
    raise ValueError(f"unknown format {fmt!r}")


def loads(text):
    """Parse either format; JSON is recognised by a leading ``{``."""
    if text.lstrip().startswith("{"):
        return from_json(text)
    return from_text(text)


def load(path):
    with open(path) as fh:
        return loads(fh.read())

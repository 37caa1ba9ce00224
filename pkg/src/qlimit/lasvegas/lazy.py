"""Inputs to f^k that are generated top-down on demand.

A node is addressed by the tuple of child indices (0-based) on the path from
the root; the root is ``()`` and leaves have length k.  Internally a node is
the pair (depth, index) with index = the address read in base n.  Each
internal node with value v labels its children by a string of f^{-1}(v).
The label is a pure function of (seed, depth, index), derived with BLAKE2b,
so a node's label does not depend on which other nodes were looked at first.
"""

import hashlib
import itertools
import struct

from ..errors import UnattainableValue

INPUT_PRNG = "blake2b-64(seed; depth, index) mod |f^-1(v)|"


def _local_sensitivity(f, x):
    v = f(x)
    flips = (x[:i] + ("1" if x[i] == "0" else "0") + x[i + 1:] for i in range(f.n))
    return sum(1 for y in flips if f.get(y, v) != v)


class LazyComposedInput:
    """An input to ``f^k`` with root value ``b``, materialized on demand.

    ``generator="uniform"`` draws each node's label uniformly from f^{-1}(v);
    ``generator="adversarial"`` draws only among the most sensitive such
    strings (for NAND this forces the one-zero-child patterns).
    """

    def __init__(self, f, k, b, seed, generator="uniform"):
        if k < 1:
            raise ValueError("depth k must be at least 1")
        if b not in f.range:
            raise UnattainableValue(f"f never takes the value {b}")
        if generator not in ("uniform", "adversarial"):
            raise ValueError(f"unknown generator {generator!r}")
        self.f = f
        self.n = f.n
        self.k = k
        self.b = b
        self.seed = int(seed) & (2 ** 64 - 1)
        self.generator = generator
        self._key = struct.pack("<Q", self.seed)
        self._choices = {}
        for v in (0, 1):
            pre = list(f.preimage(v))
            if generator == "adversarial" and pre:
                best = max(_local_sensitivity(f, x) for x in pre)
                pre = [x for x in pre if _local_sensitivity(f, x) == best]
            self._choices[v] = tuple(tuple(int(c) for c in x) for x in pre)
        self._labels = {}
        self.queries = 0
        self.listener = None  # called as listener(address, bit) on every counted query

    # --- addressing ---------------------------------------------------------

    def index_of(self, address):
        idx = 0
        for a in address:
            idx = idx * self.n + a
        return idx

    def address_of(self, depth, idx):
        out = []
        for _ in range(depth):
            idx, r = divmod(idx, self.n)
            out.append(r)
        return tuple(reversed(out))

    # --- node values ----------------------------------------------------------

    def _label(self, depth, idx):
        lab = self._labels.get((depth, idx))
        if lab is None:
            v = self.b if depth == 0 else self._label(depth - 1, idx // self.n)[idx % self.n]
            choices = self._choices[v]
            if len(choices) == 1:
                lab = choices[0]
            else:
                digest = hashlib.blake2b(struct.pack("<BQ", depth, idx), key=self._key,
                                         digest_size=8).digest()
                lab = choices[int.from_bytes(digest, "little") % len(choices)]
            self._labels[(depth, idx)] = lab
        return lab

    def node_value(self, depth, idx):
        if depth == 0:
            return self.b
        return self._label(depth - 1, idx // self.n)[idx % self.n]

    def leaf(self, idx):
        """Counted read of leaf ``idx`` (depth k)."""
        bit = self._label(self.k - 1, idx // self.n)[idx % self.n]
        self.queries += 1
        if self.listener is not None:
            self.listener(self.address_of(self.k, idx), bit)
        return bit

    def value(self, address=()):
        """Value of the node at ``address`` (leaves give the input bit); not counted."""
        return self.node_value(len(address), self.index_of(address))

    def label(self, address):
        """Children-value string of an internal node."""
        if len(address) >= self.k:
            raise ValueError("leaves have no label")
        return "".join(map(str, self._label(len(address), self.index_of(address))))

    def peek(self, address):
        return self.value(tuple(address))

    def query(self, address):
        """Read a leaf; every call counts as one query."""
        address = tuple(address)
        if len(address) != self.k:
            raise ValueError(f"leaf addresses have length {self.k}")
        return self.leaf(self.index_of(address))

    @property
    def materialized(self):
        return {self.address_of(d, i): "".join(map(str, lab))
                for (d, i), lab in self._labels.items()}

    def consistent(self):
        """Every materialized label lies in Dom(f) and evaluates to its node's value."""
        for (d, i), lab in self._labels.items():
            s = "".join(map(str, lab))
            if s not in self.f or self.f(s) != self.node_value(d, i):
                return False
        return True

    def leaf_string(self):
        """The whole input as a string (forces full materialization; small k only)."""
        leaves = itertools.product(range(self.n), repeat=self.k)
        return "".join(str(self.value(a)) for a in leaves)


def sample_input(f, k, b, seed, generator="uniform"):
    return LazyComposedInput(f, k, b, seed, generator)

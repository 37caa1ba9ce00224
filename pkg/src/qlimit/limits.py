"""Composition limits M*(f) = lim M(f^k)^{1/k}: exact finite-k sequences,
rigorous root brackets and justified bounds."""

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2

from . import measures
from .boolfn import power
from .errors import SizeCapExceeded, UnsupportedMeasure

ROOT_DIGITS = 10  # brackets have width 10^-10, inside the advertised ±1e-9


@dataclass(frozen=True)
class RootBracket:
    """An interval [lo, hi] of rationals known to contain a real number."""

    lo: Fraction
    hi: Fraction

    @classmethod
    def exact(cls, q):
        q = Fraction(q)
        return cls(q, q)

    def __contains__(self, r):
        return self.lo <= r <= self.hi

    def __float__(self):
        return float((self.lo + self.hi) / 2)

    @property
    def width(self):
        return self.hi - self.lo

    def __str__(self):
        if self.lo == self.hi and self.lo.denominator == 1:
            return str(self.lo.numerator)
        scaled = self.lo * 10 ** ROOT_DIGITS
        whole = scaled.numerator // scaled.denominator
        sign = "-" if whole < 0 else ""
        digits = str(abs(whole)).rjust(ROOT_DIGITS + 1, "0")
        text = f"{sign}{digits[:-ROOT_DIGITS]}.{digits[-ROOT_DIGITS:]}"
        return text if self.lo == self.hi else f"{text}±1e-9"


def kth_root(value, k):
    """Bracket of value^{1/k} for a non-negative rational, width 10^-ROOT_DIGITS."""
    value = Fraction(value)
    if value < 0 or k < 1:
        raise ValueError("need value >= 0 and k >= 1")
    if k == 1:
        return RootBracket.exact(value)
    scale = 10 ** ROOT_DIGITS
    target = value.numerator * scale ** k // value.denominator
    a, exact = gmpy2.iroot(gmpy2.mpz(target), k)
    a = int(a)
    if exact and value.numerator * scale ** k % value.denominator == 0:
        return RootBracket.exact(Fraction(a, scale))
    return RootBracket(Fraction(a, scale), Fraction(a + 1, scale))


# --- composition-law registry -------------------------------------------------
# submultiplicative: M(f∘g) <= M(f) M(g) for all f, g
# floor:             M(f∘g) >= M(f) for non-constant g (strongly well-behaved M)
# total_exact:       M(f∘g) = M(f) M(g) for total f, g (known from prior work)

LAWS = {
    "D": {"submultiplicative": True, "floor": True, "total_exact": True},
    "C": {"submultiplicative": True, "floor": True, "total_exact": False},
    "s": {"submultiplicative": True, "floor": False, "total_exact": False},
    "fbs": {"submultiplicative": True, "floor": True, "total_exact": False},
    "deg": {"submultiplicative": True, "floor": True, "total_exact": True},
}


@dataclass
class SequenceEntry:
    k: int
    value: Fraction
    root: RootBracket


@dataclass
class LimitSequence:
    measure: str
    function_id: str
    entries: list = field(default_factory=list)

    def values(self):
        return [e.value for e in self.entries]

    def to_json(self):
        return {"measure": self.measure, "function": self.function_id, "entries": [
            {"k": e.k, "value": measures.rational_str(e.value), "root": str(e.root)}
            for e in self.entries]}


@dataclass
class LimitBounds:
    lower: RootBracket
    upper: RootBracket
    justification: list

    def to_json(self):
        return {"lower": str(self.lower), "upper": str(self.upper),
                "justification": list(self.justification)}


def sequence(measure, f, k_max, function_id=None, cap=None, partial=False):
    """M(f^k) for k = 1..k_max with k-th root brackets.

    Powers are built incrementally.  When a power exceeds the materialization
    cap, SizeCapExceeded is raised with ``largest_k`` set; with
    ``partial=True`` the entries computed so far are returned instead.
    """
    seq = LimitSequence(measure, function_id or repr(f))
    h = None
    for k in range(1, k_max + 1):
        try:
            h = f if k == 1 else power(f, k, cap)
        except SizeCapExceeded as exc:
            if partial:
                return seq
            raise SizeCapExceeded(f"f^{k} exceeds the cap ({exc}); largest k = {k - 1}",
                                  largest_k=k - 1) from exc
        value = measures.compute(measure, h)
        seq.entries.append(SequenceEntry(k, value, kth_root(value, k)))
    return seq


def sandwich(measure, f, k_max, seq=None, cap=None):
    """Bounds on M*(f) from the computed sequence and the measure's composition laws.

    Guarantees lower <= upper <= every computed root.
    """
    if measure not in LAWS:
        raise UnsupportedMeasure(f"no composition law registered for {measure}")
    laws = LAWS[measure]
    if seq is None:
        seq = sequence(measure, f, k_max, cap=cap)
    if f.is_constant:
        zero = RootBracket.exact(0)
        return LimitBounds(zero, zero, ["constant function: M(f^k) = 0 for all k"])
    notes = []
    best = min(seq.entries, key=lambda e: e.root.hi)
    upper = best.root
    notes.append(f"upper: M* = inf_k M(f^k)^(1/k) for submultiplicative M; min at k={best.k}")
    value1 = seq.entries[0].value
    if laws["total_exact"] and f.is_total:
        lower = RootBracket.exact(value1)
        notes.append("lower: M(f∘g) = M(f)M(g) for total functions, so M* = M(f)")
    elif laws["floor"]:
        lower = RootBracket.exact(1)
        notes.append("lower: floor law M(f∘g) >= M(f) gives M(f^k) >= 1, so M* >= 1")
    else:
        lower = RootBracket.exact(0)
        notes.append("lower: trivial bound M* >= 0")
    return LimitBounds(lower, upper, notes)


def doubling_monotone(seq):
    """M(f^{2k}) <= M(f^k)^2 at every k with both entries present."""
    vals = {e.k: e.value for e in seq.entries}
    return {k: vals[2 * k] <= vals[k] ** 2 for k in vals if 2 * k in vals}


def star_calculus_check(f, k_max, first="C", second="D", c=Fraction(2), cap=None):
    """Finite-k instances of the composition-limit arithmetic.

    * power table: M((f^j)^m) = M(f^{jm});
    * sums: max(M, N) <= M + N <= 2 max(M, N) along the sequence;
    * scaling: the k-th root of c·M(f^k) lies in c^{1/k} times the root of M(f^k);
    * doubling: M(f^{2k}) <= M(f^k)^2 for submultiplicative measures.
    """
    seqs = {m: sequence(m, f, k_max, cap=cap) for m in (first, second)}
    checks = {"power_table": [], "sum": [], "scaling": [], "doubling": []}
    for m, seq in seqs.items():
        vals = {e.k: e.value for e in seq.entries}
        for j in range(2, k_max + 1):
            base = power(f, j, cap)
            for mm in range(1, k_max // j + 1):
                nested = measures.compute(m, power(base, mm, cap))
                checks["power_table"].append(
                    {"measure": m, "j": j, "m": mm, "ok": nested == vals[j * mm]})
        for k, ok in doubling_monotone(seq).items():
            checks["doubling"].append({"measure": m, "k": k, "ok": ok})
    for e1, e2 in zip(seqs[first].entries, seqs[second].entries):
        top = max(e1.value, e2.value)
        checks["sum"].append({"k": e1.k, "ok": top <= e1.value + e2.value <= 2 * top})
    c = Fraction(c)
    for e in seqs[first].entries:
        scaled = kth_root(c * e.value, e.k)
        croot = kth_root(c, e.k)
        lo, hi = croot.lo * e.root.lo, croot.hi * e.root.hi
        checks["scaling"].append({"k": e.k, "ok": scaled.lo <= hi and lo <= scaled.hi})
    ok = all(item["ok"] for items in checks.values() for item in items)
    return {"ok": ok, "checks": checks,
            "sequences": {m: s.to_json() for m, s in seqs.items()}}


def to_csv(seq, bounds=None):
    """Plot-ready rows: k, value, root, lower, upper."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["k", "value", "root", "lower", "upper"])
    for e in seq.entries:
        w.writerow([e.k, measures.rational_str(e.value), str(e.root),
                    str(bounds.lower) if bounds else "", str(bounds.upper) if bounds else ""])
    return out.getvalue()


def to_json(seq, bounds=None):
    doc = {"sequence": seq.to_json()}
    if bounds is not None:
        doc["bounds"] = bounds.to_json()
    return json.dumps(doc, sort_keys=True)

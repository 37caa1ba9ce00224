"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test prints one line ``ACCEPTANCE <n> PASS|FAIL <summary>``.
"""

import itertools
import math
import random
import time
from fractions import Fraction as F

import pytest

from qlimit import lasvegas, limits, measures, reductions
from qlimit.boolfn import (PartialFunction, add_superfluous, catalog, compose, duplicate_bit,
                           negate_bits, negate_output, power, rename_indices, restrict)
from qlimit.errors import ArityTooLarge, EmptyPromise, SizeCapExceeded
from qlimit.ratlp import verify_duality

from conftest import corpus

NAND2, MAJ3, S = catalog("NAND2"), catalog("MAJ3"), catalog("S")


@pytest.fixture
def announce(capsys):
    def emit(number, ok, summary):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'} {summary}")
        assert ok, summary
    return emit


def test_01_nand_tree_constant(announce):
    start = time.perf_counter()
    table = lasvegas.exact_expected_cost("DirectionalNAND", NAND2, 30)
    ratio = table.ratio(30)
    elapsed = time.perf_counter() - start
    target = (1 + math.sqrt(33)) / 4
    ok = abs(float(ratio) - target) <= 1e-3 and elapsed < 1
    announce(1, ok, f"W1(30)/W1(29) = {float(ratio):.6f} vs (1+sqrt 33)/4 = {target:.6f}, "
                    f"{elapsed:.3f}s")


def test_02_decision_tree_multiplicativity(announce):
    values, times = [], []
    for k in range(1, 5):
        h = power(NAND2, k)
        start = time.perf_counter()
        values.append(measures.deterministic_complexity(h))
        times.append(time.perf_counter() - start)
    ok = values == [2 ** k for k in range(1, 5)] and times[-1] < 10
    announce(2, ok, f"D(NAND2^k) = {values}, k=4 in {times[-1]:.2f}s")


def test_03_certificate_growth(announce):
    c0, c1 = 2, 1
    expected = []
    for k in range(1, 5):
        if k > 1:
            c0, c1 = 2 * c1, c0
        expected.append(max(c0, c1))
    seq = limits.sequence("C", NAND2, 4)
    values = seq.values()
    doubling = limits.doubling_monotone(seq)
    roots_ok = all(seq.entries[2 * k - 1].root.lo <= seq.entries[k - 1].root.hi
                   for k in doubling)
    ok = values == expected == [2, 2, 4, 4] and all(doubling.values()) and roots_ok
    announce(3, ok, f"C(NAND2^k) = {[str(v) for v in values]}, recursion {expected}, doubling {doubling}")


def test_04_majority_naive_exponent(announce):
    table = lasvegas.exact_expected_cost("NaiveMAJ3", MAJ3, 25)
    ratio = table.ratio(25)
    ok = abs(ratio - F(8, 3)) <= F(1, 1000) and F(8, 3) > F(265, 100)
    announce(4, ok, f"W1(25)/W1(24) = {float(ratio):.6f} vs 8/3, above 2.650")


def test_05_las_vegas_zero_error(announce):
    trials = 10 ** 4
    start = time.perf_counter()
    lines, ok = [], True
    for f, ev in ((NAND2, lasvegas.DirectionalNAND()), (MAJ3, lasvegas.NaiveMAJ3())):
        rep = lasvegas.growth_report(f, ev, range(1, 7), trials, seed=2024)
        for row in rep.rows:
            ok &= row.verified == row.trials == trials and row.bot_rate <= F(1, 2)
        lines.append(f"{ev.name}: bot rates {[float(r.bot_rate) for r in rep.rows]}, "
                     f"verified {sum(r.verified for r in rep.rows)}/{6 * trials}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120
    announce(5, ok, "; ".join(lines) + f"; {elapsed:.1f}s")


def _all_small_functions():
    """Every non-constant function on <= 3 bits with a promise of size <= 8, one
    representative per canonical form (index permutations and bit negations)."""
    seen = {}
    for n in (1, 2, 3):
        strings = [format(i, f"0{n}b") for i in range(2 ** n)]
        for size in range(1, min(8, 2 ** n) + 1):
            for dom in itertools.combinations(strings, size):
                for values in itertools.product((0, 1), repeat=size):
                    if len(set(values)) < 2:
                        continue
                    f = PartialFunction(n, dict(zip(dom, values)))
                    key = reductions.canonical_form(f)
                    if key not in seen:
                        seen[key] = f
    return list(seen.values())


def test_06_bs_reduction_exhaustive(announce):
    start = time.perf_counter()
    fs = _all_small_functions()
    targets = {}
    names = ("D", "C", "fbs", "deg")
    verified_onto, negated_only, measure_fail = 0, [], []
    for f in fs:
        k = measures.block_sensitivity(f)
        if k not in targets:
            t = reductions.pror_switch(k)
            targets[k] = (t, {m: measures.compute(m, t) for m in names})
        target, tvals = targets[k]
        w = reductions.bs_reduction_witness(f)
        if reductions.verify(w) and w.target == target:
            verified_onto += 1
        else:
            negated_only.append(f)
        for m in names:
            if measures.compute(m, f) < tvals[m]:
                measure_fail.append((f, m))
    # for the failures, confirm that no reduction PrOR_bs∘S ≲' f exists at all
    no_reduction = sum(
        1 for f in negated_only
        if reductions.decide(targets[measures.block_sensitivity(f)][0], f,
                             reductions.STRONG).status == "NotReducible")
    elapsed = time.perf_counter() - start
    ok = not negated_only and not measure_fail and elapsed < 300
    announce(6, ok, f"{len(fs)} classes: {verified_onto} witnesses onto PrOR_bs∘S, "
                    f"{len(negated_only)} only onto its negation (bs attained only at "
                    f"1-inputs; {no_reduction} of them provably have no reduction), "
                    f"{len(measure_fail)} measure violations, {elapsed:.1f}s")


def _step(rng, f):
    kind = rng.choice(["rename", "superfluous", "duplicate", "negate", "restrict"])
    if kind == "rename":
        perm = list(range(1, f.n + 1))
        rng.shuffle(perm)
        return kind, rename_indices(f, perm)
    if kind == "superfluous":
        width = rng.randint(1, 2)
        pool = [format(i, f"0{width}b") for i in range(2 ** width)]
        return kind, add_superfluous(f, rng.sample(pool, rng.randint(1, len(pool))))
    if kind == "duplicate":
        return kind, duplicate_bit(f, rng.randint(1, f.n))
    if kind == "negate":
        return kind, negate_bits(f, "".join(rng.choice("01") for _ in range(f.n)))
    dom = list(f.domain)
    return kind, restrict(f, rng.sample(dom, rng.randint(1, len(dom))))


_MEASURE_CACHE = {}


def _strong_measures(f):
    # memoized on the function itself (equal tables only), never on a canonical form
    names = ["D", "C", "bs", "fbs", "deg", "s"]
    if f.n <= 4:
        names.append("adeg")
    if f.n <= 3:
        names += ["R0", "Rbar", "R"]
    out = {}
    for m in names:
        if (m, f) not in _MEASURE_CACHE:
            _MEASURE_CACHE[m, f] = measures.compute(m, f)
        out[m] = _MEASURE_CACHE[m, f]
    return out


def test_07_well_behavedness(announce):
    start = time.perf_counter()
    rng = random.Random(7)
    base = [f for f in corpus().values() if f.n <= 3]
    violations, steps = [], 0
    for chain in range(1000):
        f = rng.choice(base)
        vals = _strong_measures(f)
        for _ in range(rng.randint(1, 3)):
            if f.n >= 6:
                break
            kind, g = _step(rng, f)
            gvals = _strong_measures(g)
            for m in set(vals) & set(gvals):
                if m == "s" and kind == "duplicate":
                    continue
                bad = gvals[m] > vals[m] if kind == "restrict" else gvals[m] != vals[m]
                if bad:
                    violations.append((chain, kind, m))
            f, vals = g, gvals
            steps += 1
    elapsed = time.perf_counter() - start
    announce(7, not violations, f"1000 chains, {steps} steps, {len(violations)} violations "
                                f"{violations[:3]}, {elapsed:.1f}s")


def test_08_composition_laws(announce):
    fs = corpus()
    sub_names, floor_names = ("D", "C", "s", "fbs"), ("D", "C", "fbs", "deg")
    cache = {}

    def value(m, f):
        key = (m, f)
        if key not in cache:
            cache[key] = measures.compute(m, f)
        return cache[key]

    pairs = checked = skipped = 0
    failures = []
    for (a, f), (b, g) in itertools.product(fs.items(), repeat=2):
        if len(g) ** f.n > 2 ** 12:
            skipped += 1
            continue
        try:
            fg = compose(f, g)
        except (SizeCapExceeded, EmptyPromise):
            skipped += 1
            continue
        pairs += 1
        for m in sub_names:
            checked += 1
            if value(m, fg) > value(m, f) * value(m, g):
                failures.append(("sub", m, a, b))
        if not g.is_constant:
            for m in floor_names:
                try:
                    v = value(m, fg)
                except ArityTooLarge:
                    continue
                checked += 1
                if v < value(m, f):
                    failures.append(("floor", m, a, b))
    announce(8, not failures, f"{pairs} pairs, {checked} inequalities, {skipped} pairs skipped (cap or "
                              f"empty domain), failures {failures[:3]}")


def test_09_exact_randomized_lp(announce):
    nand = measures.randomized_complexity(NAND2, 0, "zero")
    switch = measures.randomized_complexity(S, 0, "expected")
    leaves = all(measures.leaves_are_certificates(f, measures.randomized_complexity(
        f, 0, "zero").algorithm) for f in corpus().values() if f.n <= 3)
    duals = verify_duality(nand.lp, nand.solution) and verify_duality(switch.lp,
                                                                      switch.solution)
    ok = nand.value == 2 and switch.value == 1 and leaves and duals
    announce(9, ok, f"R0(NAND2) = {nand.value}, R0bar(S) = {switch.value}, "
                    f"leaves are certificates: {leaves}, duals verify: {duals}")


def test_10_switchability(announce):
    results = {}
    for name in ("MAJ3", "PARITY2"):
        r = reductions.is_switchable(catalog(name))
        results[name] = (r.status, r.witness is not None and reductions.verify(r.witness))
    for name in ("I", "NAND2", "MAJ3"):
        f = compose(S, catalog(name))
        r = reductions.is_switchable(f)
        results[f"S∘{name}"] = (r.status, r.witness is not None and reductions.verify(r.witness)
                                and r.witness.target == negate_output(f))
    ok = all(v[1] for v in results.values()) and \
        results["MAJ3"][0] == results["PARITY2"][0] == "Switchable" and \
        all(results[f"S∘{n}"][0] == "StronglySwitchable" for n in ("I", "NAND2", "MAJ3"))
    announce(10, ok, ", ".join(f"{k}: {v[0]}" for k, v in results.items()))

import random
from fractions import Fraction as F

import pytest

from qlimit import measures
from qlimit.ratlp import verify_duality
from qlimit.boolfn import (PartialFunction, add_superfluous, catalog, compose, duplicate_bit,
                           negate_bits, power, rename_indices, restrict)
from qlimit.errors import ArityTooLarge, TooManyBlocks, UnknownName
from qlimit.measures import (approx_degree, block_sensitivity, block_sensitivity_witness,
                             certificate_complexity, degree, degree_witness,
                             deterministic_complexity, fractional_block_sensitivity,
                             leaves_are_certificates, min_certificate,
                             minimal_sensitive_blocks, optimal_tree, randomized_complexity,
                             represents, sensitivity, sensitivity_witness, verify_blocks,
                             verify_certificate, verify_tree)
from qlimit.measures.trees import Leaf, Query, RandomizedAlgorithm, tree_from_json

import oracles
from conftest import corpus

SMALL = {k: v for k, v in corpus().items() if v.n <= 4}


def random_partial(rng, n):
    strings = [format(i, f"0{n}b") for i in range(2 ** n)]
    dom = rng.sample(strings, rng.randint(1, len(strings)))
    return PartialFunction(n, {x: rng.randint(0, 1) for x in dom})


RANDOM = [random_partial(random.Random(s), 1 + s % 4) for s in range(40)]


class TestDecisionTree:
    def test_examples(self):
        assert deterministic_complexity(catalog("I")) == 1
        assert deterministic_complexity(power(catalog("NAND2"), 2)) == 4
        assert deterministic_complexity(catalog("PrOR3")) == 3

    @pytest.mark.parametrize("f", list(SMALL.values()) + RANDOM)
    def test_against_minimax_oracle(self, f):
        assert deterministic_complexity(f) == oracles.d_oracle(f)
        assert deterministic_complexity(f, use_degree_bound=False) == oracles.d_oracle(f)

    @pytest.mark.parametrize("f", list(SMALL.values()) + RANDOM[:10])
    def test_tree_witness(self, f):
        tree = optimal_tree(f)
        assert verify_tree(f, tree)
        assert tree.height == deterministic_complexity(f)

    def test_tree_json_round_trip(self):
        tree = optimal_tree(catalog("MAJ3"))
        assert tree_from_json(tree.to_json()) == tree

    def test_malformed_tree_rejected(self):
        repeat = Query(1, Leaf(0), Query(1, Leaf(0), Leaf(1)))
        assert not verify_tree(catalog("I"), repeat)
        assert not verify_tree(catalog("I"), Leaf(0))


class TestCertificates:
    def test_switch(self):
        rep = certificate_complexity(catalog("S"))
        assert rep.C == 1
        assert rep.witnesses["01"].bits == "0*" and rep.witnesses["10"].bits == "1*"

    def test_nand(self):
        rep = certificate_complexity(catalog("NAND2"))
        assert (rep.C, rep.C0, rep.C1) == (2, 2, 1)
        assert rep.sizes["11"] == 2

    def test_pror3(self):
        rep = certificate_complexity(catalog("PrOR3"))
        assert rep.C == 3 and rep.sizes["000"] == 3

    @pytest.mark.parametrize("f", list(SMALL.values()) + RANDOM)
    def test_against_subset_oracle(self, f):
        rep = certificate_complexity(f)
        for x in f.domain:
            assert rep.sizes[x] == oracles.cx_oracle(f, x)
            assert verify_certificate(f, x, rep.witnesses[x])
            assert rep.witnesses[x] == min_certificate(f, x)

    def test_lexicographic_tie_break(self):
        # on 111 of MAJ3 the 2-subsets {1,2},{1,3},{2,3} all certify; {1,2} wins
        assert min_certificate(catalog("MAJ3"), "111").bits == "11*"

    def test_verify_certificate_examples(self):
        nand = catalog("NAND2")
        assert verify_certificate(nand, "11", "11")
        assert not verify_certificate(nand, "01", "*1")
        for f in SMALL.values():
            for x in f.domain:
                assert verify_certificate(f, x, x)


class TestSensitivity:
    def test_majority(self):
        value, x, bits = sensitivity_witness(catalog("MAJ3"))
        assert value == 2
        assert sensitivity_witness(catalog("MAJ3")) == (2, "001", (1, 2))
        assert block_sensitivity(catalog("MAJ3")) == 2

    def test_pror(self):
        assert fractional_block_sensitivity(catalog("PrOR3")) == 3
        assert block_sensitivity(catalog("PrOR3")) == 3

    @pytest.mark.parametrize("f", list(SMALL.values()) + RANDOM)
    def test_against_oracles(self, f):
        assert sensitivity(f) == oracles.s_oracle(f)
        assert block_sensitivity(f) == oracles.bs_oracle(f)
        assert fractional_block_sensitivity(f) == oracles.fbs_oracle(f)

    @pytest.mark.parametrize("f", list(SMALL.values()) + RANDOM[:10])
    def test_bs_witness(self, f):
        value, x, blocks = block_sensitivity_witness(f)
        assert len(blocks) == value and verify_blocks(f, x, blocks)

    def test_minimal_blocks(self):
        # PARITY3 at 000: every odd subset is sensitive, minimal ones are singletons
        assert sorted(minimal_sensitive_blocks(catalog("PARITY3"), "000")) == [1, 2, 4]

    def test_block_cap(self):
        with pytest.raises(TooManyBlocks):
            minimal_sensitive_blocks(catalog("PARITY3"), "000", cap=2)

    def test_fractional_beats_integral(self):
        # a function with bs < fbs: sensitive blocks {1,2},{2,3},{1,3} at 000
        f = PartialFunction(3, {"000": 0, "110": 1, "011": 1, "101": 1})
        assert block_sensitivity(f) == 1
        assert fractional_block_sensitivity(f) == F(3, 2)


class TestDegree:
    def test_examples(self):
        assert degree(catalog("S")) == 1
        assert degree(catalog("PARITY2")) == 2
        assert approx_degree(catalog("CONST0_1")) == 0

    def test_parity_witness(self):
        d, poly = degree_witness(catalog("PARITY2"))
        assert d == 2 and represents(catalog("PARITY2"), poly)
        assert {m: c for m, c in poly.items() if c} == {(1,): 1, (2,): 1, (1, 2): -2}

    @pytest.mark.parametrize("f", list(SMALL.values()) + RANDOM)
    def test_against_oracles(self, f):
        assert degree(f) == oracles.deg_oracle(f)
        if f.is_total:
            assert degree(f) == oracles.mobius_degree(f)

    @pytest.mark.parametrize("name", ["S", "NAND2", "PrOR2", "PrOR3", "MAJ3", "PARITY2"])
    def test_approx_degree_values(self, name):
        # frozen values under the [0,1]-on-the-cube convention
        expected = {"S": 1, "NAND2": 1, "PrOR2": 1, "PrOR3": 2, "MAJ3": 1, "PARITY2": 2}
        assert approx_degree(catalog(name)) == expected[name]

    def test_approx_degree_certificate(self):
        d, poly = measures.approx_degree_witness(catalog("NAND2"))
        from qlimit.measures.polynomial import evaluate
        for x in ("00", "01", "10", "11"):
            v = evaluate(poly, x)
            assert 0 <= v <= 1 and abs(v - catalog("NAND2")(x)) <= F(1, 3)

    def test_arity_limit(self):
        # partial functions go through the LP and are limited to 10 bits
        with pytest.raises(ArityTooLarge):
            degree(catalog("PrOR", 11))
        with pytest.raises(ArityTooLarge):
            approx_degree(catalog("PrOR", 11))

    def test_total_fast_path(self):
        assert degree(catalog("PARITY", 12)) == 12


class TestRandomized:
    def test_examples(self):
        assert randomized_complexity(catalog("NAND2"), 0, "zero").value == 2
        assert randomized_complexity(catalog("S"), 0, "expected").value == 1

    def test_pror2_height(self):
        # with error <= 1/3 allowed, the uniform mix of the three 1-query/0-query
        # trees errs with probability exactly 1/3 on every input
        res = randomized_complexity(catalog("PrOR2"), F(1, 3), "height")
        assert res.value == 1
        assert res.algorithm.max_error(catalog("PrOR2")) <= F(1, 3)
        assert randomized_complexity(catalog("PrOR2"), F(1, 4), "height").value == 2

    @pytest.mark.parametrize("name,r0,rbar,r", [
        ("NAND2", 2, F(2, 3), 1), ("S", 1, F(1, 3), 1), ("PrOR2", 2, F(2, 3), 1),
        ("PrOR3", 3, 1, 2), ("MAJ3", F(8, 3), F(8, 9), 1), ("AND3", 3, 1, 2)])
    def test_frozen_values(self, name, r0, rbar, r):
        f = catalog(name)
        for flavor, eps, value in (("zero", 0, r0), ("expected", F(1, 3), rbar),
                                   ("height", F(1, 3), r)):
            res = randomized_complexity(f, eps, flavor)
            assert res.value == value
            assert verify_duality(res.lp, res.solution)
            alg = res.algorithm
            assert alg.max_error(f) <= eps
            if flavor == "height":
                assert alg.height == value
            else:
                assert alg.max_cost(f) == value

    @pytest.mark.parametrize("f", [v for v in SMALL.values() if v.n <= 3])
    def test_zero_error_leaves_are_certificates(self, f):
        res = randomized_complexity(f, 0, "zero")
        assert leaves_are_certificates(f, res.algorithm)

    @pytest.mark.parametrize("f", [v for v in SMALL.values() if v.n <= 3] +
                             [r for r in RANDOM if r.n <= 3][:12])
    def test_ordering(self, f):
        r0 = randomized_complexity(f, 0, "zero").value
        rbar = randomized_complexity(f, F(1, 3), "expected").value
        assert rbar <= r0 <= deterministic_complexity(f)
        assert certificate_complexity(f).C <= r0 if not f.is_constant else r0 == 0

    def test_arity_limit(self):
        with pytest.raises(ArityTooLarge):
            randomized_complexity(catalog("PARITY4"))

    def test_mixture_validation(self):
        with pytest.raises(ValueError):
            RandomizedAlgorithm([(Leaf(0), F(1, 2))])


class TestRegistry:
    def test_constants_are_zero(self):
        f = catalog("CONST1_3")
        for name in measures.MEASURES:
            assert measures.compute(name, f) == 0, name

    @pytest.mark.parametrize("f", list(SMALL.values()))
    def test_ordering_chain(self, f):
        v = {m: measures.compute(m, f) for m in ("s", "bs", "fbs", "C", "D")}
        assert v["s"] <= v["bs"] <= v["fbs"] <= v["C"] <= v["D"]

    def test_report_json(self):
        rep = measures.report("C", catalog("NAND2"))
        doc = rep.to_json()
        assert doc["value"] == "2/1" and doc["witness"] == {"input": "11", "certificate": "11"}
        for name in ("D", "s", "bs", "fbs", "deg", "adeg", "R0", "Rbar", "R", "C0", "C1"):
            assert measures.report(name, catalog("MAJ3")).value == measures.compute(
                name, catalog("MAJ3"))

    def test_unknown(self):
        with pytest.raises(UnknownName):
            measures.compute("Q", catalog("I"))


TRANSFORMS = ["rename", "superfluous", "duplicate", "negate", "restrict"]


def random_transform(rng, f):
    kind = rng.choice(TRANSFORMS)
    if kind == "rename":
        perm = list(range(1, f.n + 1))
        rng.shuffle(perm)
        return kind, rename_indices(f, perm)
    if kind == "superfluous":
        return kind, add_superfluous(f, rng.sample(["0", "1"], rng.randint(1, 2)))
    if kind == "duplicate":
        return kind, duplicate_bit(f, rng.randint(1, f.n))
    if kind == "negate":
        return kind, negate_bits(f, "".join(rng.choice("01") for _ in range(f.n)))
    dom = list(f.domain)
    return kind, restrict(f, rng.sample(dom, rng.randint(1, len(dom))))


class TestWellBehaved:
    @pytest.mark.parametrize("seed", range(30))
    def test_single_steps(self, seed):
        rng = random.Random(seed)
        f = rng.choice([v for v in SMALL.values() if v.n <= 3])
        kind, g = random_transform(rng, f)
        for m in ("D", "C", "fbs", "deg", "s", "bs"):
            if m == "s" and kind == "duplicate":
                continue
            a, b = measures.compute(m, f), measures.compute(m, g)
            assert (b <= a) if kind == "restrict" else (a == b), (m, kind)

    def test_sensitivity_fails_duplication(self):
        # duplicating every bit of PrOR2's 00 input kills single-bit sensitivity
        f = catalog("PrOR2")
        g = duplicate_bit(duplicate_bit(f, 1), 2)
        assert sensitivity(f) == 2 and sensitivity(g) < 2

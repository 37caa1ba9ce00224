import itertools
import json
import random

import pytest

from qlimit import measures
from qlimit.boolfn import PartialFunction, catalog, compose, negate_output, rename_indices
from qlimit.errors import StepInapplicable, SwitchabilityRequired
from qlimit.reductions import (STRONG, WEAK, AddSuperfluous, DuplicateBit, IndexRename,
                               NegateBits, ReductionWitness, RemoveDuplicate, RemoveSuperfluous,
                               RestrictPromise, apply_map, bs_reduction_witness, canonical_form,
                               concatenate, decide, is_switchable, lift_reduction,
                               pror_switch, replay, switch_compose_witness, verify,
                               witness_map)

from conftest import corpus

I, S, NAND2, MAJ3 = catalog("I"), catalog("S"), catalog("NAND2"), catalog("MAJ3")


def literal_map_oracle(f, g, negations):
    """Exhaustive search over every literal map {0,1}^n(f) -> {0,1}^n(g)."""
    lits = [("c", 0), ("c", 1)] + [("x", i, 0) for i in range(f.n)]
    if negations:
        lits += [("x", i, 1) for i in range(f.n)]
    for coords in itertools.product(lits, repeat=g.n):
        if all(g.get(apply_map(coords, x)) == v for x, v in f.items()):
            return True
    return False


def tiny_functions(rng, count):
    out = []
    for _ in range(count):
        n = rng.randint(1, 2)
        strings = [format(i, f"0{n}b") for i in range(2 ** n)]
        dom = rng.sample(strings, rng.randint(1, len(strings)))
        out.append(PartialFunction(n, {x: rng.randint(0, 1) for x in dom}))
    return out


class TestVerify:
    def test_identity_into_pror3(self):
        w = ReductionWitness(catalog("PrOR3"), [RestrictPromise(("000", "100")),
                                                 RemoveSuperfluous((2, 3))], I, WEAK)
        assert verify(w)

    def test_identity_into_switch_with_negation(self):
        w = ReductionWitness(S, [NegateBits("01"), RemoveDuplicate(1, 2)], I, STRONG)
        assert verify(w)

    def test_reflexivity(self):
        for f in corpus().values():
            assert verify(ReductionWitness(f, [], f, WEAK))

    def test_negation_illegal_in_weak_mode(self):
        w = ReductionWitness(S, [NegateBits("01"), RemoveDuplicate(1, 2)], I, WEAK)
        with pytest.raises(StepInapplicable) as info:
            verify(w)
        assert info.value.index == 0

    def test_bad_step_reports_index(self):
        w = ReductionWitness(NAND2, [DuplicateBit(1), RemoveDuplicate(1, 2)], NAND2, WEAK)
        with pytest.raises(StepInapplicable) as info:
            replay(w)
        assert info.value.index == 1

    def test_wrong_target(self):
        w = ReductionWitness(NAND2, [IndexRename((2, 1))], catalog("AND2"), WEAK)
        assert not verify(w)

    def test_json_round_trip(self):
        w = ReductionWitness(MAJ3, [AddSuperfluous(("0", "1")), DuplicateBit(2),
                                    RestrictPromise(tuple(sorted(
                                        x for x in compose(I, MAJ3).domain))),
                                    IndexRename((3, 2, 1, 4, 5)), NegateBits("00001")],
                             I, STRONG)
        doc = json.loads(w.dumps())
        assert doc["mode"] == "strong" and doc["steps"][0] == {"op": "AddSuperfluous",
                                                               "strings": ["0", "1"]}
        back = ReductionWitness.from_json(doc)
        assert back.steps == w.steps and back.source == w.source


class TestDecide:
    def test_switch_of_nand(self):
        d = decide(compose(S, NAND2), NAND2, WEAK)
        assert d.status == "Reducible" and verify(d.witness)

    def test_identity_into_pror4(self):
        d = decide(I, catalog("PrOR4"), WEAK)
        assert d.status == "Reducible" and verify(d.witness)

    def test_nonconstant_into_constant(self):
        assert decide(catalog("PARITY2"), catalog("CONST0_2"), WEAK).status == "NotReducible"

    def test_budget(self):
        assert decide(MAJ3, catalog("PARITY3"), WEAK, budget=3).status == "Inconclusive"

    @pytest.mark.parametrize("seed", range(8))
    def test_against_literal_map_oracle(self, seed):
        rng = random.Random(seed)
        fs = tiny_functions(rng, 4) + [I, S, catalog("PrOR2"), catalog("PARITY2")]
        targets = fs + [catalog("PrOR3"), MAJ3]
        for f in fs:
            for g in targets:
                for mode in (WEAK, STRONG):
                    d = decide(f, g, mode)
                    assert bool(d) == literal_map_oracle(f, g, mode == STRONG)
                    if d:
                        assert verify(d.witness)
                        assert d.witness.mode == WEAK or mode == STRONG

    def test_witness_monotone_measures(self):
        fs = corpus()
        pairs = [(a, b) for a in fs.values() for b in fs.values() if a.n <= 3 and b.n <= 4]
        names = ("D", "C", "fbs", "deg", "bs")
        for f, g in pairs:
            d = decide(f, g, STRONG)
            if d:
                for m in names:
                    assert measures.compute(m, f) <= measures.compute(m, g), (f, g, m)
                if not any(isinstance(s, (DuplicateBit, RemoveDuplicate))
                           for s in d.witness.steps):
                    assert measures.compute("s", f) <= measures.compute("s", g)

    def test_transitivity(self):
        a = decide(I, S, STRONG).witness
        b = decide(S, compose(S, NAND2), WEAK)
        assert b
        w = concatenate(a, b.witness)
        assert verify(w) and w.source == compose(S, NAND2) and w.target == I

    def test_witness_map_round_trip(self):
        w = decide(I, catalog("PrOR3")).witness
        coords = witness_map(w)
        assert [apply_map(coords, x) for x in I.domain] == ["000", "100"]


class TestSwitchability:
    def test_majority(self):
        r = is_switchable(MAJ3)
        assert r.status == "Switchable" and verify(r.witness)
        assert r.witness.steps == [NegateBits("111")]

    def test_parity(self):
        r = is_switchable(catalog("PARITY2"))
        assert r.status == "Switchable" and verify(r.witness)
        assert r.witness.steps[0] == NegateBits("01")

    @pytest.mark.parametrize("name", ["I", "NAND2", "MAJ3"])
    def test_switch_composition_strongly(self, name):
        r = is_switchable(compose(S, catalog(name)))
        assert r.status == "StronglySwitchable" and verify(r.witness)

    @pytest.mark.parametrize("name", ["AND2", "OR3", "NAND2", "PrOR2"])
    def test_not_switchable(self, name):
        assert is_switchable(catalog(name)).status == "No"

    def test_negated_reduction(self):
        for f in corpus().values():
            if f.n <= 4:
                assert is_switchable(f).switchable == is_switchable(negate_output(f)).switchable


class TestConstructive:
    @pytest.mark.parametrize("name", ["NAND2", "I", "MAJ3", "PrOR3"])
    def test_switch_compose(self, name):
        f = catalog(name)
        w = switch_compose_witness(f)
        assert verify(w) and w.target == compose(S, f)
        assert isinstance(w.steps[0], AddSuperfluous) and w.steps[0].strings == f.domain
        assert isinstance(w.steps[1], RestrictPromise)

    def test_switch_compose_identity_is_switch(self):
        assert switch_compose_witness(I).target == S
        assert switch_compose_witness(MAJ3).target.n == 6

    @pytest.mark.parametrize("name,k", [("MAJ3", 2), ("PrOR3", 3), ("I", 1), ("NAND2", 2),
                                        ("PARITY3", 3), ("S", 1)])
    def test_bs_reduction(self, name, k):
        f = catalog(name)
        w = bs_reduction_witness(f)
        assert verify(w) and w.target == pror_switch(k)
        assert w.mode == WEAK

    def test_bs_reduction_one_inputs_only(self):
        # bs(AND2) = 2 is attained only at 11, and PrOR2∘S ≲ AND2 fails: every
        # coordinate would have to be the constant 1.  The construction then
        # reaches the negated target.
        w = bs_reduction_witness(catalog("AND2"))
        assert verify(w) and w.target == negate_output(pror_switch(2))
        assert not decide(pror_switch(2), catalog("AND2"), STRONG)

    def test_pror1_switch_is_switch(self):
        assert pror_switch(1) == rename_indices(S, (1, 2))


class TestLift:
    def test_inner(self):
        w = decide(I, catalog("PrOR2")).witness
        lifted = lift_reduction(w, NAND2, "inner")
        assert verify(lifted)
        assert lifted.source == compose(NAND2, catalog("PrOR2"))
        assert lifted.target == compose(NAND2, I)

    def test_outer(self):
        w = decide(I, catalog("PrOR2")).witness
        lifted = lift_reduction(w, S, "outer")
        assert verify(lifted) and lifted.target == S
        assert lifted.source == pror_switch(2)

    def test_identity(self):
        w = ReductionWitness(NAND2, [], NAND2, WEAK)
        for side in ("inner", "outer"):
            lifted = lift_reduction(w, S, side)
            assert verify(lifted) and lifted.source == lifted.target

    def test_outer_negation_needs_switch(self):
        w = ReductionWitness(S, [NegateBits("01"), RemoveDuplicate(1, 2)], I, STRONG)
        with pytest.raises(SwitchabilityRequired):
            lift_reduction(w, NAND2, "outer")
        sw = is_switchable(MAJ3).witness
        lifted = lift_reduction(w, MAJ3, "outer", switch_witness=sw)
        assert verify(lifted) and lifted.target == MAJ3

    def test_inner_strong(self):
        w = ReductionWitness(S, [NegateBits("01"), RemoveDuplicate(1, 2)], I, STRONG)
        lifted = lift_reduction(w, catalog("PrOR2"), "inner")
        assert verify(lifted) and lifted.mode == STRONG


class TestCompositionFloor:
    def test_switch_floors(self):
        names = ["NAND2", "PrOR2", "PARITY2", "I", "S"]
        for a in names:
            for b in names:
                f, g = catalog(a), catalog(b)
                fg = compose(f, g)
                for m in ("D", "C", "fbs", "deg"):
                    v = measures.compute(m, fg)
                    assert v >= measures.compute(m, compose(f, S))
                    assert v >= measures.compute(m, compose(S, g))


class TestCanonicalForm:
    def test_invariant_under_rename_and_negation(self):
        f = catalog("PrOR3")
        g = rename_indices(f, (3, 1, 2))
        assert canonical_form(f) == canonical_form(g)
        from qlimit.boolfn import negate_bits
        assert canonical_form(f) == canonical_form(negate_bits(f, "101"))
        assert canonical_form(f, negations=False) != canonical_form(negate_bits(f, "101"),
                                                                    negations=False)

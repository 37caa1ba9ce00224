"""Reductions between partial functions, and where block sensitivity comes from.

A reduction f <~ g turns any algorithm for g into one for f at no extra cost.
The script searches for a few, replays the witnesses, and then shows the
block-sensitivity construction: restricting f to a sensitive input x and
its flipped blocks gives a copy of PrOR_bs composed with the switch S.  When
x can only be a 1-input, the construction lands on the negation instead.
"""

from qlimit import catalog, compose, measures, reductions

for a, b, mode in [(("I",), ("PrOR", 3), reductions.WEAK),
                   (("NAND2",), ("MAJ3",), reductions.STRONG),
                   (("MAJ3",), ("NAND2",), reductions.STRONG)]:
    d = reductions.decide(catalog(*a), catalog(*b), mode)
    print(f"{''.join(map(str, a))} <~ {''.join(map(str, b))} ({mode}): {d.status}, {d.nodes} search nodes")
    if d.witness:
        print(f"    witness replays: {reductions.verify(d.witness)}")

for name in ("OR2", "MAJ3", "AND2"):
    f = catalog(name)
    k = measures.block_sensitivity(f)
    w = reductions.bs_reduction_witness(f)
    onto = "PrOR_k∘S" if w.target == reductions.pror_switch(k) else "its negation"
    print(f"\n{name}: bs = {k}, witness onto {onto}, verifies: {reductions.verify(w)}")

print("\nswitchability:")
for f, label in [(catalog("MAJ3"), "MAJ3"), (catalog("PARITY2"), "PARITY2"),
                 (compose(catalog("S"), catalog("NAND2")), "S∘NAND2")]:
    print(f"    {label}: {reductions.is_switchable(f).status}")

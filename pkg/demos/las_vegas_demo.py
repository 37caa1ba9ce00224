"""The Las Vegas certificate finder A_k on NAND2 and MAJ3 trees.

A_k either outputs a certificate for the root of the depth-k tree or gives
up with ⊥.  Every certificate it outputs is checked level by level.  The
table shows the mean number of queries, the ⊥ rate, and the growth ratio
between consecutive depths.
"""

from qlimit import catalog, lasvegas

for name in ("NAND2", "MAJ3"):
    f = catalog(name)
    rep = lasvegas.growth_report(f, lasvegas.default_evaluator(f), range(1, 5), 500, seed=1)
    print(f"{name} with {rep.evaluator}")
    print(rep.to_csv())

t = lasvegas.transcript_for(catalog("NAND2"), 2, lasvegas.DirectionalNAND(), seed=1)
print("first transcript events of one NAND2, k=2 trial:")
print("\n".join(t.dumps().splitlines()[:6]))

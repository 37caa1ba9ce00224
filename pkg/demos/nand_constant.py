"""How fast does the zero-error NAND-tree evaluator grow?

The evaluator reads a random child first and skips the sibling whenever that
child is 0.  Its worst-case expected cost per level settles to a fixed ratio,
which this script computes exactly with rational arithmetic and compares to
the closed form (1 + sqrt 33) / 4.  The naive MAJ3 evaluator is shown too.
"""

import math

from qlimit import catalog, lasvegas

nand = lasvegas.exact_expected_cost("DirectionalNAND", catalog("NAND2"), 30)
print("level  W(level)            ratio")
for level in (1, 2, 3, 5, 10, 20, 30):
    print(f"{level:5d}  {float(nand.W(level)):18.3f}  {float(nand.ratio(level)):.6f}")
print(f"closed form (1+sqrt 33)/4 = {(1 + math.sqrt(33)) / 4:.6f}")
print("worst child patterns per level:", nand.worst[1:4])

maj = lasvegas.exact_expected_cost("NaiveMAJ3", catalog("MAJ3"), 25)
print(f"\nnaive MAJ3: ratio at level 25 = {float(maj.ratio(25)):.6f} (8/3 = {8 / 3:.6f})")

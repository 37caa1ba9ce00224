"""Composition limits: M(f^k)^(1/k) for a few measures and functions.

For each (measure, function) pair we print the sequence M(f^k), the k-th
roots, and the sandwich bounds on the limit that the library can justify.
"""

from qlimit import catalog, limits

for name, measure, kmax in [("NAND2", "D", 4), ("NAND2", "C", 4), ("MAJ3", "C", 2),
                            ("MAJ3", "s", 2), ("PARITY2", "deg", 3)]:
    f = catalog(name)
    seq = limits.sequence(measure, f, kmax, name)
    print(f"{measure}({name}^k): {[str(v) for v in seq.values()]}")
    for e in seq.entries:
        print(f"    k={e.k}: root {e.root}")
    if measure in limits.LAWS:
        bounds = limits.sandwich(measure, f, kmax, seq)
        print(f"    {measure}* in [{bounds.lower}, {bounds.upper}]")
        for line in bounds.justification:
            print(f"      - {line}")

print("\ndoubling check M(f^2k) <= M(f^k)^2 for C(NAND2^k):",
      limits.doubling_monotone(limits.sequence("C", catalog("NAND2"), 4)))

"""
Fiber bounds across families
============================

The MA bound of a formula is the largest number of completions of a partial
assignment. It is always finite in a finite structure, so the interesting
signal is how it moves as the structure grows.
"""

from arraybound import family_scan, gen_halfgraph, ma_bound, parse_formula

for name, template in [("matching", "E(z1,z2)"), ("cycle", "S(z1,z2)"), ("halfgraph", "E(z1,z2)")]:
    scan = family_scan(name, [5, 10, 20, 40], template)
    print(f"{name:10s} {template}: {scan.ks} -> {scan.flag}")

# Per-split detail for one structure
h = gen_halfgraph(6)
rep = ma_bound(h, parse_formula("E(z1,z2)", h.signature), (0, 1))
for fixed, fiber in rep.per_partition.items():
    print("fixing position(s)", fixed, "leaves at most", fiber, "completions")

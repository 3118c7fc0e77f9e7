"""
Counting array-supporting types
===============================

A perfect matching and a half-graph look alike locally, but they behave very
differently once we start naming parameters. Here we count, for growing
parameter sets D, how many types over D still contain two realizations with
disjoint ranges.
"""

from arraybound import Chain, Exhaustive, count_supporting, gen_halfgraph, gen_matching, uba_scan
from arraybound.structure import halfgraph_b

# In a matching every vertex looks like every other one over any small D.
m = gen_matching(25)
prof = uba_scan(m, 2, (1, 2), Exhaustive(2))
for k, v in sorted(prof.verdicts.items()):
    print(f"matching, k={k}: {v.kind}, max count {v.max_count}")

# The half-graph orders its a-side. Naming every other b-vertex splits the
# a-vertices into adjacent pairs, and each pair still holds a 2-array.
n = 12
h = gen_halfgraph(n)
odd = [tuple(halfgraph_b(n, 2 * j + 1) for j in range(i)) for i in range(1, 7)]
print("odd b-chain:", [count_supporting(h, 1, d, 2) for d in odd])

# Naming a prefix b_0..b_{i-1} instead leaves each adjacent a-vertex alone in
# its type, so that chain never grows.
prefix = [tuple(halfgraph_b(n, j) for j in range(i)) for i in range(1, 7)]
print("prefix b-chain:", [count_supporting(h, 1, d, 2) for d in prefix])

v = uba_scan(h, 2, (1,), Chain(tuple(odd))).verdicts[1]
print("verdict:", v.kind, "witness counts", [c for _, c in v.witness])

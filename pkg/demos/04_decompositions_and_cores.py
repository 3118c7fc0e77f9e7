"""
Decompositions and cores
========================

A tuple splits into maximal pieces whose types are mutually algebraic over a
base. Separately, from a conjunction of mutually algebraic pieces we can keep
a small chain that still covers every variable.
"""

from arraybound import build_basis, extract_core, gen_matching, max_ma_decomposition, parse_formula, to_text

s = gen_matching(10)
for tup in [(0, 1, 4), (0, 2), (4, 5, 6, 7)]:
    print(tup, "->", max_ma_decomposition(s, tup, (), kappa=1))

sig = s.signature
alphas = [(parse_formula(t, sig, 3), vs) for t, vs in [("E(z1,z2)", (0, 1)), ("E(z3,z2)", (1, 2)),
                                                       ("E(z2,z1)", (0, 1))]]
rep = extract_core(s, alphas, [], (0, 1, 2), kappa=1, tau=3)
print("chosen", rep.s0, "core", to_text(rep.core), "bound", rep.core_bound)

basis = build_basis(s, [(parse_formula("E(z1,z2)", sig), (0, 1))], k=2, kappa=1, tau=3)
for a in basis.assignments:
    print(a.type_token, "->", to_text(a.formula) if a.covered else a.reason)

"""
Defining schemes and free products
==================================

For a type with large arrays, membership of a formula theta(x, d) can be
decided from parameters alone: take a 2m-array of the type and ask whether
theta holds on at least m of its members.
"""

from arraybound import gen_cycle, gen_matching, isolating_formula, parse_formula, qf_type, to_text
from arraybound.scheme import build_scheme, free_product, make_scheme, scheme_agreement

s = gen_cycle(24)
phi = isolating_formula(qf_type(s, (0, 1)))
theta = parse_formula("S(z3,z1)", s.signature, 3)
params = make_scheme(s, phi, (0, 1), theta, (2,))
print("m =", params.m)
print("backing array:", params.array.realizations)
print("scheme:", to_text(build_scheme(params)))
print("agreement with the direct array test: %d/%d" % scheme_agreement(s, params))

# Product of the edge type of a matching with itself: two disjoint edges
m = gen_matching(20)
edge = qf_type(m, (0, 1))
rep = free_product(m, edge, edge)
print(rep.fingerprint.token())
print("realized by", rep.witness, "cross-check", "pass" if rep.cross_check else "fail")

"""Claw dichotomy on one-sided dense bipartite graphs, with the branch order made explicit."""

from fractions import Fraction

from mdl.claw import ClawParams, claw_dichotomy
from mdl.generators import complete_bipartite
from mdl.graph import density
from mdl.minors import contract_model

b = 8
H = complete_bipartite(2 * b, b)
A, B = range(2 * b), range(2 * b, 3 * b)
p = ClawParams(K0=20, l0=2, eps10=Fraction(1, 10), eps20=Fraction(1, 20), d0=b, mode="desk")
print(f"K_(2b,b) with b={b}; minor bound {float(p.minor_bound):.2f}")
for priority in (("bounded_minor", "dense_small", "dense_wide"), ("dense_wide", "dense_small", "bounded_minor")):
    cert = claw_dichotomy(H, A, B, p, priority=priority)
    if cert.model is not None:
        J = contract_model(H, cert.model)
        print(f"{priority[0]} first -> bounded_minor, width {cert.model.width}, density {float(density(J)):.2f}")
    else:
        print(f"{priority[0]} first -> {cert.branch}, {len(cert.vertices)} vertices")

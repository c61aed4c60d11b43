"""Mate counts, the unmated dichotomy and a clean star forest on a peeled random graph."""

from fractions import Fraction

from mdl.forest import build_clean_forest
from mdl.generators import gnp, planted_clique
from mdl.graph import density, peel_to_min_degree
from mdl.mates import MateParams, mate_counts, unmated_dichotomy

G = planted_clique(90, 0.05, 20, 3)
d = density(G)
p = MateParams(3, d, Fraction(1, 2), Fraction(1, 2))
counts = mate_counts(G, p.eps2, d)
print(f"d = {float(d):.2f}; most mates of one vertex: {counts.max()}")
cert = unmated_dichotomy(G, p)
print("branch:", cert.branch)
if cert.branch == "dense_subgraph":
    H = cert.subgraph()
    print(f"  v(H)={H.n} <= 3Kd={float(3 * p.K * d):.1f}, 2e(H)={2 * H.num_edges} >= {float(p.eps1 * p.eps2 * d * d):.1f}")

G = peel_to_min_degree(gnp(100, 0.12, 7)).graph
d = density(G)
res = build_clean_forest(G, 2, 3, Fraction(2, 5), Fraction(9, 10), d, strict=False)
F = res.forest
print(f"forest on n={G.n}: {len(F)} stars, loss {F.loss} <= {float(4 * Fraction(9, 10) * d * F.num_vertices):.1f}")
print(f"|A|={len(res.A)} |B|={len(res.B)} |C|={len(res.C)} |A'|={len(res.A_prime)}; checks: {res.checks}")

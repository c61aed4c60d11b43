"""The three outcomes of the dense / bipartite / bounded-minor dichotomy."""

from fractions import Fraction

from mdl.certificates import verify
from mdl.dichotomy import DichotomyParams, dense_bipartite_minor
from mdl.generators import line_segments, planted_clique, polarity, relabel
from mdl.graph import density
from mdl.minors import contract_model

cases = [
    ("planted clique", planted_clique(120, 0.08, 40, 0), DichotomyParams(4, 3, Fraction(2, 5), Fraction(9, 10), "desk")),
    ("segments", relabel(line_segments(29, 9, 3), 0), DichotomyParams(2, 6, Fraction(9, 10), Fraction(9, 10), "desk")),
    ("polarity q=23", relabel(polarity(23), 1), DichotomyParams(4, 4, Fraction(2, 5), Fraction(9, 10), "desk")),
]
for name, G, p in cases:
    cert = dense_bipartite_minor(G, p)
    d = density(G)
    line = f"{name}: n={G.n} d={float(d):.2f} -> {cert.branch}"
    if cert.branch == "dense_subgraph":
        H = cert.subgraph()
        line += f" (v(H)={H.n}, d(H)={float(density(H)):.2f})"
    elif cert.branch == "bipartite":
        line += f" (|X|={len(cert.X)}, |Y|={len(cert.Y)})"
    else:
        J = contract_model(G, cert.model)
        line += f" (width {cert.model.width}, minor density {float(density(J)):.2f})"
    print(line, "verified" if verify(cert) else "FAILED")
    print("  levels:", [step.get("action") for step in cert.meta["trace"]])

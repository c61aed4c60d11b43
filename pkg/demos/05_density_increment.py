"""Iterate the dense-or-minor step until the target density or a dense subgraph is reached."""

from fractions import Fraction

from mdl.generators import gnp, polarity, relabel
from mdl.graph import density
from mdl.increment import IncrementParams, density_increment


def show(name, G, p):
    out = density_increment(G, p)
    print(f"{name}: d(G)={float(density(G)):.2f} D={float(p.D):.2f} -> {out.tag}, final density {float(out.final_density):.2f}")
    for r in out.iterations:
        extra = f" -> d'={float(r['d_next']):.2f}" if "d_next" in r else ""
        print(f"  it {r['iteration']}: n={r['n']} s={float(r['s']):.3f} {r.get('branch')} {r.get('path') or ''}{extra}")


G = relabel(polarity(23), 4)
show("polarity", G, IncrementParams(C=Fraction(1, 2), D=Fraction(5, 2) * density(G), mode="desk", k_min=3, k_max=5,
                                    K=4, eps1=Fraction(2, 5), eps2=Fraction(9, 10)))

G = gnp(2000, 0.05, 1)
show("gnp", G, IncrementParams(C=2, D=Fraction(5, 2) * density(G), mode="desk", k_min=6, k_max=6, K=144,
                               eps1=Fraction(1, 6), eps2=Fraction(1, 6)))

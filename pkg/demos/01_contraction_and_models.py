"""Edge contraction bookkeeping, minor models and the exhaustive clique-minor oracle."""

from mdl.generators import complete_bipartite, gnp, petersen
from mdl.graph import contract_edges, density
from mdl.minors import clique_minor_oracle, contract_model, verify_model

G = gnp(30, 0.2, 4)
S = G.edges()[:12]
c = contract_edges(G, S)
print(f"G: n={G.n} m={G.num_edges} d={density(G)}")
print(f"G/S: n={c.graph.n} m={c.graph.num_edges}, {c.loss} edges lost")

for name, H, t in (("petersen", petersen(), 5), ("K_{3,3}", complete_bipartite(3, 3), 4), ("K_{3,3}", complete_bipartite(3, 3), 5)):
    M = clique_minor_oracle(H, t)
    if M is None:
        print(f"{name}: no K_{t} minor")
        continue
    verdict = verify_model(H, M)
    print(f"{name}: K_{t} model with branch sets {[sorted(b) for b in M.branch_sets]} ({verdict.ok})")
    print(f"  contracted graph has {contract_model(H, M).num_edges} edges")

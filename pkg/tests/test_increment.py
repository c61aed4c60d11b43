import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from instances import polarity_instance, segment_instance
from mdl.certificates import verify
from mdl.errors import DomainError
from mdl.generators import complete, cycle, gnp, planted_clique, polarity, random_tree, relabel
from mdl.graph import Graph, density, induced
from mdl.increment import (
    PAPER_C,
    IncrementParams,
    StepParams,
    chromatic_bound,
    degeneracy_coloring,
    degeneracy_ordering,
    dense_or_bounded_minor,
    density_increment,
    g_ratio_bound,
    g_value,
    paper_k,
)
from mdl.minors import contract_model, verify_model

DESK = dict(K=4, eps1=Fraction(2, 5), eps2=Fraction(9, 10))


class TestG:
    def test_values(self):
        assert g_value(1, 7) == 7
        assert g_value(1, PAPER_C) == 2 ** 50
        assert math.isclose(g_value(math.e, 3), 96, rel_tol=1e-12)
        assert math.isclose(g_value(math.e ** 3, 3), 3072, rel_tol=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            g_value(0.5, 1)
        with pytest.raises(DomainError):
            g_value(2, 0)

    @given(st.floats(1, 1e6), st.floats(1, 1e6), st.floats(0.01, 100))
    def test_monotone(self, s1, s2, C):
        lo, hi = sorted((s1, s2))
        assert g_value(lo, C) <= g_value(hi, C)
        assert g_value(lo, C) < g_value(lo, C * 1.5)

    def test_paper_k(self):
        assert paper_k(1) == 512
        assert paper_k(math.e) == 1024
        with pytest.raises(DomainError):
            paper_k(0.9)

    def test_ratio_bound(self):
        # when s' <= 2s/m and m >= 30(1 + ln s) the ratio bound holds
        for s in (3.0, 10.0, 100.0, 1e4):
            m = math.ceil(30 * (1 + math.log(s)))
            s_new = max(1.0, 2 * s / m)
            assert g_value(s_new, 1) / g_value(s, 1) <= g_ratio_bound(s)


class TestChromaticBound:
    def test_requires_constant(self):
        with pytest.raises(TypeError):
            chromatic_bound(10, 1)  # noqa
        with pytest.raises(DomainError):
            chromatic_bound(10, 1, None)
        with pytest.raises(DomainError):
            chromatic_bound(2, 1, 1)

    def test_t16(self):
        lt = math.log(16)
        want = 16 * ((1 + math.log(3.2 * math.sqrt(lt))) ** 5 + math.log(lt) ** 2)
        assert math.isclose(chromatic_bound(16, 1, 1), want, rel_tol=1e-12)

    def test_monotone(self):
        vals = [chromatic_bound(t, 1, 1) for t in range(3, 400)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_doubling_slope(self):
        ratio = chromatic_bound(2 ** 21, 1, 1) / chromatic_bound(2 ** 20, 1, 1)
        assert abs(ratio - 2) / 2 < 0.1


def is_proper(G, colors):
    return all(colors[u] != colors[v] for u, v in G.edges())


class TestColoring:
    def test_k5(self):
        c = degeneracy_coloring(complete(5))
        assert is_proper(complete(5), c) and len(set(c)) == 5

    @pytest.mark.parametrize("seed", range(5))
    def test_tree(self, seed):
        T = random_tree(30, seed)
        c = degeneracy_coloring(T)
        assert is_proper(T, c) and len(set(c)) <= 2

    def test_c5(self):
        c = degeneracy_coloring(cycle(5))
        assert is_proper(cycle(5), c) and len(set(c)) <= 3

    def test_empty(self):
        with pytest.raises(DomainError):
            degeneracy_coloring(Graph(0))

    @given(graphs(max_n=16, min_n=1))
    def test_degeneracy_bound(self, G):
        c = degeneracy_coloring(G)
        order, degen = degeneracy_ordering(G)
        assert sorted(order) == list(range(G.n))
        H = nx.Graph()
        H.add_nodes_from(range(G.n))
        H.add_edges_from(G.edges())
        assert degen == max(nx.core_number(H).values(), default=0)
        assert is_proper(G, c) and len(set(c)) <= degen + 1


class TestStep:
    def test_paper_preconditions(self):
        with pytest.raises(DomainError):
            dense_or_bounded_minor(complete(20), StepParams(100))
        with pytest.raises(DomainError):
            dense_or_bounded_minor(complete(20), StepParams(3))
        with pytest.raises(DomainError):
            StepParams(100, "paper", K=5).dichotomy()

    def test_dense_branch(self):
        G = planted_clique(120, 0.08, 40, 0)
        k = 3
        cert = dense_or_bounded_minor(G, StepParams(k, "desk", **DESK))
        assert cert.branch == "dense_subgraph"
        d = density(G)
        H = cert.subgraph()
        assert H.n <= 12 * k ** 3 * d
        assert density(H) * 24 * k ** 5 >= d
        assert cert.witness["path"] == ["dichotomy/dense_subgraph"]

    def test_dichotomy_minor_gives_m_equal_k(self):
        G, P = polarity_instance(2)
        cert = dense_or_bounded_minor(G, StepParams(P[1], "desk", K=P[0], eps1=P[2], eps2=P[3]))
        assert cert.branch == "bounded_minor" and cert.params["m"] == P[1]
        assert verify_model(G, cert.model) and cert.model.width <= P[1]
        assert verify(cert)

    def test_claw_minor_gives_l0_plus_one(self):
        G, (K, k, e1, e2) = segment_instance(0)
        cert = dense_or_bounded_minor(G, StepParams(k, "desk", K=K, eps1=e1, eps2=e2))
        assert cert.witness["path"] == ["dichotomy/bipartite", "claw/bounded_minor"]
        l0 = math.ceil(k / 6)
        assert cert.params["m"] == l0 + 1
        assert cert.model.is_k_bounded(l0 + 1)
        assert density(contract_model(G, cert.model)) > density(G)
        assert verify(cert)


class TestLoop:
    def test_params(self):
        with pytest.raises(DomainError):
            IncrementParams(C=1, D=10)  # paper mode fixes C
        with pytest.raises(DomainError):
            IncrementParams(C=1, D=0, mode="desk")
        p = IncrementParams(C=PAPER_C, D=10)
        assert p.k_for(1, 10 ** 20) == 512

    def test_paper_refuses(self):
        with pytest.raises(DomainError):
            density_increment(complete(10), IncrementParams(C=PAPER_C, D=100))

    def test_target_already_met(self):
        G = complete(8)
        out = density_increment(G, IncrementParams(C=1, D=2, mode="desk"))
        assert out.tag == "minor_found"
        assert contract_model(G, out.certificate.model) == G
        assert verify(out.certificate)

    def test_single_edge(self):
        G = complete(4)
        out = density_increment(G, IncrementParams(C=1, D=100, mode="desk"))
        assert out.tag == "dense_subgraph"
        H = out.certificate.subgraph()
        assert H.n == 2 and density(H) == Fraction(1, 2)

    def test_desk_quasirandom(self):
        G = gnp(2000, 0.05, 1)
        p = IncrementParams(C=2, D=Fraction(5, 2) * density(G), mode="desk", k_min=6, k_max=6,
                            K=144, eps1=Fraction(1, 6), eps2=Fraction(1, 6))
        out = density_increment(G, p)
        assert verify(out.certificate)
        ds = [row["d"] for row in out.iterations]
        assert all(a < b for a, b in zip(ds, ds[1:]))

    @pytest.mark.parametrize("q,factor", [(17, Fraction(3, 2)), (19, Fraction(5, 2)), (23, Fraction(7, 2))])
    def test_polarity_runs(self, q, factor):
        G = relabel(polarity(q), q)
        d0 = density(G)
        p = IncrementParams(C=Fraction(1, 2), D=factor * d0, mode="desk", k_min=3, k_max=5, **DESK)
        out = density_increment(G, p)
        assert verify(out.certificate)
        rows = out.iterations
        ss = [r["s"] for r in rows]
        assert all(a > b for a, b in zip(ss, ss[1:]))
        for r in rows:
            if r.get("branch") == "bounded_minor":
                assert r["d_next"] > r["d"]
            if "pull_back" in r:
                assert r["pull_back"]["ok"]
        if out.tag == "minor_found":
            J = contract_model(G, out.certificate.model)
            assert density(J) >= p.D
            assert verify_model(G, out.certificate.model)
        else:
            H = out.certificate.subgraph()
            s = p.D / d0
            g = g_value(s, p.C)
            assert H.n <= g * p.D ** 2 / d0 and density(H) >= d0 / g

    def test_pull_back_inequalities(self):
        G = relabel(polarity(19), 5)
        p = IncrementParams(C=Fraction(1, 2), D=Fraction(5, 2) * density(G), mode="desk", k_min=3, k_max=3, **DESK)
        out = density_increment(G, p)
        assert out.tag == "dense_subgraph"
        pb = [r["pull_back"] for r in out.iterations if "pull_back" in r]
        assert pb
        for (i, r), M in zip(enumerate(pb), out.models):
            assert r["v"] <= M.width * r["v_inner"]
            assert r["d"] * M.width >= r["d_inner"]
        H = induced(G, out.certificate.vertices).graph
        assert H.n == out.certificate.claimed["v"]

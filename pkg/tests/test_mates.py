import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from mdl.certificates import verify
from mdl.errors import DomainError
from mdl.generators import complete, complete_bipartite, cycle, gnp
from mdl.graph import Graph, density
from mdl.mates import MateParams, codegree_matrix, count_mates, is_small, mate_counts, unmated_dichotomy


def brute_mates(G, v, eps, d):
    thr = Fraction(eps) * Fraction(d)
    return sorted(u for u in range(G.n) if u != v and len(G.neighbors(u) & G.neighbors(v)) >= thr)


def brute_census(G, K, eps1, eps2, d):
    """Largest mate count over small vertices, all pairs checked."""
    return max(
        (len(brute_mates(G, v, eps2, d)) for v in range(G.n) if G.degree(v) <= K * d),
        default=0,
    )


class TestSmall:
    def test_star(self):
        G = complete_bipartite(1, 5)
        assert not is_small(G, 0, 2, 2)
        assert is_small(G, 1, 2, 2)

    def test_boundary_inclusive(self):
        G = complete_bipartite(1, 4)
        assert is_small(G, 0, 2, 2)


class TestCountMates:
    def test_c4(self):
        count, mates = count_mates(cycle(4), 0, Fraction(1, 2), 2)
        assert (count, mates) == (1, [2])

    def test_k4(self):
        for v in range(4):
            assert count_mates(complete(4), v, 1, 2)[0] == 3

    def test_gnp_brute(self):
        G = gnp(30, 0.5, 5)
        d = density(G)
        for v in range(G.n):
            assert count_mates(G, v, Fraction(1, 5), d)[1] == brute_mates(G, v, Fraction(1, 5), d)

    @given(graphs(max_n=14), st.fractions(min_value=0, max_value=2, max_denominator=7), st.integers(1, 4))
    def test_vector_matches_brute(self, G, eps, d):
        if G.n == 0:
            return
        counts = mate_counts(G, eps, d)
        for v in range(G.n):
            assert counts[v] == len(brute_mates(G, v, eps, d)) == count_mates(G, v, eps, d)[0]

    def test_codegree_matrix(self):
        G = gnp(18, 0.4, 2)
        C = codegree_matrix(G).toarray()
        for u in range(G.n):
            for v in range(G.n):
                want = 0 if u == v else len(G.neighbors(u) & G.neighbors(v))
                assert C[u, v] == want


class TestParams:
    @pytest.mark.parametrize("K,d,e1,e2", [(0, 1, 0.5, 0.5), (1, 0, 0.5, 0.5), (1, 1, 0, 0.5), (1, 1, 0.5, 1)])
    def test_ranges(self, K, d, e1, e2):
        with pytest.raises(DomainError):
            MateParams(K, d, e1, e2)


class TestDichotomy:
    def test_edgeless(self):
        cert = unmated_dichotomy(Graph(6), MateParams(2, 1, Fraction(1, 2), Fraction(1, 2)))
        assert cert.branch == "unmated" and verify(cert)

    def test_complete_bipartite_dense(self):
        e1, e2, d = Fraction(1, 2), Fraction(1, 2), 6
        a, b = math.ceil(e1 * d) + 1, math.ceil(e2 * d)
        G = complete_bipartite(a, b)
        cert = unmated_dichotomy(G, MateParams(2, d, e1, e2))
        assert cert.branch == "dense_subgraph"
        H = cert.subgraph()
        assert H.n <= 3 * 2 * d
        assert 2 * H.num_edges >= e1 * e2 * d * d
        assert verify(cert)

    def test_gnp_census(self):
        G = gnp(50, 0.4, 6)
        d = density(G)
        p = MateParams(4, d, Fraction(1, 10), Fraction(1, 10))
        cert = unmated_dichotomy(G, p)
        expect = "dense_subgraph" if brute_census(G, 4, p.eps1, p.eps2, d) >= p.eps1 * d else "unmated"
        assert cert.branch == expect
        assert verify(cert)

    @given(graphs(max_n=14, min_n=1), st.integers(1, 3), st.integers(1, 4),
           st.fractions(Fraction(1, 10), Fraction(9, 10), max_denominator=10),
           st.fractions(Fraction(1, 10), Fraction(9, 10), max_denominator=10))
    def test_totality(self, G, K, d, e1, e2):
        cert = unmated_dichotomy(G, MateParams(K, d, e1, e2))
        worst = brute_census(G, K, e1, e2, d)
        if cert.branch == "unmated":
            assert worst < e1 * d
        else:
            assert worst >= e1 * d
            H = cert.subgraph()
            assert H.n <= 3 * K * d and 2 * H.num_edges >= e1 * e2 * d * d
            assert cert.witness["vertex"] in cert.vertices
        assert verify(cert)

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from mdl.errors import DomainError
from mdl.generators import complete, cycle, gnp, path, random_tree
from mdl.graph import (
    Graph,
    contract_edges,
    delete_vertices,
    density,
    format_graph,
    induced,
    load_graph,
    parse_graph,
    peel_to_min_degree,
    save_graph,
)


def quotient_from_scratch(G, S):
    """Rebuild G/S with a plain BFS over the edges of S."""
    adj = {v: set() for v in range(G.n)}
    for u, v in S:
        adj[u].add(v)
        adj[v].add(u)
    label = {}
    for v in range(G.n):
        if v in label:
            continue
        stack, label[v] = [v], v
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in label:
                    label[y] = v
                    stack.append(y)
    pairs = {tuple(sorted((label[u], label[v]))) for u, v in G.edges() if label[u] != label[v]}
    return len(set(label.values())), len(pairs)


class TestConstruction:
    def test_rejects_loops_duplicates_and_range(self):
        with pytest.raises(DomainError):
            Graph(3, [(1, 1)])
        with pytest.raises(DomainError):
            Graph(3, [(0, 1), (1, 0)])
        with pytest.raises(DomainError):
            Graph(3, [(0, 3)])

    def test_adjacency_symmetric(self):
        G = gnp(25, 0.3, 4)
        for u in range(G.n):
            for w in G.neighbors(u):
                assert u in G.neighbors(w)
        assert sum(G.degrees()) == 2 * G.num_edges

    def test_equality_and_hash(self):
        assert Graph(3, [(0, 1)]) == Graph(3, [(1, 0)])
        assert hash(Graph(3, [(0, 1)])) == hash(Graph(3, [(1, 0)]))
        assert Graph(3, [(0, 1)]) != Graph(4, [(0, 1)])


class TestDensity:
    def test_k5(self):
        assert density(complete(5)) == 2

    def test_single_edge(self):
        assert density(Graph(2, [(0, 1)])) == Fraction(1, 2)

    def test_path3(self):
        assert density(path(3)) == Fraction(2, 3)

    def test_empty_graph_raises(self):
        with pytest.raises(DomainError):
            density(Graph(0))

    def test_is_exact(self):
        assert isinstance(density(gnp(17, 0.4, 1)), Fraction)


class TestPeel:
    def test_path3_unchanged(self):
        H = peel_to_min_degree(path(3))
        assert H.graph == path(3)
        assert H.vertices == (0, 1, 2)

    def test_k4_plus_pendant(self):
        G = Graph(5, list(combinations(range(4), 2)) + [(0, 4)])
        assert density(G) == Fraction(7, 5)
        H = peel_to_min_degree(G)
        assert H.vertices == (0, 1, 2, 3)
        assert H.graph == complete(4)

    def test_gnp_30(self):
        G = gnp(30, 0.3, 1)
        H = peel_to_min_degree(G).graph
        d = density(G)
        assert min(H.degree(v) for v in range(H.n)) > d
        assert density(H) >= d

    def test_edgeless_raises(self):
        with pytest.raises(DomainError):
            peel_to_min_degree(Graph(4))

    def test_explicit_threshold(self):
        G = gnp(40, 0.2, 3)
        H = peel_to_min_degree(G, 2).graph
        assert H.min_degree() > 2

    @given(graphs(max_n=14, min_n=2))
    def test_contract_property(self, G):
        if G.num_edges == 0:
            return
        sub = peel_to_min_degree(G)
        H, d = sub.graph, density(G)
        assert H.n >= 1
        assert all(H.degree(v) > d for v in range(H.n))
        assert density(H) >= d
        assert induced(G, sub.vertices).graph == H


class TestContract:
    def test_triangle(self):
        c = contract_edges(complete(3), [(0, 1)])
        assert c.graph.n == 2 and c.graph.num_edges == 1 and c.loss == 2

    def test_k4(self):
        c = contract_edges(complete(4), [(0, 1)])
        assert c.graph == complete(3)
        assert c.loss == 3

    def test_classes_map_back(self):
        c = contract_edges(cycle(6), [(0, 1), (1, 2), (3, 4)])
        assert sorted(map(sorted, c.classes)) == [[0, 1, 2], [3, 4], [5]]
        # classes ordered by smallest member
        assert [min(X) for X in c.classes] == sorted(min(X) for X in c.classes)

    def test_non_edge_raises(self):
        with pytest.raises(DomainError):
            contract_edges(cycle(5), [(0, 2)])

    def test_random_star(self):
        G = gnp(20, 0.4, 2)
        rng = random.Random(2)
        v = rng.randrange(G.n)
        leaves = sorted(G.neighbors(v))[:4]
        S = [(v, x) for x in leaves]
        c = contract_edges(G, S)
        n2, m2 = quotient_from_scratch(G, S)
        assert c.graph.n == n2
        assert c.loss == G.num_edges - m2

    @given(graphs(max_n=12), st.data())
    def test_loss_matches_rebuild(self, G, data):
        edges = G.edges()
        S = data.draw(st.lists(st.sampled_from(edges), unique=True)) if edges else []
        c = contract_edges(G, S)
        n2, m2 = quotient_from_scratch(G, S)
        assert (c.graph.n, c.graph.num_edges) == (n2, m2)
        assert c.loss == G.num_edges - m2
        assert c.graph.n <= G.n and c.graph.num_edges <= G.num_edges


class TestInduced:
    def test_k5_three(self):
        assert induced(complete(5), [0, 2, 4]).graph == complete(3)

    def test_c6_alternate(self):
        H = induced(cycle(6), [0, 2, 4]).graph
        assert H.n == 3 and H.num_edges == 0

    def test_identity(self):
        G = gnp(15, 0.5, 9)
        sub = induced(G, range(G.n))
        assert sub.graph == G
        assert density(sub.graph) == density(G)

    def test_relabel_map(self):
        G = path(5)
        sub = induced(G, [4, 3, 1])
        assert sub.vertices == (1, 3, 4)
        assert sub.graph.edges() == [(1, 2)]

    def test_errors(self):
        with pytest.raises(DomainError):
            induced(path(3), [])
        with pytest.raises(DomainError):
            induced(path(3), [0, 7])

    def test_delete_vertices(self):
        sub = delete_vertices(complete(5), [0, 1])
        assert sub.graph == complete(3) and sub.vertices == (2, 3, 4)


class TestTextFormat:
    def test_roundtrip(self, tmp_path):
        G = random_tree(12, 3)
        assert parse_graph(format_graph(G)) == G
        save_graph(G, tmp_path / "t.graph")
        assert load_graph(tmp_path / "t.graph") == G

    def test_header(self):
        assert format_graph(path(3)).splitlines()[0] == "p 3 2"

    def test_comments_ignored(self):
        assert parse_graph("c hello\np 2 1\ne 0 1\n") == Graph(2, [(0, 1)])

    @pytest.mark.parametrize(
        "text",
        [
            "p 3 2\ne 0 1\ne 1 0\n",  # duplicate
            "p 3 1\ne 1 1\n",  # loop
            "e 0 1\n",  # missing header
            "p 3 2\ne 0 1\n",  # count mismatch
            "p 3 1\ne 0 x\n",  # malformed
            "p 3 1\nq 0 1\n",  # unknown record
        ],
    )
    def test_rejects(self, text):
        with pytest.raises(DomainError):
            parse_graph(text)

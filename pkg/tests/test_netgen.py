import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import from_nx, to_nx
from lurkergame.errors import DisconnectedGraphError, SpecificationError
from lurkergame.netgen import (Graph, NetworkSpec, avg_path_length, clustering_coefficient,
                               diameter, generate, generate_ba, generate_complete, generate_ws,
                               n_components, path_stats, read_edgelist, transitivity,
                               write_edgelist)


def ws(n, k, beta, seed=0):
    return generate_ws(NetworkSpec("WS", n, k, beta, seed))


def ba(n, m, seed=0):
    return generate_ba(NetworkSpec("BA", n, m, 0.0, seed))


class TestGraph:
    def test_from_edges_sorted_adjacency(self):
        g = Graph.from_edges(4, [(2, 0), (1, 0), (3, 2)])
        assert [a.tolist() for a in g.adjacency] == [[1, 2], [0], [0, 3], [2]]
        assert g.edges.tolist() == [[0, 1], [0, 2], [2, 3]]
        assert g.validate()

    def test_edge_ids_align_with_csr(self):
        g = ws(30, 4, 0.5, seed=3)
        src = np.repeat(np.arange(g.node_count), g.degrees)
        for p in range(g.indices.size):
            u, v = g.edges[g.edge_ids[p]]
            assert {u, v} == {src[p], g.indices[p]}

    @pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)]])
    def test_rejects_non_simple(self, edges):
        with pytest.raises(SpecificationError):
            Graph.from_edges(3, edges)

    def test_immutable(self):
        g = generate_complete(3)
        with pytest.raises(AttributeError):
            g.node_count = 4
        with pytest.raises(ValueError):
            g.indices[0] = 2


class TestWattsStrogatz:
    def test_ring_lattice_structure(self):
        g = ws(10, 4, 0.0)
        assert g.neighbors(0).tolist() == [1, 2, 8, 9]
        assert set(g.degrees) == {4}

    def test_small_complete(self):
        g = ws(5, 4, 0.0)
        assert g.n_edges == 10
        assert clustering_coefficient(g) == 1.0

    def test_beta_zero_ignores_seed(self):
        assert ws(200, 4, 0.0, seed=1) == ws(200, 4, 0.0, seed=99)

    @pytest.mark.parametrize("beta", [0.0, 0.3, 0.5, 0.8, 1.0])
    def test_edge_count_preserved(self, beta):
        g = ws(500, 6, beta, seed=7)
        assert g.n_edges == 500 * 6 // 2
        g.validate()

    def test_connected_after_rewiring(self):
        for seed in range(10):
            assert n_components(ws(300, 4, 0.8, seed)) == 1

    def test_reproducible(self):
        assert ws(400, 4, 0.5, seed=11) == ws(400, 4, 0.5, seed=11)
        assert ws(400, 4, 0.5, seed=11) != ws(400, 4, 0.5, seed=12)

    @pytest.mark.parametrize("n,k", [(10, 3), (10, 0), (4, 4)])
    def test_invalid(self, n, k):
        with pytest.raises(SpecificationError):
            NetworkSpec("WS", n, k, 0.1)

    def test_table1_lattice_row(self):
        g = ws(5000, 4, 0.0)
        apl, diam = path_stats(g)
        assert apl == pytest.approx(625.38, abs=0.01)
        assert diam == 1250
        assert clustering_coefficient(g) == 0.5

    def test_lattice_path_length_closed_form(self):
        # d(i, j) = ceil(circular offset / (k/2)) on the ring lattice
        n, k = 101, 6
        offsets = np.arange(1, n)
        expected = np.ceil(np.minimum(offsets, n - offsets) / (k // 2)).mean()
        assert avg_path_length(ws(n, k, 0.0)) == pytest.approx(expected, abs=1e-12)

    def test_clustering_decreases_with_beta(self):
        means = [np.mean([clustering_coefficient(ws(1000, 4, b, s)) for s in range(20)])
                 for b in (0.0, 0.3, 0.5, 0.8)]
        assert all(a >= b for a, b in zip(means, means[1:]))


class TestBarabasiAlbert:
    def test_seed_clique_only(self):
        g = ba(3, 2)
        assert g.edges.tolist() == [[0, 1], [0, 2], [1, 2]]

    @pytest.mark.parametrize("n,m", [(10, 1), (100, 2), (500, 3)])
    def test_edge_count(self, n, m):
        g = ba(n, m, seed=5)
        assert g.n_edges == math.comb(m + 1, 2) + m * (n - m - 1)
        g.validate()
        assert n_components(g) == 1

    def test_invalid(self):
        with pytest.raises(SpecificationError):
            NetworkSpec("BA", 3, 3)

    def test_hubs(self):
        g = ba(5000, 2, seed=0)
        mean = g.degrees.mean()
        assert mean == pytest.approx(4.0, abs=0.01)
        assert g.degrees.max() > 10 * mean

    def test_degree_tail_exponent(self):
        # log-binned degree density, regression over degrees >= 8
        slopes = []
        for seed in range(20):
            d = ba(5000, 2, seed).degrees
            edges = np.unique(np.round(np.logspace(np.log10(8), np.log10(d.max() + 1), 12))
                              .astype(int))
            h, _ = np.histogram(d, bins=edges)
            dens = h / np.diff(edges) / d.size
            centers = np.sqrt(edges[:-1] * edges[1:])
            keep = h > 0
            slopes.append(np.polyfit(np.log(centers[keep]), np.log(dens[keep]), 1)[0])
        assert np.mean(slopes) == pytest.approx(-3.0, abs=0.5)

    def test_reproducible(self):
        assert ba(300, 2, seed=4) == ba(300, 2, seed=4)


class TestComplete:
    @pytest.mark.parametrize("n,edges", [(2, 1), (3, 3), (6, 15)])
    def test_edge_count(self, n, edges):
        assert generate_complete(n).n_edges == edges

    def test_large_degree(self):
        g = generate_complete(5000)
        assert set(g.degrees.tolist()) == {4999}

    def test_invalid(self):
        with pytest.raises(SpecificationError):
            generate_complete(1)

    def test_k4_metrics(self):
        g = generate_complete(4)
        assert avg_path_length(g) == 1.0
        assert diameter(g) == 1
        assert clustering_coefficient(g) == 1.0


class TestMetricsAgainstNetworkx:
    @pytest.mark.parametrize("seed", range(5))
    def test_random_graphs(self, seed):
        h = nx.connected_watts_strogatz_graph(120, 4, 0.4, seed=seed)
        h.add_edges_from(nx.barabasi_albert_graph(120, 1, seed=seed).edges())
        g = from_nx(h)
        assert avg_path_length(g) == pytest.approx(nx.average_shortest_path_length(h), abs=1e-12)
        assert diameter(g) == nx.diameter(h)
        assert clustering_coefficient(g) == pytest.approx(nx.average_clustering(h), abs=1e-12)
        assert transitivity(g) == pytest.approx(nx.transitivity(h), abs=1e-12)

    def test_low_degree_nodes_count_zero(self, star5):
        assert clustering_coefficient(star5) == 0.0
        h = nx.Graph([(0, 1), (1, 2), (2, 0), (2, 3)])
        assert clustering_coefficient(from_nx(h)) == pytest.approx(nx.average_clustering(h))

    def test_disconnected(self):
        g = Graph.from_edges(5, [(0, 1), (2, 3)])
        for metric in (avg_path_length, diameter, clustering_coefficient):
            with pytest.raises(DisconnectedGraphError) as info:
                metric(g)
            assert info.value.n_components == 3


class TestEdgeList:
    def test_round_trip(self):
        g = ba(50, 2, seed=1)
        text = write_edgelist(g, comments=["hello"])
        lines = text.splitlines()
        assert lines[0] == "# nodes=50"
        assert lines[1] == "# hello"
        pairs = [tuple(map(int, line.split())) for line in lines[2:]]
        assert pairs == sorted(pairs)
        assert all(u < v for u, v in pairs)
        assert read_edgelist(text) == g

    def test_isolated_nodes_survive(self):
        g = Graph.from_edges(4, [(0, 1)])
        assert read_edgelist(write_edgelist(g)).node_count == 4

    def test_missing_header(self):
        with pytest.raises(SpecificationError):
            read_edgelist("0 1\n")


specs = st.one_of(
    st.builds(lambda n, h, b, s: NetworkSpec("WS", n, 2 * h, b, s),
              st.integers(12, 80), st.integers(1, 3), st.floats(0, 1), st.integers(0, 2**32)),
    st.builds(lambda n, m, s: NetworkSpec("BA", n, m, 0.0, s),
              st.integers(5, 80), st.integers(1, 4), st.integers(0, 2**32)),
)


@settings(max_examples=60, deadline=None)
@given(specs)
def test_generated_graphs_are_simple_and_symmetric(spec):
    g = generate(spec)
    assert g.validate()
    h = to_nx(g)
    assert h.number_of_edges() == g.n_edges
    assert nx.number_of_selfloops(h) == 0
    assert generate(spec) == g

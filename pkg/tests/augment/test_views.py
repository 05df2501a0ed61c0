"""
View Construction Unit Tests
"""

import itertools
import math

import numpy as np
import pytest

from traffic_graph.augment import derive_rng, drop_edges, drop_nodes, drop_packets, make_packet_view
from traffic_graph.config import AugmentConfig
from traffic_graph.graphs import GraphOrigin, TrafficGraph, build_graph

TRIALS = 10_000


def chain(n: int, origin: GraphOrigin = GraphOrigin.PAYLOAD) -> TrafficGraph:
    return TrafficGraph(nodes=np.arange(n), edges=[[i, i + 1] for i in range(n - 1)], origin=origin)


def dense(num_edges: int) -> TrafficGraph:
    pairs = list(itertools.combinations(range(21), 2))[:num_edges]
    return TrafficGraph(nodes=np.arange(21), edges=pairs, origin=GraphOrigin.PAYLOAD)


class TestDropNodes:
    """Node dropping tests"""

    def test_zero_probability(self):
        """Test p = 0 returns the graph unchanged"""
        graph = chain(10)
        assert drop_nodes(graph, 0.0, derive_rng(0)) is graph

    def test_one_probability(self):
        """Test p = 1 keeps exactly one node and no edges"""
        for seed in range(20):
            view = drop_nodes(chain(10), 1.0, derive_rng(seed))
            assert view.num_nodes == 1
            assert view.num_edges == 0

    def test_edges_remapped(self):
        """Test surviving edges keep their byte values"""
        graph = build_graph(np.random.default_rng(3).integers(0, 30, size=150).tolist())
        for seed in range(10):
            view = drop_nodes(graph, 0.3, derive_rng(seed))
            survivors = set(view.nodes.tolist())
            expected = {(a, b) for a, b in graph.value_edges() if a in survivors and b in survivors}
            assert view.value_edges() == expected

    def test_order_preserved(self):
        """Test survivors keep their relative order"""
        view = drop_nodes(chain(50), 0.5, derive_rng(1))
        assert view.nodes.tolist() == sorted(view.nodes.tolist())

    def test_binomial_mean(self):
        """Test surviving count on a 100-node graph averages 90 within 3 sigma"""
        graph = chain(100)
        rng = derive_rng(42)
        counts = [drop_nodes(graph, 0.1, rng).num_nodes for _ in range(TRIALS)]
        sigma = math.sqrt(100 * 0.1 * 0.9)

        assert abs(np.mean(counts) - 90) <= 3 * sigma

    def test_origin_kept(self):
        """Test the header/payload tag survives"""
        assert drop_nodes(chain(5, GraphOrigin.HEADER), 0.5, derive_rng(0)).origin is GraphOrigin.HEADER


class TestDropEdges:
    """Edge dropping tests"""

    def test_zero_probability(self):
        """Test p = 0 is the identity"""
        graph = dense(50)
        assert drop_edges(graph, 0.0, derive_rng(0)) is graph

    def test_one_probability(self):
        """Test p = 1 removes every edge and keeps every node"""
        view = drop_edges(dense(50), 1.0, derive_rng(0))

        assert view.num_edges == 0
        assert view.num_nodes == 21

    def test_subset(self):
        """Test surviving edges come from the input"""
        graph = dense(100)
        view = drop_edges(graph, 0.5, derive_rng(3))
        assert view.value_edges() <= graph.value_edges()

    def test_binomial_mean(self):
        """Test 200 edges at p = 0.05 lose 10 on average within 3 sigma"""
        graph = dense(200)
        rng = derive_rng(7)
        removed = [200 - drop_edges(graph, 0.05, rng).num_edges for _ in range(TRIALS)]
        sigma = math.sqrt(200 * 0.05 * 0.95)

        assert abs(np.mean(removed) - 10) <= 3 * sigma


class TestMakePacketView:
    """Packet view tests"""

    def test_flags_off(self):
        """Test no flag set leaves both graphs untouched"""
        header, payload = chain(10, GraphOrigin.HEADER), chain(10)
        cfg = AugmentConfig(augment_header=False, augment_payload=False, p_node_drop=0.9, p_edge_drop=0.9)

        out = make_packet_view(header, payload, cfg, derive_rng(0))

        assert out[0] is header
        assert out[1] is payload

    def test_header_only(self):
        """Test the payload is returned exactly when only the header is augmented"""
        header, payload = chain(30, GraphOrigin.HEADER), chain(30)
        cfg = AugmentConfig(augment_header=True, augment_payload=False, p_node_drop=0.5)

        new_header, new_payload = make_packet_view(header, payload, cfg, derive_rng(2))

        assert new_payload is payload
        assert new_header.num_nodes < 30

    def test_deterministic(self):
        """Test the same stream gives the same view"""
        header, payload = chain(40, GraphOrigin.HEADER), dense(150)
        cfg = AugmentConfig(p_node_drop=0.3, p_edge_drop=0.3)

        first = make_packet_view(header, payload, cfg, derive_rng(5, 2, 0, 1))
        second = make_packet_view(header, payload, cfg, derive_rng(5, 2, 0, 1))

        assert first[0] == second[0]
        assert first[1] == second[1]


class TestDropPackets:
    """Packet dropping tests"""

    def test_zero_probability(self):
        """Test p = 0 keeps everything"""
        assert drop_packets(15, 0.0, derive_rng(0)).all()

    def test_one_probability(self):
        """Test p = 1 keeps exactly one position"""
        for seed in range(20):
            assert drop_packets(5, 1.0, derive_rng(seed)).sum() == 1

    def test_binomial_mean(self):
        """Test n = 15, p = 0.6 keeps 6 on average within 3 sigma"""
        rng = derive_rng(11)
        kept = [int(drop_packets(15, 0.6, rng).sum()) for _ in range(TRIALS)]
        sigma = math.sqrt(15 * 0.4 * 0.6)

        assert abs(np.mean(kept) - 6) <= 3 * sigma

    def test_never_empty(self):
        """Test at least one packet always survives"""
        rng = derive_rng(0)
        assert all(drop_packets(3, 0.9, rng).any() for _ in range(1000))

    def test_empty_flow(self):
        """Test n = 0"""
        with pytest.raises(ValueError):
            drop_packets(0, 0.5, derive_rng(0))


class TestDeriveRng:
    """Random stream tests"""

    def test_streams_differ(self):
        """Test different coordinates give different draws"""
        a = derive_rng(0, 1, 2).random(4)
        b = derive_rng(0, 1, 3).random(4)
        assert not np.array_equal(a, b)

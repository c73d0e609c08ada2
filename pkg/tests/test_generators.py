import numpy as np
import pytest
from statusnet.centrality import generalized_centrality
from statusnet.errors import GenerationFailed
from statusnet.generators import community_links, make_rng, random_block, rescale_to_target
from statusnet.models import Identity, Topology
from statusnet.network import build_H, spectral_radius

pytestmark = pytest.mark.unit

class TestRng:
    def test_same_seed_same_stream(self):
        np.testing.assert_array_equal(make_rng(42).random(5), make_rng(42).random(5))

    def test_different_seeds_differ(self):
        assert not np.array_equal(make_rng(1).random(5), make_rng(2).random(5))

class TestCommunityLinks:
    def test_complete(self):
        links = community_links(Topology.COMPLETE, 3, 0.2)
        np.testing.assert_allclose(links, 0.2 * (np.ones((3, 3)) - np.eye(3)))

    def test_ring(self):
        links = community_links(Topology.RING, 5, 0.1)
        assert np.all((links > 0).sum(axis=1) == 2)
        np.testing.assert_array_equal(links, links.T)

    def test_star(self):
        links = community_links("star", 4, 0.3)
        assert (links[0] > 0).sum() == 3
        assert all((links[j] > 0).sum() == 1 for j in range(1, 4))

    def test_singleton(self):
        assert not community_links(Topology.COMPLETE, 1, 0.2).any()

class TestRescale:
    def test_shrinks_until_target(self):
        G = np.array([[0.0, 2.0], [2.0, 0.0]])
        scaled, attempts = rescale_to_target(G, lambda links: spectral_radius(links).lambda1, 0.9)
        assert spectral_radius(scaled).lambda1 <= 0.9
        assert attempts > 0
        assert G[0, 1] == 2.0

    def test_already_below_target(self):
        G = np.array([[0.0, 0.2], [0.2, 0.0]])
        scaled, attempts = rescale_to_target(G, lambda links: spectral_radius(links).lambda1, 0.9)
        assert attempts == 0
        np.testing.assert_array_equal(scaled, G)

    def test_gives_up(self):
        G = np.array([[0.0, 2.0], [2.0, 0.0]])
        with pytest.raises(GenerationFailed):
            rescale_to_target(G, lambda links: spectral_radius(links).lambda1, 0.9, max_attempts=0)

class TestRandomBlock:
    def test_deterministic(self):
        first = random_block(6, 4, 0.3, 0.1, seed=9)
        second = random_block(6, 4, 0.3, 0.1, seed=9)
        np.testing.assert_array_equal(first.G, second.G)
        np.testing.assert_array_equal(first.incomes, second.incomes)

    def test_group_sizes_and_incomes(self):
        net = random_block(6, 4, 0.3, 0.1, income_range=(0.5, 2.0), seed=3)
        assert len(net.members(Identity.A)) == 6
        assert len(net.members(Identity.B)) == 4
        assert np.all((net.incomes >= 0.5) & (net.incomes < 2.0))

    def test_weighted_radius_meets_target(self, params):
        net = random_block(10, 10, 0.8, 0.3, weight=0.5, seed=4)
        assert spectral_radius(build_H(net, params)).lambda1 <= 0.9

    def test_no_within_links(self, params):
        net = random_block(4, 4, 0.0, 0.5, income_range=(1.0, 1.0 + 1e-12), seed=0)
        C = generalized_centrality(net, params).C
        np.testing.assert_allclose(C, 0.5, rtol=1e-9)

    def test_empty_group(self):
        with pytest.raises(GenerationFailed):
            random_block(0, 3, 0.3, 0.1)

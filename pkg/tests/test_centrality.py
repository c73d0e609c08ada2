import numpy as np
import pytest
from statusnet.centrality import (
    centrality_income_jacobian,
    check_assumption_2,
    community_density,
    effective_density,
    finite_difference_jacobian,
    generalized_centrality,
    neumann_centrality,
    standard_bonacich,
    uniform_community_centrality,
)
from statusnet.errors import (
    AssumptionOneViolated,
    CentralityConsistencyError,
    NonUniformIncome,
    PartitionNotDisconnected,
    SpectralRadiusViolated,
)
from statusnet.generators import random_block
from statusnet.inequality import build_communities, centrality_density_identity
from statusnet.models import CommunityStructure, Identity, ModelParams, Network
from statusnet.network import build_H, has_walk, mask_by_identity

pytestmark = pytest.mark.unit

@pytest.fixture
def chain():
    """Directed link 0 -> 1 inside group A, group B isolated"""
    G = np.zeros((4, 4))
    G[0, 1] = 0.5
    return Network(incomes=[1.0, 2.0, 1.0, 1.5], identities=["A", "A", "B", "B"], G=G)

class TestGeneralizedCentrality:
    def test_fixture_values(self, four_agents, params):
        profile = generalized_centrality(four_agents, params)
        np.testing.assert_allclose(profile.C, [2 / 3, 2 / 3, 0.5, 0.5], atol=1e-12)
        assert profile.C_bar_A == pytest.approx(2 / 3, abs=1e-12)
        assert profile.Z_A == pytest.approx(4 / 3, abs=1e-12)
        assert profile.Z_A * profile.Z_B == pytest.approx(1.0, abs=1e-12)

    def test_empty_network_is_seed(self, params):
        net = Network(incomes=[1.0, 3.0], identities=["A", "B"], G=np.zeros((2, 2)))
        np.testing.assert_allclose(generalized_centrality(net, params).C, [0.5, 0.75])

    def test_assumption_one_gate(self, params):
        G = np.zeros((4, 4))
        G[0, 1] = G[1, 0] = 2.4
        net = Network(incomes=[1.0] * 4, identities=["A", "A", "B", "B"], G=G)
        with pytest.raises(AssumptionOneViolated):
            generalized_centrality(net, params)

    def test_neumann_series_agrees(self, params):
        for seed in range(10):
            net = random_block(6, 5, 0.4, 0.2, seed=seed)
            direct = generalized_centrality(net, params).C
            np.testing.assert_allclose(neumann_centrality(net, params, tol=1e-13), direct, atol=1e-10)

    def test_more_links_raise_centrality(self, params):
        net = random_block(6, 6, 0.3, 0.1, seed=11)
        C = generalized_centrality(net, params).C
        G_hat = mask_by_identity(net).G_hat
        j, k = np.argwhere((G_hat == 0) & ~np.eye(net.J, dtype=bool) & (net.labels[:, None] == net.labels[None, :]))[0]
        G = np.array(net.G, copy=True)
        G[j, k] = 0.01
        C_more = generalized_centrality(net.with_links(G), params).C
        assert C_more[j] > C[j]
        assert np.all(C_more >= C - 1e-15)

class TestStandardBonacich:
    def test_pair(self, four_agents):
        np.testing.assert_allclose(standard_bonacich(mask_by_identity(four_agents)), [2.0, 2.0, 1.0, 1.0])

    def test_radius_gate(self):
        with pytest.raises(SpectralRadiusViolated):
            standard_bonacich(np.array([[0.0, 1.0], [1.0, 0.0]]))

class TestAssumptionTwo:
    def test_fixture_passes(self, four_agents, params):
        report = check_assumption_2(generalized_centrality(four_agents, params), params)
        assert report.all_passed
        assert np.all(report.below_inverse_gamma)
        assert report.bound[0] == pytest.approx((2 + 4 / 3) / 3)

    def test_equivalent_to_consumption_bound(self, params):
        tight = ModelParams(alpha=3.0, beta=1.0, gamma=1.0)
        for seed in range(10):
            net = random_block(5, 5, 0.5, 0.2, income_range=(0.5, 3.0), seed=seed)
            report = check_assumption_2(generalized_centrality(net, tight), tight)
            np.testing.assert_array_equal(report.passed, report.below_inverse_gamma)

class TestIncomeJacobian:
    def test_matches_finite_differences(self, params):
        for seed in range(100):
            net = random_block(5, 4, 0.5, 0.2, seed=seed)
            analytic = centrality_income_jacobian(net, params).dC_dw
            numeric = finite_difference_jacobian(net, params)
            np.testing.assert_allclose(numeric, analytic, rtol=1e-5, atol=1e-9)

    def test_nonzero_iff_walk_to_shocked_agent(self, chain, params):
        dC = centrality_income_jacobian(chain, params).dC_dw
        H = build_H(chain, params)
        for j in range(chain.J):
            for k in range(chain.J):
                expected = j == k or has_walk(H, j, k)
                assert (dC[j, k] > 0) == expected, (j, k)
        assert dC[0, 1] > 0
        assert dC[1, 0] == 0

    def test_cross_identity_entries_vanish(self, params):
        net = random_block(4, 4, 0.6, 0.6, seed=5)
        dC = centrality_income_jacobian(net, params).dC_dw
        cross = net.labels[:, None] != net.labels[None, :]
        assert not dC[cross].any()

class TestCommunityDensity:
    def test_complete_pairs(self):
        net, structure = build_communities(1, 2, weight=0.5)
        D = community_density(mask_by_identity(net), structure).D
        np.testing.assert_allclose(D, [4.0, 4.0])

    def test_denser_community_has_higher_density(self):
        net, structure = build_communities(1, 3, weight=[0.3, 0.1])
        D = community_density(mask_by_identity(net), structure).D
        assert D[0] > D[1]

    def test_rejects_crossing_links(self, four_agents):
        structure = CommunityStructure(assignment=[0, 1, 2, 3], N=2, size=1, incomes=[1.0] * 4)
        with pytest.raises(PartitionNotDisconnected):
            community_density(mask_by_identity(four_agents), structure)

    def test_group_mean_from_effective_density(self, communities, params):
        net, structure = communities
        identity = centrality_density_identity(net, structure, params)
        for label in (Identity.A, Identity.B):
            mean_C, from_density = identity[label]
            assert mean_C == pytest.approx(from_density, abs=1e-9)

    def test_effective_density_of_empty_community(self, params):
        assert effective_density(np.zeros((2, 2)), 2.0, params) == pytest.approx(2 * (2 / 3) / 2)

class TestCentralitySimple:
    def test_formula_without_check(self):
        check = uniform_community_centrality(np.array([[0.0, 0.5], [0.5, 0.0]]), 1.5)
        np.testing.assert_allclose(check.formula, [3.0, 3.0])
        assert check.agrees

    def test_departure_from_generalized_centrality_is_reported(self, params):
        A = np.array([[0.0, 0.5], [0.5, 0.0]])
        check = uniform_community_centrality(A, 1.0, params, strict=False)
        assert not check.agrees
        assert check.max_gap == pytest.approx(2.0 - 2.0 / 3.0)
        with pytest.raises(CentralityConsistencyError):
            uniform_community_centrality(A, 1.0, params)

    def test_nonuniform_income(self):
        with pytest.raises(NonUniformIncome):
            uniform_community_centrality(np.zeros((2, 2)), [1.0, 2.0])

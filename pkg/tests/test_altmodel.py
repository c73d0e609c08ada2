import numpy as np
import pytest
from statusnet.altmodel import (
    alt_best_response_oracle,
    alt_utility,
    solve_alt,
    solve_quintic_Y,
    status_polynomial,
)
from statusnet.errors import ComparisonInfeasible
from statusnet.generators import random_block
from statusnet.models import AltParams, Network, SolveMethod

pytestmark = pytest.mark.unit

class TestStatusRoot:
    def test_equal_groups(self, alt_params):
        assert solve_quintic_Y(1.0, alt_params) == 1.0

    def test_reciprocal_ratios(self):
        for params in (
            AltParams(alpha=0.5, beta=1.0, gamma=0.5, w=1.0),
            AltParams(alpha=-1.0, beta=2.0, gamma=0.3, w=0.5),
            AltParams(alpha=0.1, beta=1.0, gamma=2.0, w=1.0),
        ):
            for r in np.logspace(-4, 4, 17, base=2.0):
                product = solve_quintic_Y(r, params) * solve_quintic_Y(1.0 / r, params)
                assert product == pytest.approx(1.0, abs=1e-12), (params, r)

    def test_root_residual(self, alt_params):
        for r in np.logspace(-4, 4, 17, base=2.0):
            Y = solve_quintic_Y(r, alt_params)
            assert Y > 0.0
            assert abs(status_polynomial(Y, r, alt_params)) < 1e-12

    def test_root_on_doubling_bracket(self, alt_params):
        # r = 8 puts the root Y = 2 exactly on the second doubling step
        Y = solve_quintic_Y(8.0, alt_params)
        assert Y == pytest.approx(2.0, abs=1e-13)
        assert abs(status_polynomial(Y, 8.0, alt_params)) < 1e-12
        assert Y * solve_quintic_Y(1.0 / 8.0, alt_params) == pytest.approx(1.0, abs=1e-12)

    def test_cube_root_when_gamma_equals_slack(self, alt_params):
        # gamma == 1/w - alpha factors the polynomial as (gamma Y + k)(Y^1.5 - sqrt(r))
        assert alt_params.slack == alt_params.gamma
        for r in (0.25, 2.0, 5.0):
            assert solve_quintic_Y(r, alt_params) == pytest.approx(r ** (1.0 / 3.0), abs=1e-12)

    def test_higher_ratio_raises_status(self, alt_params):
        values = [solve_quintic_Y(r, alt_params) for r in (0.5, 1.0, 2.0, 4.0)]
        assert values == sorted(values)

    def test_rejects_nonpositive_ratio(self, alt_params):
        with pytest.raises(ValueError):
            solve_quintic_Y(0.0, alt_params)

class TestAltParams:
    def test_interior_condition(self):
        with pytest.raises(ValueError):
            AltParams(alpha=1.5, beta=1.0, gamma=0.5, w=1.0)

    def test_slack(self):
        assert AltParams(alpha=0.25, beta=1.0, gamma=0.5, w=2.0).slack == pytest.approx(0.25)

class TestSolveAlt:
    def test_fixture(self, four_agents, alt_params):
        solution = solve_alt(four_agents, alt_params)
        np.testing.assert_allclose(solution.C_bon, [2.0, 2.0, 1.0, 1.0])
        assert solution.Y_A == pytest.approx(2.0 ** (1.0 / 3.0), abs=1e-12)
        assert solution.Y_A * solution.Y_B == pytest.approx(1.0, abs=1e-12)
        Y = solution.Y_A
        np.testing.assert_allclose(solution.x[:2], 2.0 / (Y + 1.0) ** 2, rtol=1e-12)
        np.testing.assert_allclose(solution.R, [0.5 * solution.x[1], 0.5 * solution.x[0], 0.0, 0.0])
        assert np.all(solution.x >= solution.R)

    def test_symmetric_network(self, alt_params):
        G = np.zeros((4, 4))
        G[0, 1] = G[1, 0] = G[2, 3] = G[3, 2] = 0.5
        net = Network(incomes=[1.0] * 4, identities=["A", "A", "B", "B"], G=G)
        solution = solve_alt(net, alt_params)
        assert solution.Y_A == 1.0
        np.testing.assert_allclose(solution.x, 0.25 * 2.0 / (alt_params.gamma + alt_params.slack) ** 2)

    def test_random_networks_are_feasible(self, alt_params):
        for seed in range(10):
            net = random_block(5, 4, 0.4, 0.2, weight=0.1, seed=seed)
            solution = solve_alt(net, alt_params)
            assert np.all(solution.x >= solution.R)
            assert solution.Y_A * solution.Y_B == pytest.approx(1.0, abs=1e-12)
            assert solution.root_residual < 1e-10

    def test_oracle_agrees(self, four_agents, alt_params):
        closed = solve_alt(four_agents, alt_params)
        oracle = alt_best_response_oracle(four_agents, alt_params)
        np.testing.assert_allclose(oracle.x, closed.x, atol=1e-8)
        assert oracle.method is SolveMethod.BEST_RESPONSE
        assert oracle.root_residual < 1e-10

    def test_oracle_from_positive_start(self, four_agents, alt_params):
        closed = solve_alt(four_agents, alt_params)
        oracle = alt_best_response_oracle(four_agents, alt_params, x0=np.array([1.0, 0.2, 0.7, 0.1]))
        np.testing.assert_allclose(oracle.x, closed.x, atol=1e-8)

class TestAltUtility:
    def test_below_reference_point(self, four_agents, alt_params):
        with pytest.raises(ComparisonInfeasible):
            alt_utility(four_agents, alt_params, np.array([0.1, 1.0, 0.5, 0.5]), 0)


class TestAltOracleOnRandomNetworks:
    @pytest.mark.parametrize("seed", range(8))
    def test_agrees_with_closed_form(self, alt_params, seed):
        net = random_block(5, 4, 0.4, 0.2, weight=0.1, seed=seed)
        closed = solve_alt(net, alt_params)
        oracle = alt_best_response_oracle(net, alt_params)
        assert float(np.max(np.abs(oracle.x - closed.x))) <= 1e-8
        assert oracle.Y_A == pytest.approx(closed.Y_A, abs=1e-8)

class TestAltKeyFeatures:
    @pytest.mark.parametrize(
        "params",
        [
            AltParams(alpha=0.5, beta=1.0, gamma=0.5, w=1.0),
            AltParams(alpha=-1.0, beta=2.0, gamma=0.3, w=0.5),
            AltParams(alpha=0.1, beta=1.0, gamma=2.0, w=1.0),
        ],
    )
    def test_status_strictly_increasing_in_ratio(self, params):
        values = [solve_quintic_Y(r, params) for r in np.logspace(-3, 3, 25, base=2.0)]
        assert all(b > a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("seed", range(5))
    def test_linear_in_own_centrality(self, alt_params, seed):
        net = random_block(5, 4, 0.4, 0.2, weight=0.1, seed=seed)
        solution = solve_alt(net, alt_params)
        for label in (True, False):
            group = net.labels == label
            ratio = solution.x[group] / solution.C_bon[group]
            np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)

    def test_denser_own_group_lowers_scale_and_lifts_other_group(self, alt_params):
        """A pair linked with a growing weight, B pair isolated"""
        scales, x_B = [], []
        for weight in (0.0, 0.2, 0.4, 0.6):
            G = np.zeros((4, 4))
            G[0, 1] = G[1, 0] = weight
            solution = solve_alt(Network(incomes=[1.0] * 4, identities=["A", "A", "B", "B"], G=G), alt_params)
            scales.append(solution.x[0] / solution.C_bon[0])
            x_B.append(solution.x[2])
        assert all(b < a for a, b in zip(scales, scales[1:]))
        assert all(b > a for a, b in zip(x_B, x_B[1:]))

    def test_consumption_falls_with_gamma_for_symmetric_groups(self):
        gammas = (0.25, 0.5, 1.0)
        net = Network(incomes=[1.0] * 4, identities=["A", "A", "B", "B"], G=np.zeros((4, 4)))
        x = [solve_alt(net, AltParams(alpha=0.5, beta=1.0, gamma=g, w=1.0)).x[0] for g in gammas]
        assert all(b < a for a, b in zip(x, x[1:]))

    def test_consumption_rises_with_common_income(self):
        incomes = (0.8, 1.0, 1.5)
        net = Network(incomes=[1.0] * 4, identities=["A", "A", "B", "B"], G=np.zeros((4, 4)))
        x = [solve_alt(net, AltParams(alpha=0.5, beta=1.0, gamma=0.5, w=w)).x[0] for w in incomes]
        assert all(b > a for a, b in zip(x, x[1:]))

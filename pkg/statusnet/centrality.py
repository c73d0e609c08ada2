"""Generalized and standard Bonacich centralities, densities and their derivatives."""

from typing import Optional, Sequence, Union
import logging
import numpy as np
from scipy.linalg import lu_factor, lu_solve
from statusnet.config import get_settings
from statusnet.errors import (
    AssumptionOneViolated,
    CentralityConsistencyError,
    NonUniformIncome,
    PartitionNotDisconnected,
    SolveFailed,
    SpectralRadiusViolated,
)
from statusnet.models import (
    AssumptionTwoReport,
    CentralityJacobian,
    CentralityProfile,
    CommunityStructure,
    DensityProfile,
    Identity,
    CommunityFormulaCheck,
    MaskedNetwork,
    ModelParams,
    Network,
    WeightedNetwork,
)
from statusnet.network import (
    as_matrix,
    build_H,
    centrality_seed,
    income_weights,
    mask_by_identity,
    spectral_radius,
)

logger = logging.getLogger(__name__)

def _factor(A: np.ndarray):
    """LU factorization of I - A"""
    n = A.shape[0]
    lu, piv = lu_factor(np.eye(n) - A, check_finite=True)
    if np.any(np.diag(lu) == 0.0):
        raise SolveFailed("I - H is singular")
    return lu, piv

def leontief_solve(A: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve (I - A) X = rhs by LU with partial pivoting"""
    solution = lu_solve(_factor(A), rhs)
    if not np.all(np.isfinite(solution)):
        raise SolveFailed("non-finite solution of (I - H) C = v")
    return solution

def leontief_inverse(A: np.ndarray) -> np.ndarray:
    """(I - A)^{-1} as a dense matrix"""
    return leontief_solve(A, np.eye(A.shape[0]))

def _require_assumption_one(H: np.ndarray, margin: Optional[float]) -> None:
    report = spectral_radius(H, margin=margin)
    if not report.assumption_1_satisfied:
        logger.warning(f"Assumption 1 fails: rho(H) = {report.lambda1:.6g}")
        raise AssumptionOneViolated(
            f"rho(H) = {report.lambda1:.6g} is not below 1 - {report.margin:g}"
        )

def group_means(C: np.ndarray, identities: Sequence[Identity]) -> CentralityProfile:
    labels = np.array([t is Identity.A for t in identities])
    return CentralityProfile(
        C=C,
        C_bar_A=float(C[labels].mean()),
        C_bar_B=float(C[~labels].mean()),
        identities=identities,
    )

def generalized_centrality(
    net: Network, params: ModelParams, margin: Optional[float] = None
) -> CentralityProfile:
    """C = (I - H)^{-1} v with v_k = w_k/(beta*w_k + 1), plus group means"""
    H = build_H(net, params).H
    _require_assumption_one(H, margin)
    C = leontief_solve(H, centrality_seed(net.incomes, params.beta))
    if not np.all(C > 0):
        raise SolveFailed("generalized centrality must be positive")
    return group_means(C, net.identities)

def neumann_centrality(net: Network, params: ModelParams, tol: float = 1e-10, max_terms: int = 100_000) -> np.ndarray:
    """Truncated Neumann series sum_t H^t v, stopped once the geometric tail is below tol"""
    H = build_H(net, params).H
    rho = spectral_radius(H).lambda1
    if rho >= 1.0:
        raise AssumptionOneViolated(f"Neumann series diverges: rho(H) = {rho:.6g}")
    v = centrality_seed(net.incomes, params.beta)
    v_norm = float(np.abs(v).max())
    total = v.copy()
    term = v.copy()
    for t in range(1, max_terms + 1):
        term = H @ term
        total += term
        if rho ** (t + 1) / (1.0 - rho) * v_norm < tol:
            break
    return total

def standard_bonacich(G_hat: Union[MaskedNetwork, np.ndarray], margin: Optional[float] = None) -> np.ndarray:
    """C^bon = (I - Ĝ)^{-1} 1"""
    A = as_matrix(G_hat)
    report = spectral_radius(A, margin=margin)
    if not report.assumption_1_satisfied:
        raise SpectralRadiusViolated(f"rho(G_hat) = {report.lambda1:.6g} is not below 1 - {report.margin:g}")
    return leontief_solve(A, np.ones(A.shape[0]))

def check_disconnected(A: np.ndarray, partition: CommunityStructure) -> None:
    inside = partition.assignment[:, None] == partition.assignment[None, :]
    leaks = np.argwhere((A > 0) & ~inside)
    if leaks.size:
        j, k = leaks[0].tolist()
        raise PartitionNotDisconnected(
            f"link {j}->{k} crosses communities {partition.assignment[j]} and {partition.assignment[k]}", [j, k]
        )

def community_density(G_hat: Union[MaskedNetwork, np.ndarray], partition: CommunityStructure) -> DensityProfile:
    """D_n = sum over j, k in n of (I - Ĝ)^{-1}[j, k]"""
    A = as_matrix(G_hat)
    check_disconnected(A, partition)
    C_bon = standard_bonacich(A)
    D = np.bincount(partition.assignment, weights=C_bon, minlength=partition.n_communities)
    return DensityProfile(D=D)

def effective_density(G_n: Union[MaskedNetwork, np.ndarray], w_n: float, params: ModelParams) -> float:
    """Sum of generalized centralities in a uniform-income community, divided by w_n.

    Makes C_bar_theta = (2/J) * sum_n w_n * D_n exact for any beta; coincides with
    the standard density only where the centrality-simple formula holds.
    """
    A = as_matrix(G_n)
    n = A.shape[0]
    H = income_weights(np.full(n, w_n), params.beta)[:, None] * A
    C = leontief_solve(H, centrality_seed(np.full(n, w_n), params.beta))
    return float(C.sum() / w_n)

def check_assumption_2(profile: CentralityProfile, params: ModelParams) -> AssumptionTwoReport:
    """Per-agent dispersion bound C_j < (alpha/gamma + Z_theta)/(alpha^2 - gamma^2)"""
    a, g = params.alpha, params.gamma
    Z = profile.Z_of_agent()
    bound = (a / g + Z) / (a * a - g * g)
    x_star = (a * a - g * g) / (a + g * Z) * profile.C
    passed = profile.C < bound
    if not np.all(passed):
        logger.warning(f"Assumption 2 fails for agents {np.flatnonzero(~passed).tolist()}")
    return AssumptionTwoReport(bound=bound, passed=passed, below_inverse_gamma=x_star < 1.0 / g)

def centrality_income_jacobian(net: Network, params: ModelParams) -> CentralityJacobian:
    """Analytic dC_j/dw_k.

    Only row k of H and entry k of v depend on w_k, so
    dC/dw_k = M[:, k] * (1 + beta * (Ĝ C)_k) / (beta w_k + 1)^2 with M = (I - H)^{-1}.
    """
    beta = params.beta
    H = build_H(net, params).H
    _require_assumption_one(H, None)
    M = leontief_inverse(H)
    C = M @ centrality_seed(net.incomes, beta)
    G_hat = mask_by_identity(net).G_hat
    scale = (1.0 + beta * (G_hat @ C)) / (beta * net.incomes + 1.0) ** 2
    return CentralityJacobian(dC_dw=M * scale[None, :])

def finite_difference_jacobian(net: Network, params: ModelParams, rel_step: Optional[float] = None) -> np.ndarray:
    """Central-difference dC/dw; step rel_step * max(1, w_k)"""
    rel_step = get_settings().fd_rel_step if rel_step is None else rel_step
    J = net.J
    out = np.empty((J, J))
    for k in range(J):
        h = rel_step * max(1.0, float(net.incomes[k]))
        up = np.array(net.incomes, copy=True)
        down = np.array(net.incomes, copy=True)
        up[k] += h
        down[k] -= h
        C_up = generalized_centrality(net.with_incomes(up), params).C
        C_down = generalized_centrality(net.with_incomes(down), params).C
        out[:, k] = (C_up - C_down) / (2.0 * h)
    return out

def uniform_community_centrality(
    G_n: Union[MaskedNetwork, np.ndarray],
    w_n: Union[float, Sequence[float], np.ndarray],
    params: Optional[ModelParams] = None,
    strict: bool = True,
    tol: Optional[float] = None,
) -> CommunityFormulaCheck:
    """Centrality-simple formula C_j = w_n * sum_k (I - Ĝ_n)^{-1}[j, k].

    With ``params`` the formula is compared against generalized centrality on the same
    community; a gap above ``tol`` raises when ``strict``.
    """
    tol = get_settings().formula_tol if tol is None else tol
    A = as_matrix(G_n)
    n = A.shape[0]
    incomes = np.broadcast_to(np.asarray(w_n, dtype=float), (n,))
    if not np.allclose(incomes, incomes[0], rtol=0.0, atol=0.0):
        raise NonUniformIncome(f"community incomes differ: {sorted(set(incomes.tolist()))}")
    w = float(incomes[0])
    formula = w * standard_bonacich(A)
    if params is None:
        return CommunityFormulaCheck(formula=formula, tolerance=tol)

    H = income_weights(incomes, params.beta)[:, None] * A
    direct = leontief_solve(H, centrality_seed(incomes, params.beta))
    gap = float(np.max(np.abs(formula - direct)))
    check = CommunityFormulaCheck(formula=formula, direct=direct, max_gap=gap, tolerance=tol)
    if not check.agrees:
        logger.warning(f"Centrality-simple formula departs from the generalized centrality by {gap:.3e}")
        if strict:
            raise CentralityConsistencyError(
                f"community formula and generalized centrality differ by {gap:.3e} (tolerance {tol:g})"
            )
    return check

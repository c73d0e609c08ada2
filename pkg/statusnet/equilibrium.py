"""Closed-form equilibrium, prestige extension, utilities and the best-response oracle."""

from typing import Iterable, Optional, Sequence, Tuple, Union
import logging
import numpy as np
from statusnet.centrality import check_assumption_2, generalized_centrality
from statusnet.config import get_settings
from statusnet.errors import AssumptionTwoViolated, DegenerateStatus, NegativeConsumption, NoConvergence
from statusnet.models import (
    EquilibriumSolution,
    Identity,
    ModelKind,
    ModelParams,
    Network,
    PrestigeParams,
    SolveMethod,
)
from statusnet.network import build_H, centrality_seed, mask_by_identity, spectral_radius

logger = logging.getLogger(__name__)

StatusPair = Tuple[float, float]
ArrayLike = Union[float, np.ndarray]

def _labels(identities: Sequence[Identity]) -> np.ndarray:
    return np.array([Identity(t) is Identity.A for t in identities])

def group_status(
    x: np.ndarray, identities: Sequence[Identity], prestige: Optional[PrestigeParams] = None
) -> StatusPair:
    """(Y_A, Y_B) from group mean consumption, prestige-augmented when given"""
    labels = _labels(identities)
    x = np.asarray(x, dtype=float)
    mean_a = float(x[labels].mean())
    mean_b = float(x[~labels].mean())
    if prestige is not None:
        mean_a += prestige.P_A
        mean_b += prestige.P_B
    if mean_a <= 0.0 or mean_b <= 0.0:
        raise DegenerateStatus(f"group status undefined for group means ({mean_a:g}, {mean_b:g})")
    return mean_a / mean_b, mean_b / mean_a

def _status_per_agent(Y: StatusPair, labels: np.ndarray) -> np.ndarray:
    return np.where(labels, Y[0], Y[1])

def reference_points(net: Network, x: np.ndarray) -> np.ndarray:
    """R_j = sum_k Ĝ[j, k] x_k"""
    return mask_by_identity(net).G_hat @ np.asarray(x, dtype=float)

def utilities(
    net: Network,
    params: ModelParams,
    x: np.ndarray,
    prestige: Optional[PrestigeParams] = None,
    Y: Optional[StatusPair] = None,
) -> np.ndarray:
    """Utilities of all agents; Y is recomputed from x unless held fixed"""
    x = np.asarray(x, dtype=float)
    Y = Y if Y is not None else group_status(x, net.identities, prestige)
    Y_j = _status_per_agent(Y, net.labels)
    R = reference_points(net, x)
    a, b, g = params.alpha, params.beta, params.gamma
    return a * x + Y_j - g * x * Y_j - 0.5 * b * (x - R) ** 2 - x ** 2 / (2.0 * net.incomes)

def utility(
    net: Network,
    params: ModelParams,
    x: np.ndarray,
    j: int,
    prestige: Optional[PrestigeParams] = None,
    Y: Optional[StatusPair] = None,
) -> float:
    """Utility of agent j"""
    return float(utilities(net, params, x, prestige, Y)[j])

def _solution(
    net: Network,
    params: ModelParams,
    x: np.ndarray,
    Y: StatusPair,
    method: SolveMethod,
    model: ModelKind,
    prestige: Optional[PrestigeParams],
    a2: Optional[Iterable[bool]] = None,
    C: Optional[np.ndarray] = None,
    residual: Optional[float] = None,
    iterations: int = 0,
) -> EquilibriumSolution:
    if residual is None:
        residual = float(np.max(np.abs(x - best_response(net, params, x, Y)[0])))
    a1 = spectral_radius(build_H(net, params)).assumption_1_satisfied
    if a2 is None and a1:
        profile = generalized_centrality(net, params)
        a2 = check_assumption_2(profile, params).passed
        C = profile.C if C is None else C
    return EquilibriumSolution(
        x=x,
        Y_A=Y[0],
        Y_B=Y[1],
        R=reference_points(net, x),
        u=utilities(net, params, x, prestige, Y),
        method=method,
        residual=residual,
        iterations=iterations,
        model=model,
        a1=a1,
        a2=() if a2 is None else tuple(bool(flag) for flag in a2),
        below_inverse_gamma=tuple(bool(flag) for flag in x < 1.0 / params.gamma),
        C=C,
    )

def closed_form_consumption(
    C: ArrayLike, C_bar_own: ArrayLike, C_bar_other: ArrayLike, params: ModelParams
) -> np.ndarray:
    """(alpha^2 - gamma^2)/(alpha + gamma Z) * C with Z = C_bar_own / C_bar_other"""
    a, g = params.alpha, params.gamma
    Z = np.asarray(C_bar_own, dtype=float) / np.asarray(C_bar_other, dtype=float)
    return (a * a - g * g) / (a + g * Z) * np.asarray(C, dtype=float)

def solve_closed_form(net: Network, params: ModelParams, enforce_assumptions: bool = True) -> EquilibriumSolution:
    """x_j = (alpha^2 - gamma^2)/(alpha + gamma Z_theta) * C_j"""
    a, g = params.alpha, params.gamma
    profile = generalized_centrality(net, params)
    report = check_assumption_2(profile, params)
    if enforce_assumptions and not report.all_passed:
        raise AssumptionTwoViolated(
            f"centrality too dispersed for agents {report.offenders}", report.offenders
        )

    labels = net.labels
    own = np.where(labels, profile.C_bar_A, profile.C_bar_B)
    other = np.where(labels, profile.C_bar_B, profile.C_bar_A)
    x = closed_form_consumption(profile.C, own, other, params)
    Y_A = (a * profile.Z_A + g) / (a + g * profile.Z_A)
    Y_B = (a * profile.Z_B + g) / (a + g * profile.Z_B)
    logger.debug(f"Closed form: Z_A={profile.Z_A:.6g}, Y_A={Y_A:.6g}, Y_B={Y_B:.6g}")
    return _solution(
        net, params, x, (Y_A, Y_B), SolveMethod.CLOSED_FORM, ModelKind.BASE, None, report.passed, C=profile.C
    )

def solve_closed_form_prestige(
    net: Network, params: ModelParams, prestige: PrestigeParams, enforce_assumptions: bool = True
) -> EquilibriumSolution:
    """Closed form with Y_theta = (alpha C_theta + gamma C_-theta + P_theta)/(alpha C_-theta + gamma C_theta + P_-theta)"""
    if prestige.P_A == 0.0 and prestige.P_B == 0.0:
        base = solve_closed_form(net, params, enforce_assumptions)
        return base.model_copy(update={"model": ModelKind.PRESTIGE})

    a, g = params.alpha, params.gamma
    profile = generalized_centrality(net, params)
    ca, cb = profile.C_bar_A, profile.C_bar_B
    Y_A = (a * ca + g * cb + prestige.P_A) / (a * cb + g * ca + prestige.P_B)
    Y_B = (a * cb + g * ca + prestige.P_B) / (a * ca + g * cb + prestige.P_A)
    for label, Y in ((Identity.A, Y_A), (Identity.B, Y_B)):
        if a - g * Y <= 0.0:
            raise NegativeConsumption(
                f"alpha - gamma*Y_{label.value} = {a - g * Y:.6g} <= 0; prestige gap outside model scope",
                net.members(label).tolist(),
            )
    x = (a - g * _status_per_agent((Y_A, Y_B), net.labels)) * profile.C
    return _solution(
        net, params, x, (Y_A, Y_B), SolveMethod.CLOSED_FORM, ModelKind.PRESTIGE, prestige,
        check_assumption_2(profile, params).passed, C=profile.C,
    )

def best_response(
    net: Network, params: ModelParams, x: np.ndarray, Y: StatusPair
) -> Tuple[np.ndarray, np.ndarray]:
    """Clamped best responses to (x, Y), plus the unclamped values"""
    Y_j = _status_per_agent(Y, net.labels)
    raw = centrality_seed(net.incomes, params.beta) * (
        params.alpha - params.gamma * Y_j + params.beta * reference_points(net, x)
    )
    return np.maximum(raw, 0.0), raw

def status_or_seed(x: np.ndarray, net: Network, prestige: Optional[PrestigeParams]) -> StatusPair:
    # out of equilibrium a group may consume nothing; seed with symmetric status
    try:
        return group_status(x, net.identities, prestige)
    except DegenerateStatus:
        return 1.0, 1.0

def best_response_oracle(
    net: Network,
    params: ModelParams,
    prestige: Optional[PrestigeParams] = None,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    damping: Optional[float] = None,
    x0: Optional[np.ndarray] = None,
    enforce_assumptions: bool = True,
) -> EquilibriumSolution:
    """Damped best-response iteration x <- (1-d) x + d BR(x) with Y recomputed every sweep"""
    settings = get_settings()
    tol = settings.oracle_tol if tol is None else tol
    max_iter = settings.oracle_max_iter if max_iter is None else max_iter
    damping = settings.oracle_damping if damping is None else damping
    bound = settings.divergence_bound

    x = np.zeros(net.J) if x0 is None else np.array(x0, dtype=float, copy=True)
    residual = float("inf")
    for iteration in range(max_iter + 1):
        Y = status_or_seed(x, net, prestige)
        br, raw = best_response(net, params, x, Y)
        residual = float(np.max(np.abs(x - br)))
        if residual < tol:
            break
        if iteration == max_iter:
            logger.error(f"Best-response oracle stopped after {max_iter} sweeps, residual {residual:.3e}")
            raise NoConvergence(
                f"best-response iteration did not converge in {max_iter} sweeps (residual {residual:.3e})",
                residual=residual,
                iterations=max_iter,
            )
        x = (1.0 - damping) * x + damping * br
        if not np.all(np.isfinite(x)) or float(np.max(np.abs(x))) > bound:
            logger.error(f"Best-response oracle diverged at sweep {iteration + 1}")
            raise NoConvergence(
                f"best-response iteration diverged (|x| > {bound:g}) at sweep {iteration + 1}",
                residual=residual,
                iterations=iteration + 1,
            )

    if enforce_assumptions and np.any(raw < 0.0):
        offenders = np.flatnonzero(raw < 0.0).tolist()
        raise NegativeConsumption(f"non-negativity constraint binds at equilibrium for agents {offenders}", offenders)

    logger.debug(f"Best-response oracle converged in {iteration} sweeps, residual {residual:.3e}")
    Y = group_status(x, net.identities, prestige)
    model = ModelKind.BASE if prestige is None else ModelKind.PRESTIGE
    return _solution(
        net, params, x, Y, SolveMethod.BEST_RESPONSE, model, prestige, residual=residual, iterations=iteration,
    )

def unilateral_deviation_gain(
    net: Network,
    params: ModelParams,
    solution: EquilibriumSolution,
    j: int,
    deltas: Iterable[float],
    prestige: Optional[PrestigeParams] = None,
) -> float:
    """Largest utility gain for agent j from deviating by each delta, group status held fixed"""
    Y = (solution.Y_A, solution.Y_B)
    base = utility(net, params, solution.x, j, prestige, Y)
    best = -np.inf
    for delta in deltas:
        x = np.array(solution.x, copy=True)
        x[j] += delta
        if x[j] < 0.0:
            continue
        best = max(best, utility(net, params, x, j, prestige, Y) - base)
    return float(best)

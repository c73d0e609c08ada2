"""Square-root comparison variant with common income and linear cost.

Only Ĝ and the identities of ``net`` matter here; every agent has income ``params.w``.
"""

from typing import Optional
import logging
import math
import numpy as np
from scipy.optimize import bisect, newton
from statusnet.centrality import standard_bonacich
from statusnet.config import get_settings
from statusnet.equilibrium import group_status, reference_points, status_or_seed
from statusnet.errors import ComparisonInfeasible, NoConvergence, RootNotBracketed
from statusnet.models import AltEquilibrium, AltParams, Identity, Network, SolveMethod
from statusnet.network import mask_by_identity

logger = logging.getLogger(__name__)

def status_polynomial(Y: float, r: float, params: AltParams) -> float:
    """F(Y) = gamma Y^(5/2) + k Y^(3/2) - k sqrt(r) Y - gamma sqrt(r), k = 1/w - alpha"""
    Y = max(Y, 0.0)
    g, k, s = params.gamma, params.slack, math.sqrt(r)
    return g * Y ** 2.5 + k * Y ** 1.5 - k * s * Y - g * s

def _status_polynomial_prime(Y: float, r: float, params: AltParams) -> float:
    Y = max(Y, 0.0)
    g, k, s = params.gamma, params.slack, math.sqrt(r)
    return 2.5 * g * Y ** 1.5 + 1.5 * k * Y ** 0.5 - k * s

def solve_quintic_Y(r: float, params: AltParams) -> float:
    """Unique nonnegative root of F: bracket by doubling, bisect, then polish with Newton"""
    if not r > 0:
        raise ValueError(f"centrality ratio must be positive, got {r}")
    if r == 1.0:
        return 1.0
    settings = get_settings()

    def F(Y: float) -> float:
        return status_polynomial(Y, r, params)

    hi = 1.0
    for _ in range(settings.root_max_iter):
        if F(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise RootNotBracketed(f"F stays non-positive up to Y = {hi:g} for r = {r:g}")

    rough = bisect(F, 0.0, hi, xtol=settings.root_bisect_tol, maxiter=settings.root_max_iter)
    try:
        root = newton(
            F,
            rough,
            fprime=lambda Y: _status_polynomial_prime(Y, r, params),
            tol=settings.root_newton_tol,
            maxiter=settings.root_max_iter,
        )
    except RuntimeError:
        logger.debug(f"Newton polish failed for r={r:g}; keeping bisection root")
        root = rough
    # the doubling bracket may land exactly on the root, so hi itself is admissible
    if not 0.0 < root <= hi * (1.0 + 1e-12) or abs(F(root)) > abs(F(rough)):
        root = rough
    logger.debug(f"Status root for r={r:.6g}: Y={root:.15g}, |F|={abs(F(root)):.3e}")
    return float(root)

def _consumption_scale(Y: np.ndarray, params: AltParams) -> np.ndarray:
    """(beta^2/4) (gamma Y - alpha + 1/w)^(-2)"""
    return params.beta ** 2 / 4.0 * (params.gamma * Y + params.slack) ** -2

def _check_marginal_condition(Y_A: float, Y_B: float, params: AltParams) -> None:
    for label, Y in ((Identity.A, Y_A), (Identity.B, Y_B)):
        margin = params.gamma * Y + params.slack
        if margin <= 0.0:
            raise ComparisonInfeasible(f"gamma*Y_{label.value} - alpha + 1/w = {margin:.6g} <= 0; no best response")

def _check_feasible(x: np.ndarray, R: np.ndarray, tol: float = 1e-12) -> None:
    short = np.flatnonzero(x < R - tol * np.maximum(1.0, np.abs(R)))
    if short.size:
        raise ComparisonInfeasible(f"consumption below the reference point for agents {short.tolist()}", short.tolist())

def solve_alt(net: Network, params: AltParams) -> AltEquilibrium:
    """Closed form: Y_A from the status root, x_j = (beta^2/4)(gamma Y - alpha + 1/w)^(-2) C^bon_j"""
    G_hat = mask_by_identity(net).G_hat
    C_bon = standard_bonacich(G_hat)
    labels = net.labels
    r = float(C_bon[labels].mean() / C_bon[~labels].mean())
    Y_A = solve_quintic_Y(r, params)
    Y_B = 1.0 / Y_A
    _check_marginal_condition(Y_A, Y_B, params)

    x = _consumption_scale(np.where(labels, Y_A, Y_B), params) * C_bon
    R = G_hat @ x
    _check_feasible(x, R)
    return AltEquilibrium(
        x=x,
        Y_A=Y_A,
        Y_B=Y_B,
        C_bon=C_bon,
        R=R,
        root_residual=abs(status_polynomial(Y_A, r, params)),
    )

def alt_best_response_oracle(
    net: Network,
    params: AltParams,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    damping: Optional[float] = None,
    x0: Optional[np.ndarray] = None,
) -> AltEquilibrium:
    """x <- (1-d) x + d (R(x) + (beta^2/4)(gamma Y(x) - alpha + 1/w)^(-2)); residual reported as root_residual"""
    settings = get_settings()
    tol = settings.oracle_tol if tol is None else tol
    max_iter = settings.oracle_max_iter if max_iter is None else max_iter
    damping = settings.oracle_damping if damping is None else damping
    bound = settings.divergence_bound

    G_hat = mask_by_identity(net).G_hat
    C_bon = standard_bonacich(G_hat)
    labels = net.labels
    x = np.zeros(net.J) if x0 is None else np.array(x0, dtype=float, copy=True)
    residual = float("inf")
    for iteration in range(max_iter + 1):
        Y_A, Y_B = status_or_seed(x, net, None)
        br = reference_points(net, x) + _consumption_scale(np.where(labels, Y_A, Y_B), params)
        residual = float(np.max(np.abs(x - br)))
        if residual < tol:
            break
        if iteration == max_iter:
            raise NoConvergence(
                f"alt best-response iteration did not converge in {max_iter} sweeps (residual {residual:.3e})",
                residual=residual,
                iterations=max_iter,
            )
        x = (1.0 - damping) * x + damping * br
        if not np.all(np.isfinite(x)) or float(np.max(np.abs(x))) > bound:
            raise NoConvergence(f"alt best-response iteration diverged at sweep {iteration + 1}", residual, iteration + 1)

    logger.debug(f"Alt oracle converged in {iteration} sweeps, residual {residual:.3e}")
    Y_A, Y_B = status_or_seed(x, net, None)
    _check_marginal_condition(Y_A, Y_B, params)
    R = G_hat @ x
    _check_feasible(x, R)
    return AltEquilibrium(
        x=x,
        Y_A=Y_A,
        Y_B=Y_B,
        C_bon=C_bon,
        R=R,
        root_residual=residual,
        method=SolveMethod.BEST_RESPONSE,
        iterations=iteration,
    )

def alt_utility(net: Network, params: AltParams, x: np.ndarray, j: int) -> float:
    """alpha x_j + Y - gamma x_j Y + beta sqrt(x_j - R_j) - x_j/w; defined only for x_j >= R_j"""
    x = np.asarray(x, dtype=float)
    R = reference_points(net, x)
    gap = float(x[j] - R[j])
    if gap < 0.0:
        raise ComparisonInfeasible(f"agent {j} consumes below its reference point", [j])
    Y_A, Y_B = group_status(x, net.identities)
    Y = Y_A if net.identities[j] is Identity.A else Y_B
    return float(params.alpha * x[j] + Y - params.gamma * x[j] * Y + params.beta * math.sqrt(gap) - x[j] / params.w)

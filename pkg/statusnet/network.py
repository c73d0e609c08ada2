"""Identity-masked and income-weighted networks, homophily, walks, spectral radius."""

from typing import Optional, Set, Union
import logging
import numpy as np
import networkx as nx
from statusnet.config import get_settings
from statusnet.errors import IsolatedAgent, LinkAlreadyExists, NoSuchLink, PowerIterationDiverged, SelfLink
from statusnet.models import (
    HomophilyDelta,
    Identity,
    MaskedNetwork,
    ModelParams,
    Network,
    SpectralReport,
    SwapResult,
    WeightedNetwork,
)

logger = logging.getLogger(__name__)

MatrixLike = Union[MaskedNetwork, WeightedNetwork, np.ndarray]

def as_matrix(M: MatrixLike) -> np.ndarray:
    """Raw matrix behind any of the network wrappers"""
    if isinstance(M, MaskedNetwork):
        return M.G_hat
    if isinstance(M, WeightedNetwork):
        return M.H
    return np.asarray(M, dtype=float)

def same_identity(net: Network) -> np.ndarray:
    """Boolean J x J matrix, True where theta_j == theta_k"""
    labels = net.labels
    return labels[:, None] == labels[None, :]

def mask_by_identity(net: Network) -> MaskedNetwork:
    """Erase every cross-identity link"""
    return MaskedNetwork(G_hat=np.where(same_identity(net), net.G, 0.0))

def income_weights(incomes: np.ndarray, beta: float) -> np.ndarray:
    """beta*w/(beta*w + 1), the row scaling that turns Ĝ into H"""
    return beta * incomes / (beta * incomes + 1.0)

def centrality_seed(incomes: np.ndarray, beta: float) -> np.ndarray:
    """w/(beta*w + 1), the t = 0 term of generalized centrality"""
    return incomes / (beta * incomes + 1.0)

def build_H(net: Network, params: ModelParams) -> WeightedNetwork:
    """Income-weighted network H[j, k] = beta*w_j/(beta*w_j + 1) * Ĝ[j, k]"""
    G_hat = mask_by_identity(net).G_hat
    return WeightedNetwork(H=income_weights(net.incomes, params.beta)[:, None] * G_hat)

def spectral_radius(
    M: MatrixLike,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    margin: Optional[float] = None,
    fallback: bool = True,
) -> SpectralReport:
    """Largest eigenvalue modulus by power iteration from the all-ones vector.

    Bipartite structure (stars, even rings) carries both +lambda and -lambda, so
    the iterate flips between two vectors; those settle on A^2 instead and the
    square root of its Rayleigh quotient is reported. Other periodic structure
    stalls and goes to the dense eigensolver unless ``fallback`` is False.
    """
    settings = get_settings()
    tol = settings.power_tol if tol is None else tol
    max_iter = settings.power_max_iter if max_iter is None else max_iter
    margin = settings.assumption_margin if margin is None else margin

    A = as_matrix(M)
    n = A.shape[0]
    x = np.ones(n) / np.sqrt(n)
    y = A @ x
    lam = 0.0
    residual = float("inf")

    for iteration in range(1, max_iter + 1):
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            # nilpotent: every walk dies out
            return SpectralReport(lambda1=0.0, iterations=iteration, converged=True, residual=0.0, margin=margin)
        lam = norm
        x = y / norm
        y = A @ x
        residual = float(np.linalg.norm(y - lam * x))
        if residual < tol * max(1.0, lam):
            logger.debug(f"Power iteration converged: lambda1={lam:.12g} after {iteration} iterations")
            return SpectralReport(
                lambda1=lam, iterations=iteration, converged=True, residual=residual, margin=margin
            )
        z = A @ y
        mu = float(x @ z)
        if mu > 0.0:
            flip_residual = float(np.linalg.norm(z - mu * x))
            if flip_residual < tol * max(1.0, mu):
                logger.debug(f"Power iterate flips sign each step: lambda1={np.sqrt(mu):.12g} after {iteration} iterations")
                return SpectralReport(
                    lambda1=float(np.sqrt(mu)),
                    iterations=iteration,
                    converged=True,
                    residual=flip_residual,
                    method="power_iteration_squared",
                    margin=margin,
                )

    if not fallback:
        raise PowerIterationDiverged(
            f"power iteration did not converge in {max_iter} iterations (residual {residual:.3e})"
        )

    logger.debug(f"Power iteration stalled (residual {residual:.3e}); using dense eigensolver")
    eigenvalues, eigenvectors = np.linalg.eig(A)
    idx = int(np.argmax(np.abs(eigenvalues)))
    v = eigenvectors[:, idx]
    dense_residual = float(np.linalg.norm(A @ v - eigenvalues[idx] * v))
    return SpectralReport(
        lambda1=float(np.abs(eigenvalues[idx])),
        iterations=max_iter,
        converged=True,
        residual=dense_residual,
        method="dense_eig",
        margin=margin,
    )

def homophily_index(net: Network, j: int) -> float:
    """Share of j's outgoing link weight that stays within j's identity"""
    row = net.G[j]
    total = float(row.sum())
    if total <= 0.0:
        raise IsolatedAgent(f"agent {j} has no outgoing links", [j])
    within = float(row[net.members(net.identities[j])].sum())
    return within / total

def group_homophily(net: Network, label: Identity) -> float:
    """Mean homophily index over the group's agents that have links"""
    values = [homophily_index(net, j) for j in net.members(label) if net.G[j].sum() > 0]
    return float(np.mean(values)) if values else float("nan")

def classify_swap(net: Network, j: int, k: int, l: int) -> HomophilyDelta:
    """Homophily direction of moving j's link from k to l"""
    own = net.identities[j]
    to_same = net.identities[l] is own
    from_same = net.identities[k] is own
    if to_same and not from_same:
        return HomophilyDelta.RAISING
    if from_same and not to_same:
        return HomophilyDelta.LOWERING
    return HomophilyDelta.NEUTRAL

def swap_link(net: Network, j: int, k: int, l: int) -> SwapResult:
    """Move the weight of link j->k onto the absent link j->l"""
    if l == j:
        raise SelfLink(f"cannot move a link of agent {j} onto itself", [j])
    if net.G[j, k] <= 0.0:
        raise NoSuchLink(f"agent {j} has no link to {k}", [j, k])
    if k == l or net.G[j, l] > 0.0:
        raise LinkAlreadyExists(f"agent {j} already links to {l}", [j, l])

    G = np.array(net.G, copy=True)
    G[j, l] = G[j, k]
    G[j, k] = 0.0
    swapped = net.with_links(G)

    own = net.identities[j]
    masked_changed = net.identities[k] is own or net.identities[l] is own
    return SwapResult(
        network=swapped,
        delta=classify_swap(net, j, k, l),
        homophily_before=homophily_index(net, j),
        homophily_after=homophily_index(swapped, j),
        masked_changed=masked_changed,
    )

def to_digraph(M: MatrixLike) -> nx.DiGraph:
    """Directed graph on the positive entries of M"""
    A = as_matrix(M)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(A.shape[0]))
    rows, cols = np.nonzero(A > 0)
    graph.add_edges_from(zip(rows.tolist(), cols.tolist()))
    return graph

def has_walk(M: MatrixLike, source: int, target: int, graph: Optional[nx.DiGraph] = None) -> bool:
    """True iff a directed walk of length >= 1 leads from source to target"""
    graph = graph if graph is not None else to_digraph(M)
    if source != target:
        return nx.has_path(graph, source, target)
    return any(nx.has_path(graph, nxt, target) for nxt in graph.successors(source))

def reachable_from(M: MatrixLike, source: int) -> Set[int]:
    """Agents reachable from source by a walk of length >= 1"""
    graph = to_digraph(M)
    reached = set(nx.descendants(graph, source))
    if has_walk(M, source, source, graph):
        reached.add(source)
    return reached

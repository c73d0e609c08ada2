"""Seeded network generators: community topologies and a two-identity random block model."""

from typing import Callable, Optional, Sequence, Tuple
import logging
import numpy as np
import networkx as nx
from statusnet.config import get_settings
from statusnet.errors import GenerationFailed
from statusnet.models import Identity, Network, Topology
from statusnet.network import income_weights, spectral_radius

logger = logging.getLogger(__name__)

def make_rng(seed: int) -> np.random.Generator:
    """Portable generator: PCG64 gives the same stream on every platform"""
    return np.random.Generator(np.random.PCG64(seed))

def community_links(topology: Topology, size: int, weight: float) -> np.ndarray:
    """Symmetric link matrix of one community; star and ring are strongly connected for size >= 2"""
    topology = Topology(topology)
    if size == 1:
        return np.zeros((1, 1))
    if topology is Topology.COMPLETE:
        graph = nx.complete_graph(size)
    elif topology is Topology.RING:
        graph = nx.cycle_graph(size)
    else:
        # star_graph(n) has n leaves around hub 0; undirected edges give the backlinks
        graph = nx.star_graph(size - 1)
    return weight * nx.to_numpy_array(graph, nodelist=range(size), weight=None)

def rescale_to_target(
    G: np.ndarray,
    radius: Callable[[np.ndarray], float],
    target: Optional[float] = None,
    max_attempts: Optional[int] = None,
) -> Tuple[np.ndarray, int]:
    """Shrink all weights by 0.9 until radius(G) <= target"""
    settings = get_settings()
    target = settings.generator_spectral_target if target is None else target
    max_attempts = settings.generator_max_rescale if max_attempts is None else max_attempts

    G = np.array(G, dtype=float, copy=True)
    for attempt in range(max_attempts + 1):
        rho = radius(G)
        if rho <= target:
            if attempt:
                logger.info(f"Rescaled link weights {attempt} times to reach rho = {rho:.4g}")
            return G, attempt
        G *= 0.9
    raise GenerationFailed(f"spectral radius still above {target} after {max_attempts} rescalings")

def random_block(
    J_A: int,
    J_B: int,
    p_within: float,
    p_cross: float,
    weight: float = 0.2,
    income_range: Tuple[float, float] = (0.5, 2.0),
    beta: float = 1.0,
    seed: int = 0,
    target: Optional[float] = None,
) -> Network:
    """Two-identity stochastic block network with uniform incomes in income_range.

    Links are drawn independently per ordered pair with probability p_within
    (same identity) or p_cross, each carrying ``weight``; weights are then
    scaled down until rho(H) <= target.
    """
    if J_A < 1 or J_B < 1:
        raise GenerationFailed("both identity groups need at least one agent")
    rng = make_rng(seed)
    J = J_A + J_B
    identities: Sequence[Identity] = [Identity.A] * J_A + [Identity.B] * J_B
    low, high = income_range
    incomes = rng.uniform(low, high, size=J)

    labels = np.array([t is Identity.A for t in identities])
    same = labels[:, None] == labels[None, :]
    p = np.where(same, p_within, p_cross)
    G = np.where(rng.random((J, J)) < p, weight, 0.0)
    np.fill_diagonal(G, 0.0)

    rows = income_weights(incomes, beta)[:, None]

    def radius(links: np.ndarray) -> float:
        return spectral_radius(rows * np.where(same, links, 0.0)).lambda1

    G, _ = rescale_to_target(G, radius, target)
    logger.debug(f"random_block: J={J}, links={int(np.count_nonzero(G))}, seed={seed}")
    return Network(incomes=incomes, identities=identities, G=G)

"""Comparative statics: income decomposition, N-bar, communities shocks, link swaps, prestige."""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging
import math
import numpy as np
from statusnet.centrality import (
    centrality_income_jacobian,
    check_disconnected,
    generalized_centrality,
)
from statusnet.config import get_settings
from statusnet.equilibrium import closed_form_consumption, solve_closed_form, solve_closed_form_prestige
from statusnet.errors import NLessThanNbar, PremiseError, ZeroDerivative
from statusnet.models import (
    CommunityStructure,
    CompStatReport,
    ExperimentReport,
    HomophilyDelta,
    Identity,
    ModelParams,
    NbarReport,
    Network,
    PrestigeParams,
    SignCheck,
)
from statusnet.network import mask_by_identity, swap_link

logger = logging.getLogger(__name__)

def sign_tolerance() -> float:
    """Deltas smaller than this count as "no effect" in sign checks"""
    return 10.0 * get_settings().oracle_tol

def sign_ok(delta: float, expected: int, tol: float) -> bool:
    """Only a move of more than tol against the expected direction is a violation"""
    if expected == 0:
        return abs(delta) <= tol
    return expected * delta >= -tol

def check_row(
    experiment_id: str,
    agent: int,
    identity: Identity,
    before: float,
    after: float,
    expected: int,
    tol: float,
    community: int = -1,
    extra: Optional[Dict[str, float]] = None,
) -> SignCheck:
    delta = after - before
    return SignCheck(
        experiment_id=experiment_id,
        agent_id=agent,
        identity=identity,
        community=community,
        baseline_x=before,
        shocked_x=after,
        delta=delta,
        expected_sign=expected,
        sign_ok=sign_ok(delta, expected, tol),
        extra=extra or {},
    )

def summarize(rows: Sequence[SignCheck], **extra) -> Dict[str, object]:
    return {"violations": sum(1 for r in rows if not r.sign_ok), "checks": len(rows), **extra}

# Income decomposition

def slutsky_decomposition(
    net: Network,
    params: ModelParams,
    j: int,
    k: int,
    rel_step: Optional[float] = None,
    enforce_assumptions: bool = True,
) -> CompStatReport:
    """Split dx*_j/dw_k into the own-centrality channel and the group-average channel.

    The total is a central finite difference of the closed form; the channels
    come from the analytic centrality Jacobian. For cross-identity pairs the
    own channel vanishes and the effect runs through the other group's mean.
    """
    rel_step = get_settings().fd_rel_step if rel_step is None else rel_step
    a, g = params.alpha, params.gamma
    base = solve_closed_form(net, params, enforce_assumptions)
    profile = generalized_centrality(net, params)
    dC = centrality_income_jacobian(net, params).dC_dw

    theta = net.identities[j]
    own, other = net.members(theta), net.members(theta.other)
    mean_own, mean_other = profile.mean(theta), profile.mean(theta.other)
    Z = mean_own / mean_other
    d_mean_own = float(dC[own, k].mean())
    d_mean_other = float(dC[other, k].mean())
    dZ = d_mean_own / mean_other - mean_own * d_mean_other / mean_other ** 2

    own_channel = (a * a - g * g) / (a + g * Z) * float(dC[j, k])
    group_channel = -g * float(base.x[j]) / (a + g * Z) * dZ

    h = rel_step * max(1.0, float(net.incomes[k]))
    up = np.array(net.incomes, copy=True)
    down = np.array(net.incomes, copy=True)
    up[k] += h
    down[k] -= h
    x_up = solve_closed_form(net.with_incomes(up), params, enforce_assumptions).x[j]
    x_down = solve_closed_form(net.with_incomes(down), params, enforce_assumptions).x[j]
    total = float((x_up - x_down) / (2.0 * h))

    logger.debug(f"dx_{j}/dw_{k}: total={total:.6g}, own={own_channel:.6g}, group={group_channel:.6g}")
    return CompStatReport(
        target=j,
        shocked=k,
        step=h,
        total=total,
        own_channel=own_channel,
        group_channel=group_channel,
        cross_identity=net.identities[k] is not theta,
    )

# Communities

def n_bar(
    net: Network, structure: CommunityStructure, params: ModelParams, enforce_assumptions: bool = True
) -> NbarReport:
    """Smallest N making every same-community income derivative dx*_j/dw_k strictly positive.

    Evaluates gamma/C_bar_{-theta} * 1/(alpha^2 - gamma^2) * (dC^n_theta/dw_k)/(dC_j/dw_k) * x*_j
    over all same-community pairs; N-bar is the smallest integer strictly above the maximum.
    """
    a, g = params.alpha, params.gamma
    check_disconnected(mask_by_identity(net).G_hat, structure)
    profile = generalized_centrality(net, params)
    dC = centrality_income_jacobian(net, params).dC_dw
    x = solve_closed_form(net, params, enforce_assumptions).x

    rhs: Dict[str, float] = {}
    skipped: List[Tuple[int, int]] = []
    binding: Optional[Tuple[int, int]] = None
    worst = -math.inf
    for n in range(structure.n_communities):
        members = structure.agents(n)
        mean_other = profile.mean(structure.identity(n).other)
        for j in members.tolist():
            for k in members.tolist():
                dC_jk = float(dC[j, k])
                if dC_jk <= 0.0:
                    logger.debug(f"Skipping pair ({j}, {k}): dC_j/dw_k = 0")
                    skipped.append((j, k))
                    continue
                d_mean_n = float(dC[members, k].mean())
                value = g / mean_other / (a * a - g * g) * d_mean_n / dC_jk * float(x[j])
                rhs[f"{j},{k}"] = value
                if value > worst:
                    worst, binding = value, (j, k)

    if binding is None:
        raise ZeroDerivative("no same-community pair has a nonzero centrality derivative")
    N_bar = max(1, math.floor(worst) + 1)
    logger.info(f"N_bar = {N_bar} (binding pair {binding}, rhs {worst:.6g})")
    return NbarReport(N_bar=N_bar, binding_pair=binding, rhs_values=rhs, skipped_pairs=skipped)

def _raise_community_income(
    net: Network, structure: CommunityStructure, community: int, epsilon: float
) -> Tuple[Network, CommunityStructure]:
    incomes = np.array(structure.incomes, copy=True)
    incomes[community] += epsilon
    shocked = structure.with_incomes(incomes)
    return net.with_incomes(shocked.agent_incomes()), shocked

def prop2_experiment(
    net: Network,
    structure: CommunityStructure,
    params: ModelParams,
    shocked_community: int,
    epsilon: Optional[float] = None,
    income_variant: float = 1.0,
    enforce_assumptions: bool = True,
) -> ExperimentReport:
    """Raise the incomes of one community and check the sign claims for every agent.

    Besides the three direct sign claims, the first other community of each identity is
    rerun with its income scaled by ``1 + income_variant``: its agents must then react
    more strongly to the same shock. The variant is halved while the richer instance
    fails a premise, and the variant actually used is reported per rerun community.
    """
    settings = get_settings()
    if epsilon is None:
        epsilon = settings.experiment_epsilon_share * float(structure.incomes[shocked_community])
    tol = sign_tolerance()
    nbar = n_bar(net, structure, params, enforce_assumptions)
    if structure.N <= nbar.N_bar:
        raise NLessThanNbar(
            f"N = {structure.N} communities per identity does not exceed N_bar = {nbar.N_bar}",
            list(nbar.binding_pair),
        )

    theta = structure.identity(shocked_community)
    shocked_net, _ = _raise_community_income(net, structure, shocked_community, epsilon)
    before = solve_closed_form(net, params, enforce_assumptions).x
    after = solve_closed_form(shocked_net, params, enforce_assumptions).x

    rows: List[SignCheck] = []
    for agent in range(net.J):
        community = int(structure.assignment[agent])
        label = net.identities[agent]
        if label is not theta:
            claim, expected = "iii", 1
        elif community == shocked_community:
            claim, expected = "ii", 1
        else:
            claim, expected = "i", -1
        rows.append(
            check_row(
                f"prop2-{claim}", agent, label, float(before[agent]), float(after[agent]), expected, tol, community
            )
        )

    variants: Dict[str, Optional[float]] = {}
    for variant_community in _variant_communities(structure, shocked_community):
        variant_rows, variants[str(variant_community)] = _income_variant_rows(
            net, structure, params, shocked_community, variant_community, epsilon, income_variant, before, after,
            enforce_assumptions,
        )
        rows.extend(variant_rows)

    report = ExperimentReport(
        experiment_id=f"prop2:{shocked_community}",
        kind="prop2",
        rows=rows,
        summary=summarize(rows, N_bar=nbar.N_bar, epsilon=epsilon, income_variants=variants),
    )
    logger.info(f"prop2 on community {shocked_community}: {report.violations} violations / {report.checks} checks")
    return report

def _variant_communities(structure: CommunityStructure, shocked: int) -> List[int]:
    """First community of each identity other than the shocked one"""
    communities = []
    for label in (Identity.A, Identity.B):
        candidates = [n for n in structure.communities_of(label) if n != shocked]
        if candidates:
            communities.append(candidates[0])
    return communities

_VARIANT_HALVINGS = 6

def _income_variant_rows(
    net: Network,
    structure: CommunityStructure,
    params: ModelParams,
    shocked: int,
    variant_community: int,
    epsilon: float,
    income_variant: float,
    before: np.ndarray,
    after: np.ndarray,
    enforce_assumptions: bool,
) -> Tuple[List[SignCheck], Optional[float]]:
    """Rows comparing a community's response to the shock with and without a richer version of it.

    The income variant is halved until the richer instance still meets the
    premises; when no admissible variant is found the community yields no rows.
    """
    variant = income_variant
    for _ in range(_VARIANT_HALVINGS + 1):
        incomes = np.array(structure.incomes, copy=True)
        incomes[variant_community] *= 1.0 + variant
        richer = structure.with_incomes(incomes)
        richer_net = net.with_incomes(richer.agent_incomes())
        richer_shocked, _ = _raise_community_income(richer_net, richer, shocked, epsilon)
        try:
            r_before = solve_closed_form(richer_net, params, enforce_assumptions).x
            r_after = solve_closed_form(richer_shocked, params, enforce_assumptions).x
            break
        except PremiseError as exc:
            logger.debug(f"income variant {variant:g} on community {variant_community} fails a premise: {exc}")
            variant /= 2.0
    else:
        logger.warning(f"no admissible income variant for community {variant_community}; skipped")
        return [], None

    rows = []
    for agent in structure.agents(variant_community).tolist():
        impact = abs(float(after[agent] - before[agent])) / epsilon
        richer_impact = abs(float(r_after[agent] - r_before[agent])) / epsilon
        rows.append(
            check_row(
                "prop2-iv", agent, net.identities[agent], impact, richer_impact, 1, 0.0, variant_community,
                extra={"income": float(structure.incomes[variant_community]), "richer_income": float(incomes[variant_community])},
            )
        )
    return rows, variant

# Link swaps

_SWAP_SIGN = {HomophilyDelta.RAISING: 1, HomophilyDelta.LOWERING: -1, HomophilyDelta.NEUTRAL: 0}

def _sign(value: float, tol: float) -> int:
    return 0 if abs(value) <= tol else int(np.sign(value))

def homophily_swap_effect(
    net: Network, params: ModelParams, swap: Tuple[int, int, int], enforce_assumptions: bool = True
) -> ExperimentReport:
    """Move j's link from k to l; centralities in j's group move with homophily.

    A neutral swap among three same-identity agents rewires Ĝ, so no centrality sign
    is asserted for it; every other neutral swap must leave everything unchanged.

    Consumption rows follow the closed form's monotonicity: the other identity moves
    with C̄ of j's group. In j's group x_m rises with C_m and falls with the group
    mean; when both move the same way the formula itself decides the direction.
    """
    j, k, l = swap
    tol = sign_tolerance()
    result = swap_link(net, j, k, l)
    before = generalized_centrality(net, params)
    after = generalized_centrality(result.network, params)
    x_before = solve_closed_form(net, params, enforce_assumptions).x
    x_after = solve_closed_form(result.network, params, enforce_assumptions).x

    theta = net.identities[j]
    swap_id = f"{j}-{k}-{l}"
    means_before = (before.C_bar_A, before.C_bar_B) if theta is Identity.A else (before.C_bar_B, before.C_bar_A)
    means_after = (after.C_bar_A, after.C_bar_B) if theta is Identity.A else (after.C_bar_B, after.C_bar_A)
    mean_sign = _sign(means_after[0] - means_before[0], tol)
    expected_group = _SWAP_SIGN[result.delta]

    rows = []
    for m in range(net.J):
        label = net.identities[m]
        delta_C = float(after.C[m] - before.C[m])
        expected = expected_group if label is theta else 0
        ok = sign_ok(delta_C, expected, tol)
        if result.delta is HomophilyDelta.NEUTRAL and result.masked_changed and label is theta:
            ok = True
        rows.append(
            SignCheck(
                experiment_id=f"swap-C:{swap_id}",
                agent_id=m,
                identity=label,
                baseline_x=float(before.C[m]),
                shocked_x=float(after.C[m]),
                delta=delta_C,
                expected_sign=expected,
                sign_ok=ok,
                extra={"x_before": float(x_before[m]), "x_after": float(x_after[m])},
            )
        )

    for m in range(net.J):
        label = net.identities[m]
        if label is not theta:
            expected = mean_sign
        else:
            own_sign = _sign(float(after.C[m] - before.C[m]), tol)
            if own_sign == 0 or mean_sign == 0 or own_sign != mean_sign:
                expected = own_sign or -mean_sign
            else:
                predicted = closed_form_consumption(after.C[m], *means_after, params) - closed_form_consumption(
                    before.C[m], *means_before, params
                )
                expected = _sign(float(predicted), tol)
        rows.append(
            check_row(
                f"swap-x:{swap_id}", m, label, float(x_before[m]), float(x_after[m]), expected, tol,
                extra={"delta_C": float(after.C[m] - before.C[m]), "delta_C_bar": float(means_after[0] - means_before[0])},
            )
        )

    return ExperimentReport(
        experiment_id=f"swap:{swap_id}",
        kind="homophily_swap",
        rows=rows,
        summary=summarize(
            rows,
            delta=result.delta.value,
            masked_changed=result.masked_changed,
            homophily_before=result.homophily_before,
            homophily_after=result.homophily_after,
        ),
    )

# Prestige

def own_income_slope(
    net: Network,
    params: ModelParams,
    prestige: PrestigeParams,
    j: int,
    rel_step: Optional[float] = None,
    enforce_assumptions: bool = True,
) -> float:
    """Central difference of x*_j in w_j under the prestige closed form"""
    rel_step = get_settings().fd_rel_step if rel_step is None else rel_step
    h = rel_step * max(1.0, float(net.incomes[j]))
    up = np.array(net.incomes, copy=True)
    down = np.array(net.incomes, copy=True)
    up[j] += h
    down[j] -= h
    x_up = solve_closed_form_prestige(net.with_incomes(up), params, prestige, enforce_assumptions).x[j]
    x_down = solve_closed_form_prestige(net.with_incomes(down), params, prestige, enforce_assumptions).x[j]
    return float((x_up - x_down) / (2.0 * h))

def prestige_experiment(
    net: Network,
    params: ModelParams,
    prestige: PrestigeParams,
    group: Identity,
    steps: Iterable[float],
    enforce_assumptions: bool = True,
) -> ExperimentReport:
    """Raise one group's prestige by each step and check consumption and own-income sensitivity"""
    tol = sign_tolerance()
    group = Identity(group)
    base = solve_closed_form_prestige(net, params, prestige, enforce_assumptions)
    members = net.members(group).tolist()
    base_slopes = {j: own_income_slope(net, params, prestige, j, enforce_assumptions=enforce_assumptions) for j in members}

    rows: List[SignCheck] = []
    for step in steps:
        bumped = prestige.bumped(group, step)
        shocked = solve_closed_form_prestige(net, params, bumped, enforce_assumptions)
        for agent in range(net.J):
            label = net.identities[agent]
            expected = -1 if label is group else 1
            claim = "i" if label is group else "ii"
            rows.append(
                check_row(
                    f"prestige-{claim}:{step:g}", agent, label, float(base.x[agent]), float(shocked.x[agent]),
                    expected, tol, extra={"P_before": prestige.of(group), "P_after": bumped.of(group)},
                )
            )
        for agent in members:
            slope = own_income_slope(net, params, bumped, agent, enforce_assumptions=enforce_assumptions)
            rows.append(
                check_row(f"prestige-iii:{step:g}", agent, group, base_slopes[agent], slope, -1, 0.0)
            )

    report = ExperimentReport(
        experiment_id=f"prestige:{group.value}",
        kind="prestige",
        rows=rows,
        summary=summarize(rows, group=group.value, P_A=prestige.P_A, P_B=prestige.P_B),
    )
    logger.info(f"prestige on group {group.value}: {report.violations} violations / {report.checks} checks")
    return report

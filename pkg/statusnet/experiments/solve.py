from typing import Callable, List, Optional, Union
import logging
import numpy as np
from statusnet.altmodel import alt_best_response_oracle, solve_alt
from statusnet.compstat import check_row, summarize
from statusnet.equilibrium import best_response_oracle, solve_closed_form, solve_closed_form_prestige
from statusnet.experiments.base import BaseExperiment, ExperimentContext
from statusnet.generators import make_rng
from statusnet.models import AltEquilibrium, EquilibriumSolution, ExperimentReport, ModelKind, SolveMethod

logger = logging.getLogger(__name__)

Solution = Union[EquilibriumSolution, AltEquilibrium]

ORACLE_AGREEMENT_TOL = 1e-8

def solve_context(
    context: ExperimentContext,
    method: SolveMethod = SolveMethod.CLOSED_FORM,
    x0: Optional[np.ndarray] = None,
) -> Solution:
    """Dispatch to the solver for the configured model"""
    net, params = context.net, context.params
    if context.model is ModelKind.ALT:
        if method is SolveMethod.BEST_RESPONSE:
            return alt_best_response_oracle(net, params, x0=x0)
        return solve_alt(net, params)

    prestige = context.prestige if context.model is ModelKind.PRESTIGE else None
    if method is SolveMethod.BEST_RESPONSE:
        return best_response_oracle(
            net, params, prestige=prestige, x0=x0, enforce_assumptions=context.enforce_assumptions
        )
    if prestige is not None:
        return solve_closed_form_prestige(net, params, prestige, context.enforce_assumptions)
    return solve_closed_form(net, params, context.enforce_assumptions)

class SolveExperiment(BaseExperiment):
    """Closed form against the best-response oracle from several starting points"""

    def __init__(self, starts: int = 5):
        super().__init__(name="solve", description="Closed-form equilibrium checked against the best-response oracle")
        self.starts = starts

    def plan(self, context: ExperimentContext) -> List[Callable[[], ExperimentReport]]:
        closed = solve_context(context)
        rng = make_rng(context.seed)
        scale = 2.0 * float(np.max(closed.x)) if closed.x.size else 1.0
        starts = [np.zeros(context.net.J)] + [
            rng.uniform(0.0, scale, size=context.net.J) for _ in range(self.starts - 1)
        ]
        return [self._job(context, closed, i, x0) for i, x0 in enumerate(starts)]

    def _job(self, context: ExperimentContext, closed: Solution, index: int, x0: np.ndarray):
        def run() -> ExperimentReport:
            oracle = solve_context(context, SolveMethod.BEST_RESPONSE, x0=x0)
            rows = [
                check_row(
                    f"oracle:{index}", j, context.net.identities[j], float(closed.x[j]), float(oracle.x[j]),
                    0, ORACLE_AGREEMENT_TOL,
                )
                for j in range(context.net.J)
            ]
            return ExperimentReport(
                experiment_id=f"solve:{index}",
                kind="solve",
                rows=rows,
                summary=summarize(
                    rows,
                    model=context.model.value,
                    Y_A=closed.Y_A,
                    Y_B=closed.Y_B,
                    oracle_iterations=oracle.iterations,
                ),
            )

        return run

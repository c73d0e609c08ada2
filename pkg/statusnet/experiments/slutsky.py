from typing import Callable, List
import logging
from statusnet.compstat import check_row, slutsky_decomposition, summarize
from statusnet.experiments.base import BaseExperiment, ExperimentContext
from statusnet.models import ExperimentReport, ModelKind, SignCheck

logger = logging.getLogger(__name__)

DECOMPOSITION_REL_TOL = 1e-5

class SlutskyExperiment(BaseExperiment):
    """Income decomposition for every (target, shocked) pair, one job per target agent"""

    def __init__(self):
        super().__init__(
            name="compstat",
            description="Own-centrality and group-average channels of dx_j/dw_k against finite differences",
        )

    def validate_context(self, context: ExperimentContext) -> bool:
        context.require_base_params()
        J = context.net.J
        for index in (context.spec.target, context.spec.shocked):
            if index is not None and not 0 <= index < J:
                logger.error(f"Agent index {index} out of range for J={J}")
                return False
        return context.model is ModelKind.BASE

    def plan(self, context: ExperimentContext) -> List[Callable[[], ExperimentReport]]:
        J = context.net.J
        targets = [context.spec.target] if context.spec.target is not None else list(range(J))
        shocked = [context.spec.shocked] if context.spec.shocked is not None else list(range(J))
        return [self._job(context, j, shocked) for j in targets]

    def _job(self, context: ExperimentContext, j: int, shocked: List[int]):
        def run() -> ExperimentReport:
            net, params = context.net, context.require_base_params()
            rows: List[SignCheck] = []
            worst_gap = 0.0
            for k in shocked:
                report = slutsky_decomposition(net, params, j, k, enforce_assumptions=context.enforce_assumptions)
                analytic = report.own_channel + report.group_channel
                gap = abs(report.total - analytic)
                worst_gap = max(worst_gap, gap / max(1.0, abs(analytic)))
                extra = {
                    "shocked": float(k),
                    "own_channel": report.own_channel,
                    "group_channel": report.group_channel,
                    "total": report.total,
                }
                rows.append(
                    check_row(
                        "slutsky-sum", j, net.identities[j], analytic, report.total, 0,
                        DECOMPOSITION_REL_TOL * max(1.0, abs(analytic)), extra=extra,
                    )
                )
                if report.cross_identity:
                    rows.append(check_row("slutsky-cross", j, net.identities[j], 0.0, report.total, 1, 0.0, extra=extra))
            return ExperimentReport(
                experiment_id=f"compstat:{j}",
                kind="compstat",
                rows=rows,
                summary=summarize(rows, target=j, max_relative_gap=worst_gap),
            )

        return run

from typing import Callable, List
import logging
from statusnet.compstat import prestige_experiment
from statusnet.experiments.base import BaseExperiment, ExperimentContext
from statusnet.models import ExperimentReport

logger = logging.getLogger(__name__)

class PrestigeExperiment(BaseExperiment):
    """One job per prestige increment of the chosen group"""

    def __init__(self):
        super().__init__(name="prestige", description="Consumption and income sensitivity after a prestige rise")

    def validate_context(self, context: ExperimentContext) -> bool:
        context.require_base_params()
        if any(step <= 0.0 for step in context.spec.prestige_steps):
            logger.error("Prestige steps must be positive")
            return False
        return bool(context.spec.prestige_steps)

    def plan(self, context: ExperimentContext) -> List[Callable[[], ExperimentReport]]:
        return [self._job(context, step) for step in context.spec.prestige_steps]

    def _job(self, context: ExperimentContext, step: float):
        def run() -> ExperimentReport:
            report = prestige_experiment(
                context.net,
                context.require_base_params(),
                context.prestige_or_zero(),
                context.spec.prestige_group,
                [step],
                context.enforce_assumptions,
            )
            return report.model_copy(update={"experiment_id": f"{report.experiment_id}:{step:g}"})

        return run

"""Experiments on communities networks: income shocks, the N-bar threshold and income transfers."""

from typing import Callable, List
import logging
from statusnet.compstat import n_bar, prop2_experiment
from statusnet.experiments.base import BaseExperiment, ExperimentContext
from statusnet.inequality import density_income_profile, inequality_experiment, regressive_transfer_prediction
from statusnet.models import ExperimentReport, ModelKind

logger = logging.getLogger(__name__)

class _CommunitiesExperiment(BaseExperiment):
    def validate_context(self, context: ExperimentContext) -> bool:
        context.require_structure()
        context.require_base_params()
        if context.model is not ModelKind.BASE:
            logger.error(f"Experiment {self.name} runs on the base model only")
            return False
        return True

class Prop2Experiment(_CommunitiesExperiment):
    """Raise one community's income; a negative ``shocked_community`` shocks each community in turn"""

    def __init__(self):
        super().__init__(name="prop2", description="Sign pattern of consumption after a community income rise")

    def validate_context(self, context: ExperimentContext) -> bool:
        chosen = context.spec.shocked_community
        if chosen >= context.require_structure().n_communities:
            logger.error(f"Community {chosen} does not exist")
            return False
        return super().validate_context(context)

    def plan(self, context: ExperimentContext) -> List[Callable[[], ExperimentReport]]:
        structure = context.require_structure()
        chosen = context.spec.shocked_community
        communities = range(structure.n_communities) if chosen < 0 else [chosen]
        return [self._job(context, n) for n in communities]

    def _job(self, context: ExperimentContext, community: int):
        def run() -> ExperimentReport:
            return prop2_experiment(
                context.net,
                context.require_structure(),
                context.require_base_params(),
                community,
                epsilon=context.spec.epsilon,
                enforce_assumptions=context.enforce_assumptions,
            )

        return run

class NbarExperiment(_CommunitiesExperiment):
    def __init__(self):
        super().__init__(name="nbar", description="Smallest community count making own-community effects positive")

    def plan(self, context: ExperimentContext) -> List[Callable[[], ExperimentReport]]:
        def run() -> ExperimentReport:
            structure = context.require_structure()
            report = n_bar(context.net, structure, context.require_base_params(), context.enforce_assumptions)
            return ExperimentReport(
                experiment_id="nbar",
                kind="nbar",
                summary={
                    "violations": 0,
                    "checks": 0,
                    "N": structure.N,
                    "N_bar": report.N_bar,
                    "binding_pair": list(report.binding_pair),
                    "skipped_pairs": len(report.skipped_pairs),
                },
            )

        return [run]

class InequalityExperiment(_CommunitiesExperiment):
    def __init__(self):
        super().__init__(name="inequality", description="Same-identity income transfer and its spillovers")

    def validate_context(self, context: ExperimentContext) -> bool:
        if context.spec.transfer is None:
            logger.error("Experiment inequality needs a 'transfer' section")
            return False
        n = context.require_structure().n_communities
        transfer = context.spec.transfer
        if transfer.donor >= n or transfer.recipient >= n or transfer.donor == transfer.recipient:
            logger.error(f"Transfer {transfer.donor}->{transfer.recipient} is not between two communities")
            return False
        return super().validate_context(context)

    def plan(self, context: ExperimentContext) -> List[Callable[[], ExperimentReport]]:
        def run() -> ExperimentReport:
            structure = context.require_structure()
            transfer = context.spec.transfer
            report = inequality_experiment(
                context.net, structure, context.require_base_params(), transfer, context.enforce_assumptions
            )
            if context.spec.density_profile is None:
                return report
            profile = density_income_profile(context.spec.density_profile)
            prediction = regressive_transfer_prediction(
                profile, float(structure.incomes[transfer.donor]), float(structure.incomes[transfer.recipient])
            )
            summary = {**report.summary, "u_shaped": profile["u_shaped"], "trough_income": profile["trough_income"]}
            summary["profile_prediction"] = prediction
            return report.model_copy(update={"summary": summary})

        return [run]

# Experiment kinds runnable from a config's "experiment.kind"
from typing import Dict, Type
from statusnet.errors import SchemaError
from .base import BaseExperiment, ExperimentContext, ExperimentJob, build_context
from .communities import InequalityExperiment, NbarExperiment, Prop2Experiment
from .prestige import PrestigeExperiment
from .slutsky import SlutskyExperiment
from .solve import SolveExperiment, solve_context
from .swaps import HomophilySwapExperiment, valid_swaps

EXPERIMENTS: Dict[str, Type[BaseExperiment]] = {
    "solve": SolveExperiment,
    "compstat": SlutskyExperiment,
    "prop2": Prop2Experiment,
    "nbar": NbarExperiment,
    "inequality": InequalityExperiment,
    "homophily_swap": HomophilySwapExperiment,
    "prestige": PrestigeExperiment,
}

def get_experiment(kind: str) -> BaseExperiment:
    try:
        return EXPERIMENTS[kind]()
    except KeyError:
        raise SchemaError(f"unknown experiment kind {kind!r}; expected one of {sorted(EXPERIMENTS)}") from None

__all__ = [
    "BaseExperiment",
    "ExperimentContext",
    "ExperimentJob",
    "build_context",
    "EXPERIMENTS",
    "get_experiment",
    "solve_context",
    "valid_swaps",
    "SolveExperiment",
    "SlutskyExperiment",
    "Prop2Experiment",
    "NbarExperiment",
    "InequalityExperiment",
    "HomophilySwapExperiment",
    "PrestigeExperiment",
]

from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, List, Optional, Union
import logging
from pydantic import BaseModel, ConfigDict, ValidationError
from statusnet.errors import SchemaError
from statusnet.inequality import build_communities
from statusnet.io import load_network, network_from_dict
from statusnet.models import (
    AltParams,
    CommunityStructure,
    ExperimentConfig,
    ExperimentReport,
    ExperimentSpec,
    ModelKind,
    ModelParams,
    Network,
    PrestigeParams,
)

logger = logging.getLogger(__name__)

class ExperimentContext(BaseModel):
    """Everything a job needs, resolved from a validated config"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    net: Network
    structure: Optional[CommunityStructure] = None
    model: ModelKind = ModelKind.BASE
    params: Union[ModelParams, AltParams]
    prestige: Optional[PrestigeParams] = None
    spec: ExperimentSpec
    enforce_assumptions: bool = True
    seed: int = 0

    def require_structure(self) -> CommunityStructure:
        if self.structure is None:
            raise SchemaError(f"experiment {self.spec.kind!r} needs a 'communities' section")
        return self.structure

    def require_base_params(self) -> ModelParams:
        if not isinstance(self.params, ModelParams):
            raise SchemaError(f"experiment {self.spec.kind!r} is not defined for the alt model")
        return self.params

    def prestige_or_zero(self) -> PrestigeParams:
        return self.prestige or PrestigeParams(P_A=0.0, P_B=0.0)

def build_context(config: ExperimentConfig) -> ExperimentContext:
    """Resolve the network (inline, file or generated communities) and the parameter set"""
    structure = None
    if config.communities is not None:
        spec = config.communities
        net, structure = build_communities(
            spec.N,
            spec.size,
            topology=spec.topologies or spec.topology,
            incomes=spec.incomes,
            weight=spec.weights or spec.weight,
            seed=spec.seed,
        )
    elif isinstance(config.network, dict):
        net = network_from_dict(config.network)
    elif isinstance(config.network, str):
        net = load_network(config.network)
    else:
        raise SchemaError("config needs either 'network' or 'communities'")

    try:
        if config.model is ModelKind.ALT:
            params: Union[ModelParams, AltParams] = AltParams(**config.params)
        else:
            params = ModelParams(**config.params)
    except ValidationError as exc:
        raise SchemaError(f"invalid params: {exc.errors()[0]['msg']}") from exc
    if config.model is ModelKind.PRESTIGE and config.prestige is None:
        raise SchemaError("model 'prestige' needs a 'prestige' section with P_A and P_B")

    return ExperimentContext(
        net=net,
        structure=structure,
        model=config.model,
        params=params,
        prestige=config.prestige,
        spec=config.experiment,
        enforce_assumptions=config.enforce_assumptions,
        seed=config.seed,
    )

class ExperimentJob(BaseModel):
    """One independent unit of work; the runner executes ``run`` in a worker thread"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    index: int
    name: str
    run: Callable[[], ExperimentReport]

class BaseExperiment(ABC):
    """Base class for all experiment kinds"""

    def __init__(self, name: str, description: str):
        self.name = name
        self.description = description
        self.version = "1.0.0"

    @abstractmethod
    def plan(self, context: ExperimentContext) -> List[Callable[[], ExperimentReport]]:
        """Split the experiment into independent jobs"""
        pass

    def validate_context(self, context: ExperimentContext) -> bool:
        """Check that the context carries what this experiment needs"""
        return True

    def jobs(self, context: ExperimentContext) -> List[ExperimentJob]:
        if not self.validate_context(context):
            raise SchemaError(f"configuration does not fit experiment {self.name!r}")
        planned = self.plan(context)
        logger.info(f"Experiment {self.name} planned {len(planned)} jobs")
        return [ExperimentJob(index=i, name=f"{self.name}[{i}]", run=fn) for i, fn in enumerate(planned)]

    def get_info(self) -> Dict[str, Any]:
        return {"name": self.name, "description": self.description, "version": self.version}

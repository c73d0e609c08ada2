from enum import Enum
from typing import Any, Dict, List, Optional, Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from statusnet.errors import NetworkValidationError, NonPositiveBeta, NonPositiveIncome

def _frozen_array(value: Any, ndim: int, dtype=float) -> np.ndarray:
    """Copy into a read-only numpy array of the given rank"""
    arr = np.array(value, dtype=dtype, copy=True)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr

class Identity(str, Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Identity":
        return Identity.B if self is Identity.A else Identity.A

class SolveMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    BEST_RESPONSE = "best_response"

class ModelKind(str, Enum):
    BASE = "base"
    PRESTIGE = "prestige"
    ALT = "alt"

class HomophilyDelta(str, Enum):
    RAISING = "raising"
    LOWERING = "lowering"
    NEUTRAL = "neutral"

class Topology(str, Enum):
    COMPLETE = "complete"
    RING = "ring"
    STAR = "star"

class ArrayModel(BaseModel):
    """Immutable model that may hold numpy arrays"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

# Parameters

class ModelParams(BaseModel):
    """Preference parameters of the dissonance model"""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0)
    beta: float
    gamma: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_ordering(self) -> "ModelParams":
        if not self.beta > 0:
            raise NonPositiveBeta(f"beta must be positive, got {self.beta}")
        if not self.alpha > self.gamma:
            raise ValueError(f"alpha ({self.alpha}) must exceed gamma ({self.gamma})")
        return self

class PrestigeParams(BaseModel):
    """Exogenous prestige of each identity group; zero for both recovers the base model"""

    model_config = ConfigDict(frozen=True)

    P_A: float = Field(ge=0)
    P_B: float = Field(ge=0)

    def of(self, label: Identity) -> float:
        return self.P_A if label is Identity.A else self.P_B

    def bumped(self, label: Identity, step: float) -> "PrestigeParams":
        if label is Identity.A:
            return PrestigeParams(P_A=self.P_A + step, P_B=self.P_B)
        return PrestigeParams(P_A=self.P_A, P_B=self.P_B + step)

class AltParams(BaseModel):
    """Parameters of the keeping-up-with-the-Joneses variant (common income w)"""

    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float = Field(gt=0)
    gamma: float = Field(gt=0)
    w: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_interior(self) -> "AltParams":
        if not self.alpha - 1.0 / self.w < 0:
            raise ValueError(f"alpha - 1/w must be negative, got {self.alpha - 1.0 / self.w}")
        return self

    @property
    def slack(self) -> float:
        """1/w - alpha, positive by construction"""
        return 1.0 / self.w - self.alpha

# Networks

class Network(ArrayModel):
    """Agents with incomes and identities, plus weighted directed links G"""

    incomes: np.ndarray
    identities: Tuple[Identity, ...]
    G: np.ndarray

    @field_validator("incomes", mode="before")
    @classmethod
    def _incomes_array(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1)

    @field_validator("G", mode="before")
    @classmethod
    def _links_array(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 2)

    @field_validator("identities", mode="before")
    @classmethod
    def _identity_tuple(cls, v: Any) -> Tuple[Identity, ...]:
        return tuple(Identity(x) for x in v)

    @model_validator(mode="after")
    def _check_network(self) -> "Network":
        J = len(self.identities)
        if self.incomes.shape != (J,) or self.G.shape != (J, J):
            raise NetworkValidationError(
                f"inconsistent shapes: {J} identities, incomes {self.incomes.shape}, G {self.G.shape}"
            )
        bad = np.flatnonzero(~(self.incomes > 0))
        if bad.size:
            raise NonPositiveIncome(f"incomes must be positive; offending agents {bad.tolist()}", bad.tolist())
        if not np.all(np.isfinite(self.G)) or np.any(self.G < 0):
            raise NetworkValidationError("link weights must be finite and nonnegative")
        if np.any(np.diag(self.G) != 0):
            raise NetworkValidationError("G must have a zero diagonal")
        if Identity.A not in self.identities or Identity.B not in self.identities:
            raise NetworkValidationError("both identity groups must be nonempty")
        return self

    @property
    def J(self) -> int:
        return len(self.identities)

    @property
    def labels(self) -> np.ndarray:
        """Boolean vector, True for identity A"""
        return np.array([t is Identity.A for t in self.identities])

    def members(self, label: Identity) -> np.ndarray:
        """Indices of agents holding the given identity"""
        return np.flatnonzero(self.labels == (label is Identity.A))

    def with_incomes(self, incomes: np.ndarray) -> "Network":
        return Network(incomes=incomes, identities=self.identities, G=self.G)

    def with_links(self, G: np.ndarray) -> "Network":
        return Network(incomes=self.incomes, identities=self.identities, G=G)

class MaskedNetwork(ArrayModel):
    """Ĝ: G restricted to within-identity links"""

    G_hat: np.ndarray

    @field_validator("G_hat", mode="before")
    @classmethod
    def _array(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 2)

class WeightedNetwork(ArrayModel):
    """H: Ĝ with row j scaled by beta*w_j/(beta*w_j + 1)"""

    H: np.ndarray

    @field_validator("H", mode="before")
    @classmethod
    def _array(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 2)

class SpectralReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    lambda1: float = Field(ge=0)
    iterations: int
    converged: bool
    residual: float
    method: str = "power_iteration"
    margin: float = 1e-9

    @property
    def assumption_1_satisfied(self) -> bool:
        return self.lambda1 <= 1.0 - self.margin

class SwapResult(BaseModel):
    """Outcome of moving the weight of link j->k onto j->l"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    network: Network
    delta: HomophilyDelta
    homophily_before: float
    homophily_after: float
    masked_changed: bool

# Centrality

class CentralityProfile(ArrayModel):
    C: np.ndarray
    C_bar_A: float
    C_bar_B: float
    identities: Tuple[Identity, ...]

    @field_validator("C", mode="before")
    @classmethod
    def _array(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1)

    @field_validator("identities", mode="before")
    @classmethod
    def _identity_tuple(cls, v: Any) -> Tuple[Identity, ...]:
        return tuple(Identity(x) for x in v)

    def Z_of_agent(self) -> np.ndarray:
        """Z_{theta_j} for every agent j"""
        return np.array([self.Z(t) for t in self.identities])

    @property
    def Z_A(self) -> float:
        return self.C_bar_A / self.C_bar_B

    @property
    def Z_B(self) -> float:
        return self.C_bar_B / self.C_bar_A

    def mean(self, label: Identity) -> float:
        return self.C_bar_A if label is Identity.A else self.C_bar_B

    def Z(self, label: Identity) -> float:
        return self.Z_A if label is Identity.A else self.Z_B

class DensityProfile(ArrayModel):
    D: np.ndarray

    @field_validator("D", mode="before")
    @classmethod
    def _array(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1)

class CentralityJacobian(ArrayModel):
    """dC_dw[j, k] = dC_j / dw_k"""

    dC_dw: np.ndarray

    @field_validator("dC_dw", mode="before")
    @classmethod
    def _array(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 2)

class AssumptionTwoReport(ArrayModel):
    bound: np.ndarray
    passed: np.ndarray
    below_inverse_gamma: np.ndarray

    @field_validator("bound", mode="before")
    @classmethod
    def _bound(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1)

    @field_validator("passed", "below_inverse_gamma", mode="before")
    @classmethod
    def _flags(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1, dtype=bool)

    @property
    def all_passed(self) -> bool:
        return bool(np.all(self.passed))

    @property
    def offenders(self) -> List[int]:
        return np.flatnonzero(~self.passed).tolist()

class CommunityFormulaCheck(ArrayModel):
    """Centrality-simple formula against generalized centrality on one community"""

    formula: np.ndarray
    direct: Optional[np.ndarray] = None
    max_gap: float = 0.0
    tolerance: float = 1e-8

    @field_validator("formula", mode="before")
    @classmethod
    def _formula(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1)

    @field_validator("direct", mode="before")
    @classmethod
    def _direct(cls, v: Any) -> Optional[np.ndarray]:
        return None if v is None else _frozen_array(v, 1)

    @property
    def agrees(self) -> bool:
        return self.direct is None or self.max_gap <= self.tolerance

# Equilibrium

class EquilibriumSolution(ArrayModel):
    x: np.ndarray
    Y_A: float
    Y_B: float
    R: np.ndarray
    u: np.ndarray
    method: SolveMethod
    residual: float = 0.0
    iterations: int = 0
    model: ModelKind = ModelKind.BASE
    a1: bool = True
    a2: Tuple[bool, ...] = ()
    below_inverse_gamma: Tuple[bool, ...] = ()
    C: Optional[np.ndarray] = None

    @field_validator("x", "R", "u", mode="before")
    @classmethod
    def _vectors(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1)

    @field_validator("C", mode="before")
    @classmethod
    def _centrality(cls, v: Any) -> Optional[np.ndarray]:
        return None if v is None else _frozen_array(v, 1)

    def Y(self, label: Identity) -> float:
        return self.Y_A if label is Identity.A else self.Y_B

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model.value,
            "x": self.x.tolist(),
            "Y_A": self.Y_A,
            "Y_B": self.Y_B,
            "R": self.R.tolist(),
            "u": self.u.tolist(),
            "method": self.method.value,
            "residual": self.residual,
            "assumptions": {"a1": self.a1, "a2": list(self.a2)},
            "below_inverse_gamma": list(self.below_inverse_gamma),
        }

class AltEquilibrium(ArrayModel):
    x: np.ndarray
    Y_A: float
    Y_B: float
    C_bon: np.ndarray
    R: np.ndarray
    root_residual: float
    method: SolveMethod = SolveMethod.CLOSED_FORM
    iterations: int = 0

    @field_validator("x", "C_bon", "R", mode="before")
    @classmethod
    def _vectors(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1)

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "model": ModelKind.ALT.value,
            "x": self.x.tolist(),
            "Y_A": self.Y_A,
            "Y_B": self.Y_B,
            "R": self.R.tolist(),
            "C_bon": self.C_bon.tolist(),
            "method": self.method.value,
            "residual": self.root_residual,
            "assumptions": {"a1": True, "a2": []},
        }

# Comparative statics

class CompStatReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: int
    shocked: int
    step: float
    total: float
    own_channel: float
    group_channel: float
    cross_identity: bool

    @property
    def analytic_total(self) -> float:
        return self.own_channel + self.group_channel

class NbarReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    N_bar: int
    binding_pair: Tuple[int, int]
    rhs_values: Dict[str, float]
    skipped_pairs: List[Tuple[int, int]] = Field(default_factory=list)

class SignCheck(BaseModel):
    """One row of an experiment report"""

    model_config = ConfigDict(frozen=True)

    experiment_id: str
    agent_id: int
    identity: Identity
    community: int = -1
    baseline_x: float
    shocked_x: float
    delta: float
    expected_sign: int
    sign_ok: bool
    extra: Dict[str, float] = Field(default_factory=dict)

class ExperimentReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    experiment_id: str
    kind: str
    rows: List[SignCheck] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)

    @property
    def violations(self) -> int:
        return sum(1 for row in self.rows if not row.sign_ok)

    @property
    def checks(self) -> int:
        return len(self.rows)

# Communities

class CommunityStructure(ArrayModel):
    """Partition into 2N equal-size single-identity communities, A/B alternating"""

    assignment: np.ndarray
    N: int = Field(ge=1)
    size: int = Field(ge=1)
    incomes: np.ndarray

    @field_validator("assignment", mode="before")
    @classmethod
    def _assignment(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1, dtype=int)

    @field_validator("incomes", mode="before")
    @classmethod
    def _incomes(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, 1)

    @model_validator(mode="after")
    def _check_partition(self) -> "CommunityStructure":
        counts = np.bincount(self.assignment, minlength=2 * self.N)
        if counts.shape[0] != 2 * self.N or np.any(counts != self.size):
            raise NetworkValidationError(f"every one of {2 * self.N} communities must hold {self.size} agents")
        if self.incomes.shape != (2 * self.N,):
            raise NetworkValidationError("one income per community is required")
        return self

    @property
    def n_communities(self) -> int:
        return 2 * self.N

    def identity(self, community: int) -> Identity:
        return Identity.A if community % 2 == 0 else Identity.B

    def agents(self, community: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == community)

    def communities_of(self, label: Identity) -> List[int]:
        return [n for n in range(self.n_communities) if self.identity(n) is label]

    def agent_incomes(self) -> np.ndarray:
        return self.incomes[self.assignment]

    def with_incomes(self, incomes: np.ndarray) -> "CommunityStructure":
        return CommunityStructure(assignment=self.assignment, N=self.N, size=self.size, incomes=incomes)

class TransferSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    donor: int = Field(ge=0)
    recipient: int = Field(ge=0)
    epsilon: float = Field(ge=0)

# Input files

class AgentRecord(BaseModel):
    id: int = Field(ge=0)
    income: float = Field(gt=0)
    identity: Identity

class NetworkFile(BaseModel):
    agents: List[AgentRecord]
    links: List[Tuple[int, int, float]] = Field(default_factory=list)

class CommunitiesSpec(BaseModel):
    N: int = Field(ge=1)
    size: int = Field(ge=1)
    topology: Topology = Topology.COMPLETE
    weight: float = Field(default=0.2, gt=0)
    topologies: Optional[List[Topology]] = None
    weights: Optional[List[float]] = None
    incomes: Optional[List[float]] = None
    seed: Optional[int] = None

class ExperimentSpec(BaseModel):
    kind: str = "solve"
    target: Optional[int] = None
    shocked: Optional[int] = None
    shocked_community: int = 0
    epsilon: Optional[float] = None
    swap: Optional[Tuple[int, int, int]] = None
    swaps: Optional[List[Tuple[int, int, int]]] = None
    transfer: Optional[TransferSpec] = None
    prestige_group: Identity = Identity.A
    prestige_steps: List[float] = Field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5])
    density_profile: Optional[List[Tuple[float, float]]] = None

class OutputSpec(BaseModel):
    path: Optional[str] = None
    format: str = Field(default="json", pattern="^(json|csv)$")

class ExperimentConfig(BaseModel):
    """Validated run configuration consumed by the CLI"""

    model: ModelKind = ModelKind.BASE
    network: Optional[Any] = None
    communities: Optional[CommunitiesSpec] = None
    params: Dict[str, float] = Field(default_factory=dict)
    prestige: Optional[PrestigeParams] = None
    experiment: ExperimentSpec = Field(default_factory=ExperimentSpec)
    enforce_assumptions: bool = True
    seed: int = Field(default=0, ge=0, lt=2**64)
    output: OutputSpec = Field(default_factory=OutputSpec)

    @field_validator("experiment", mode="before")
    @classmethod
    def _experiment_shorthand(cls, v: Any) -> Any:
        return {"kind": v} if isinstance(v, str) else v

"""Exception hierarchy shared by solvers, experiments and the CLI.

Every error carries a machine ``code`` (printed by the CLI as ``E:<code>:``)
and the process ``exit_code`` it maps to.
"""

from typing import Iterable, Optional, Sequence

EXIT_INPUT = 1
EXIT_PREMISE = 2
EXIT_SIGN_VIOLATION = 3
EXIT_SOLVER = 4

class StatusNetError(Exception):
    """Base class for all statusnet errors"""

    code = "ERROR"
    exit_code = EXIT_SOLVER

    def __init__(self, message: str, agents: Optional[Iterable[int]] = None):
        super().__init__(message)
        self.agents: Sequence[int] = tuple(agents or ())

    def render(self) -> str:
        """Machine-parsable one-line rendering"""
        return f"E:{self.code}:{self}"

# Input / IO

class SchemaError(StatusNetError):
    code = "SCHEMA"
    exit_code = EXIT_INPUT

class NetworkValidationError(StatusNetError):
    code = "NETWORK"
    exit_code = EXIT_INPUT

class NonPositiveIncome(NetworkValidationError):
    code = "NONPOSITIVE_INCOME"

class NonPositiveBeta(NetworkValidationError):
    code = "NONPOSITIVE_BETA"

class DuplicateLink(NetworkValidationError):
    code = "DUPLICATE_LINK"

class SelfLink(NetworkValidationError):
    code = "SELF_LINK"

class NoSuchLink(NetworkValidationError):
    code = "NO_SUCH_LINK"

class LinkAlreadyExists(NetworkValidationError):
    code = "LINK_EXISTS"

class IsolatedAgent(NetworkValidationError):
    code = "ISOLATED_AGENT"

class GenerationFailed(StatusNetError):
    code = "GENERATION_FAILED"
    exit_code = EXIT_INPUT

# Theory premises

class PremiseError(StatusNetError):
    code = "PREMISE"
    exit_code = EXIT_PREMISE

class AssumptionOneViolated(PremiseError):
    code = "ASSUMPTION1"

class SpectralRadiusViolated(PremiseError):
    code = "SPECTRAL_RADIUS"

class AssumptionTwoViolated(PremiseError):
    code = "ASSUMPTION2"

class AssumptionViolatedPostTransfer(PremiseError):
    code = "ASSUMPTION_POST_TRANSFER"

class NegativeConsumption(PremiseError):
    code = "NEGATIVE_CONSUMPTION"

class ComparisonInfeasible(PremiseError):
    code = "COMPARISON_INFEASIBLE"

class DegenerateStatus(PremiseError):
    code = "DEGENERATE_STATUS"

class NLessThanNbar(PremiseError):
    code = "N_BELOW_NBAR"

class PartitionNotDisconnected(PremiseError):
    code = "PARTITION_CONNECTED"

class NotStronglyConnected(PremiseError):
    code = "NOT_STRONGLY_CONNECTED"

class NonUniformIncome(PremiseError):
    code = "NONUNIFORM_INCOME"

class RankingFlipped(PremiseError):
    code = "RANKING_FLIPPED"

class NegativeIncome(PremiseError):
    code = "NEGATIVE_INCOME"

# Solver internals

class SolveFailed(StatusNetError):
    code = "SOLVE_FAILED"

class NoConvergence(StatusNetError):
    code = "NO_CONVERGENCE"

    def __init__(self, message: str, residual: float = float("nan"), iterations: int = 0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations

class PowerIterationDiverged(StatusNetError):
    code = "POWER_ITERATION"

class RootNotBracketed(StatusNetError):
    code = "ROOT_NOT_BRACKETED"

class CentralityConsistencyError(StatusNetError):
    code = "CENTRALITY_CONSISTENCY"

class ZeroDerivative(StatusNetError):
    code = "ZERO_DERIVATIVE"

from functools import lru_cache
from pydantic_settings import BaseSettings, SettingsConfigDict

class Settings(BaseSettings):
    """Solver and experiment settings"""

    model_config = SettingsConfigDict(
        env_prefix="STATUSNET_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "statusnet"
    app_version: str = "1.0.0"

    # Logging
    log: str = "WARNING"
    log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Spectral radius / assumption gates
    power_tol: float = 1e-10
    power_max_iter: int = 10_000
    assumption_margin: float = 1e-9

    # Best-response oracles
    oracle_tol: float = 1e-10
    oracle_max_iter: int = 100_000
    oracle_damping: float = 0.5
    divergence_bound: float = 1e12

    # Comparative statics
    fd_rel_step: float = 1e-6
    formula_tol: float = 1e-8
    experiment_epsilon_share: float = 0.01

    # Alternative model root solver
    root_bisect_tol: float = 1e-8
    root_newton_tol: float = 1e-13
    root_max_iter: int = 200

    # Runner
    max_concurrent_jobs: int = 4

    # Generators
    generator_spectral_target: float = 0.9
    generator_max_rescale: int = 50

@lru_cache()
def get_settings() -> Settings:
    """Get solver settings"""
    return Settings()

import os
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables (prefix HYPERGLUE_)."""

    # Runtime
    environment: str = os.getenv("ENVIRONMENT", "development")
    log_level: str = "INFO"
    log_json: bool = False

    # Tolerances
    eps_feas: float = 1e-9
    eps_eq: float = 1e-12

    # Geometry
    window_radius: float = 100.0
    sampling_half_width: float = 5.0

    # Falsifiers
    default_trials: int = 1000
    max_family_size: int = 8
    rejection_budget: int = 10_000
    repair_rounds: int = 10

    # Gates
    gate_samples: int = 64
    gate_samples_max: int = 1024
    gate_seed: int = 0

    # Iterations
    chain_fraction: float = 0.125
    max_chain_steps: int = 1024
    max_iterations: int = 60

    # Phase sweep
    sweep_step: float = 0.05
    sweep_trials: int = 10

    class Config:
        env_prefix = "HYPERGLUE_"
        env_file = ".env"
        case_sensitive = False


settings = Settings()

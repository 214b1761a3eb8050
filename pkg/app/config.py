from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import List


class Settings(BaseSettings):
    # Logging
    log_level: str = "INFO"
    log_format: str = "console"  # console or json

    # Reproducibility and privacy defaults
    default_seed: int = 0
    default_delta: float = 1e-5

    # Evaluation
    eval_n_theta: int = 500

    # Built-in toy target (five Gaussians on a ring)
    toy_samples: int = 1000
    toy_components: int = 5
    toy_radius: float = 6.0
    toy_spread: float = 0.25
    level_set_grid: int = 100

    # Run outputs
    snapshot_cadence: List[int] = [0, 1, 10, 50, 100]
    output_dir: str = "runs"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="DPSWF_",
        case_sensitive=False,
    )


# Create global settings instance
settings = Settings()

from typing import Literal

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Simulator settings with environment variable support (prefix CACHESIM_)."""

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_DIR: str = "data/logs"
    LOG_TO_FILE: bool = True

    # Workload
    ZIPF_ALPHA: float = 1.1
    MIN_SESSION_SECONDS: int = 60

    # Sweep
    SAMPLES_PER_CASE: int = 12
    REQUESTS_PER_SAMPLE: int = 100_000
    BASE_SEED: int = 20240611
    SWEEP_WORKERS: int = 1  # 1 = sequential timing
    TIMING_ENGINE: Literal["optimized", "reference"] = "optimized"
    TIMER_RESOLUTION_FACTOR: float = 1000.0

    # Metrics
    STARVATION_MISS_RATIO: float = 0.9

    class Config:
        env_file = ".env"
        env_prefix = "CACHESIM_"
        case_sensitive = True
        extra = "ignore"


settings = Settings()

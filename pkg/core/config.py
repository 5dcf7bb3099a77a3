"""pmc configuration from environment variables (PMC_*)."""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical defaults and runtime knobs loaded from environment."""

    model_config = SettingsConfigDict(
        env_prefix="PMC_",
        env_file=(".env", ".env.local"),
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # App
    debug: bool = False
    log_level: str = "WARNING"

    # Parallelism (PMC_THREADS=1 runs everything serially)
    threads: int = Field(default=4, ge=1)

    # Rotational integration
    default_step: float = Field(default=1e-4, gt=0)
    closure_tol: float = Field(default=1e-3, gt=0)
    step_error_tol: float = Field(default=1e-6, gt=0)  # per unit arclength
    event_tol: float = Field(default=1e-10, gt=0)
    refinements: int = Field(default=2, ge=0)

    # Graph solvers
    probe_step: float = Field(default=1e-3, gt=0)
    picard_damping: float = Field(default=0.5, gt=0, le=1)
    picard_tol: float = Field(default=1e-10, gt=0)
    picard_max_iter: int = Field(default=500, ge=1)
    vertical_warn_nu: float = Field(default=1e-3, gt=0)

    # Output
    digits: int = Field(default=17, ge=1, le=17)

    @property
    def effective_log_level(self) -> str:
        return "DEBUG" if self.debug else self.log_level.upper()


@lru_cache
def get_settings() -> Settings:
    """Cached settings instance."""
    return Settings()

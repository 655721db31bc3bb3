from typing import Literal
from pydantic_settings import BaseSettings, SettingsConfigDict

class Settings(BaseSettings):

    # App Settings
    APP_NAME: str = "enrichfem"
    LOG_LEVEL: str = "INFO"

    # Discretization defaults
    DEFAULT_QUAD_POINTS: int = 6
    DEFAULT_LEVELS: int = 7
    DEFAULT_H0: str = "1/8"
    REFINEMENT_FACTOR: int = 2

    # Convergence study
    MAX_WORKERS: int = 4
    DEFAULT_FORMAT: Literal["csv", "md", "json"] = "csv"

    model_config = SettingsConfigDict(
        env_file=".env", env_prefix="ENRICHFEM_", env_ignore_empty=True, extra="ignore"
    )

settings = Settings()

from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Runtime settings for the simulator, CLI and HTTP surface."""

    threads: Optional[int] = None
    batch_size: int = 65536
    output_dir: str = "results"
    database_url: str = "sqlite:///./qkdbench.db"
    log_level: str = "INFO"
    environment: str = "development"

    class Config:
        env_file = ".env"
        env_prefix = "QKDBENCH_"
        extra = "ignore"


settings = Settings()

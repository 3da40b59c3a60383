import logging
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from autoindex.core import MAX_ATTRIBUTES

load_dotenv()


class Settings(BaseSettings):
    """Runtime configuration, read from AUTOINDEX_* environment variables or .env"""

    model_config = SettingsConfigDict(env_prefix="AUTOINDEX_", env_file=".env", extra="ignore")

    log_level: str = "INFO"
    default_mode: str = "auto"
    threads: int = 1
    facts_dir: str = "."
    output_dir: Optional[str] = None
    seed: int = 0
    verify_trials: int = 200
    bench_warmup: int = 1

    # oracle gates
    antichain_limit: int = 20
    bruteforce_max_attributes: int = 4
    bruteforce_max_searches: int = 8

    # bitset width of a search
    max_attributes: int = MAX_ATTRIBUTES

    @field_validator("max_attributes")
    @classmethod
    def check_max_attributes(cls, value: int) -> int:
        if not 1 <= value <= MAX_ATTRIBUTES:
            raise ValueError(f"max_attributes must be between 1 and {MAX_ATTRIBUTES}")
        return value


@lru_cache()
def get_settings() -> Settings:
    return Settings()


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

"""
Configuration module for the stt-kernel typechecker.
Loads environment variables and provides typed configuration.
"""

import os
from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables (prefix STT_)."""

    # Application Settings
    app_name: str = "stt-kernel"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "WARNING"

    # Tope Logic
    max_cube_vars: int = 8           # bound for the model oracle
    entailment_cache_size: int = 4096

    # Pipeline
    parse_workers: int = 4            # files parsed concurrently

    # Server
    host: str = "0.0.0.0"
    port: int = 8000

    # Output
    color: bool = True
    timing: bool = True

    # Corpus
    corpus_dir: str = os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus")
    corpus_manifest: str = "manifest.tsv"
    corpus_inventory: str = "inventory.tsv"

    class Config:
        env_prefix = "STT_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False

    @property
    def use_color(self) -> bool:
        """Styling is off when STT_COLOR is false or NO_COLOR is set to anything."""
        return self.color and not os.environ.get("NO_COLOR")

    @property
    def manifest_path(self) -> str:
        return os.path.join(self.corpus_dir, self.corpus_manifest)

    @property
    def inventory_path(self) -> str:
        return os.path.join(self.corpus_dir, self.corpus_inventory)


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Convenience function to get settings
settings = get_settings()

"""
Application configuration via environment variables.
"""
from functools import lru_cache
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Harness settings loaded from environment variables (prefix ASEP_)."""

    model_config = SettingsConfigDict(
        env_prefix="ASEP_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"

    # Stationary solver backend: "dense", "iterative", or "auto" (by size)
    solver_type: Literal["auto", "dense", "iterative"] = "auto"
    dense_max_sites: int = 12
    oracle_max_sites: int = 20
    iterative_tolerance: float = 1e-13
    iterative_restart: int = 200
    iterative_maxiter: int = 2000

    # Quadrature
    quadrature_nodes: int = 200
    quadrature_max_nodes: int = 6400
    quadrature_tolerance: float = 1e-10
    qpoch_tail: float = 1e-17
    atom_edge_tolerance: float = 1e-12
    mass_tolerance: float = 1e-8

    # Matrix ansatz
    max_ansatz_sites: int = 400

    # Simulation
    threads: int = 1
    sim_batch_count: int = 20
    sim_se_threshold: float = 3.0


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()

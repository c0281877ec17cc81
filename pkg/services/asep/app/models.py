"""
Pydantic models for domain types and command output schemas.

Domain types (rates, Askey-Wilson parameters, simulation configs) are frozen
value objects. Output models carry a schema_version so downstream plotting
scripts can detect drift; OUTPUT_SCHEMAS is the registry `validate` checks.
"""
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


SCHEMA_VERSION = "1"

Phase = Literal["LowDensity", "HighDensity", "MaximalCurrent"]


class FrozenModel(BaseModel):
    """Immutable value object; safe to share between threads."""

    model_config = ConfigDict(frozen=True)


# ============================================================================
# Core Domain Models
# ============================================================================

class AsepParams(FrozenModel):
    """Physical rates of the open-boundary exclusion process."""

    alpha: float = Field(gt=0, description="injection rate at site 1")
    beta: float = Field(gt=0, description="extraction rate at site N")
    gamma: float = Field(default=0.0, ge=0, description="extraction rate at site 1")
    delta: float = Field(default=0.0, ge=0, description="injection rate at site N")
    q: float = Field(default=0.0, ge=0, lt=1, description="left hop rate")


class AwParams(FrozenModel):
    """Askey-Wilson quadruple (A, B, C, D) together with q."""

    A: float
    B: float
    C: float
    D: float
    q: float = Field(default=0.0, ge=0, lt=1)

    @property
    def product(self) -> float:
        return self.A * self.B * self.C * self.D


class PhaseInfo(FrozenModel):
    """Boundary densities and phase label."""

    rho0: float
    rho1: float
    phase: Phase
    bulk_density: float


class SimConfig(FrozenModel):
    """Configuration of one Gillespie run."""

    asep: AsepParams
    n_sites: int = Field(ge=1)
    total_time: float = Field(gt=0)
    burn_in_time: float = Field(default=0.0, ge=0)
    seed: int = Field(default=0, ge=0)
    batch_count: int = Field(default=20, ge=2)

    @model_validator(mode="after")
    def _check_times(self) -> "SimConfig":
        if self.total_time <= self.burn_in_time:
            raise ValueError("total_time must exceed burn_in_time")
        return self


class SimResult(FrozenModel):
    """Time-averaged observables of a simulation run."""

    schema_version: str = SCHEMA_VERSION
    n_sites: int
    seed: int
    rng_algorithm: str
    event_count: int
    measured_time: float
    occupancies: list[float]
    occupancy_se: list[float]
    count_histogram: list[float]
    injection_flux: float
    injection_se: float
    extraction_flux: float
    extraction_se: float


class RunManifest(BaseModel):
    """Record of one CLI invocation."""

    schema_version: str = SCHEMA_VERSION
    command: str
    parameters: dict[str, Any]
    tool_version: str
    seeds: list[int] = Field(default_factory=list)
    wall_time: float
    outputs: list[str] = Field(default_factory=list)


# ============================================================================
# Command Output Models
# ============================================================================

class ParamsReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    A: float
    B: float
    C: float
    D: float
    rho0: float
    rho1: float
    phase: Phase
    J: float


class PartitionReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    N: int
    K_N: float
    route_ansatz: float
    route_quadrature: float
    relative_gap: float


class SemiinfReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    u: float
    K: int
    A_tilde: float
    B_tilde: float
    deterministic: bool
    zeta: float
    times: list[float]
    gf: float
    site_density: Optional[float] = None


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    value: Optional[float] = None


class ValidationReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    level: Literal["quick", "full"]
    passed: bool
    checks: list[CheckResult]


class ErrorResponse(BaseModel):
    """Standard error response (written to stderr by the CLI)."""

    code: str
    message: str
    details: dict[str, Any] = Field(default_factory=dict)


# Keys of every JSON output and headers of every CSV output.
OUTPUT_SCHEMAS: dict[str, tuple[str, ...]] = {
    "params.json": ("schema_version", "A", "B", "C", "D", "rho0", "rho1", "phase", "J"),
    "partition.json": ("schema_version", "N", "K_N", "route_ansatz", "route_quadrature", "relative_gap"),
    "semiinf.json": (
        "schema_version", "u", "K", "A_tilde", "B_tilde", "deterministic", "zeta", "times", "gf",
        "site_density",
    ),
    "simulate.json": tuple(SimResult.model_fields),
    "validate.json": ("schema_version", "level", "passed", "checks"),
    "stationary.csv": ("configuration", "probability"),
    "observables.csv": ("observable", "index", "value"),
    "profile.csv": ("site", "occupancy"),
    "sim_profile.csv": ("site", "occupancy", "se"),
    "lambda.csv": ("lambda", "Lambda"),
    "lambda_empirical.csv": ("lambda", "Lambda", "empirical_Lambda"),
    "rate.csv": ("x", "I"),
    "rate_empirical.csv": ("x", "I", "empirical_window"),
}

MODEL_SCHEMAS: dict[str, type[BaseModel]] = {
    "params.json": ParamsReport,
    "partition.json": PartitionReport,
    "semiinf.json": SemiinfReport,
    "simulate.json": SimResult,
    "validate.json": ValidationReport,
}

"""Centralized configuration for the GNE solver.

Uses pydantic-settings for environment variable loading and validation.
All settings can be overridden via environment variables with the GNE_ prefix;
command-line flags take precedence over both.
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class GneSettings(BaseSettings):
    """Settings for solver runs and audits.

    Environment variables:
        GNE_SEED: Default base seed for zero-order runs and audits
        GNE_SIGMA: Default smoothing radius sigma
        GNE_DELTA: Default second-pair offset delta
        GNE_MAX_ITERS: Default iteration budget T
        GNE_SEEDS: Default number of seeds for zero-order statistics
        GNE_WORKERS: Worker processes for multi-seed runs
        GNE_TRACE_DIR: Directory for CSV traces
        GNE_TRACE_EVERY: Default trace stride
        GNE_LOG_LEVEL: Logging level
        GNE_LOG_JSON: Enable JSON log format
        GNE_LOG_FILE: Optional JSON log file
        GNE_CERT_REL_TOL: Certification tolerance factor
        GNE_ORACLE_REL_TOL: Solution-oracle residual factor
    """

    model_config = SettingsConfigDict(
        env_prefix="GNE_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Randomness
    seed: int = Field(
        default=20240601,
        description="Default base seed",
    )

    # Zero-order defaults (values of the bundled example)
    sigma: float = Field(default=0.05, gt=0, description="Smoothing radius sigma")
    delta: float = Field(default=0.05, gt=0, description="Second-pair offset delta")
    max_iters: int = Field(default=10000, ge=1, description="Iteration budget T")
    seeds: int = Field(default=20, ge=1, description="Seeds per zero-order run")

    # Execution
    workers: int = Field(
        default=1,
        ge=1,
        description="Worker processes for multi-seed runs (1 = in-process)",
    )
    trace_dir: str = Field(
        default="traces/",
        description="Directory for CSV traces",
    )
    trace_every: int = Field(default=1, ge=1, description="Trace stride")

    # Observability
    log_level: str = Field(
        default="INFO",
        description="Logging level",
    )
    log_json: bool = Field(
        default=False,
        description="Enable JSON log format",
    )
    log_file: str | None = Field(
        default=None,
        description="Optional path for a JSON log file",
    )

    # Numerical acceptance
    cert_rel_tol: float = Field(
        default=1e-8,
        gt=0,
        description="certify_gne tolerance is cert_rel_tol * (1 + |e|^2)",
    )
    oracle_rel_tol: float = Field(
        default=1e-10,
        gt=0,
        description="Existence threshold is oracle_rel_tol * (1 + |e|^2)",
    )

    def certification_tolerance(self, e_norm_sq: float) -> float:
        """Scale the certification factor by the system offset.

        Args:
            e_norm_sq: Squared norm of the KKT offset vector e.

        Returns:
            Absolute gap tolerance for certify_gne.
        """
        return self.cert_rel_tol * (1.0 + e_norm_sq)

    def oracle_threshold(self, e_norm_sq: float) -> float:
        """Residual threshold under which a GNE is declared to exist.

        Args:
            e_norm_sq: Squared norm of the KKT offset vector e.

        Returns:
            Absolute residual threshold.
        """
        return self.oracle_rel_tol * (1.0 + e_norm_sq)


# Global settings instance - import this directly
settings = GneSettings()

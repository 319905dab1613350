import os
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, field_validator


class Settings(BaseModel):
    """Defaults for CLI runs, read from NOVIKOV_* environment variables."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    default_precision: Fraction = Field(
        default=Fraction(8), description="T-adic cutoff E used when --prec is not given"
    )
    default_seed: int = Field(default=0, description="Seed for randomized verification suites")
    default_samples: int | None = Field(
        default=None, description="Override for every suite's sample count"
    )
    default_window: int = Field(default=6, description="Radius W of the exponent window |alpha| <= W")
    log_level: str = Field(default="WARNING", description="Root logging level")
    otlp_endpoint: str | None = Field(
        default=None, description="OTLP gRPC endpoint; span export is off when unset"
    )
    service_name: str = Field(default="novikov-affinoid", description="OpenTelemetry service.name")

    @field_validator("default_precision", mode="before")
    @classmethod
    def _parse_precision(cls, value: object) -> Fraction:
        return Fraction(str(value)) if not isinstance(value, Fraction) else value

    @field_validator("log_level")
    @classmethod
    def _upper(cls, value: str) -> str:
        return value.upper()


def load_settings() -> Settings:
    env = {
        "default_precision": os.getenv("NOVIKOV_DEFAULT_PRECISION"),
        "default_seed": os.getenv("NOVIKOV_DEFAULT_SEED"),
        "default_samples": os.getenv("NOVIKOV_DEFAULT_SAMPLES"),
        "default_window": os.getenv("NOVIKOV_DEFAULT_WINDOW"),
        "log_level": os.getenv("NOVIKOV_LOG_LEVEL"),
        "otlp_endpoint": os.getenv("NOVIKOV_OTLP_ENDPOINT"),
        "service_name": os.getenv("NOVIKOV_SERVICE_NAME"),
    }
    return Settings(**{k: v for k, v in env.items() if v not in (None, "")})

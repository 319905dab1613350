"""Validated form of one command-line invocation."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator


class Invocation(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    command: str = Field(description="Top-level subcommand, e.g. nov or verify")
    action: str = Field(description="Operation under the subcommand, e.g. val or cech")
    arguments: list[str] = Field(default_factory=list, description="Positional values and file paths")
    precision: Fraction = Field(description="T-adic cutoff E")
    seed: int = Field(description="Seed for randomized runs")
    samples: int | None = Field(default=None, description="Sample-count override")
    window: int = Field(ge=0, description="Radius W of the exponent window")
    axis: int = Field(default=1, ge=1, description="Axis j for Tate splits and disjoint homotopies")
    form: Literal["staircase", "plain_sum"] = Field(
        default="staircase", description="Contraction form of the inclusion homotopy"
    )
    convention: Literal["standard", "dual"] = Field(
        default="standard", description="Sign convention of the Floer differential"
    )
    out: Path | None = Field(default=None, description="Write the report here instead of stdout")

    @field_validator("precision", mode="before")
    @classmethod
    def _parse_precision(cls, value: object) -> Fraction:
        return value if isinstance(value, Fraction) else Fraction(str(value))

    @field_validator("samples")
    @classmethod
    def _positive_samples(cls, value: int | None) -> int | None:
        if value is not None and value < 1:
            raise ValueError("samples must be positive")
        return value

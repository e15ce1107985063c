"""Run configuration documents."""

from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, Field, ValidationError, model_validator

from ..config import settings
from ..core.exceptions import ConfigurationError, GameLoadError
from ..game import load_game
from ..kkt import KktSystem
from ..solvers import FoConfig, ZoConfig, paper_example_schedule

Method = Literal["first-order", "zero-order"]

# Named schedule accepted in place of a schedule object
PAPER_SCHEDULE_PRESET = "paper-example"


class TraceOptions(BaseModel):
    """Where and how densely traces are written."""

    dir: Path = Field(default_factory=lambda: Path(settings.trace_dir), description="Output directory")
    every: int = Field(default_factory=lambda: settings.trace_every, ge=1, description="Row stride")


class RunConfig(BaseModel):
    """One solve: game, method, method parameters, seeds and trace output."""

    game: str = Field(..., description="Game document path or preset name")
    method: Method = Field("zero-order", description="Solver to run")
    params: dict[str, Any] = Field(default_factory=dict, description="FoConfig or ZoConfig fields")
    seeds: list[int] = Field(default_factory=list, description="Base seeds (zero-order only)")
    trace: TraceOptions = Field(default_factory=TraceOptions)
    reference: list[float] | None = Field(None, description="Reference x for the distance column")
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)

    @model_validator(mode="after")
    def check_params(self) -> "RunConfig":
        if self.method == "first-order":
            FoConfig(**self.params)
        else:
            if not self.seeds:
                raise ValueError("zero-order runs need at least one seed")
            params = dict(self.params)
            if params.get("schedule") == PAPER_SCHEDULE_PRESET:
                params.pop("schedule")
            ZoConfig(**params)
        return self

    @model_validator(mode="after")
    def check_reference(self) -> "RunConfig":
        if self.reference is not None:
            dim = load_game(self.game).dim
            if len(self.reference) != dim:
                raise ValueError(f"reference has {len(self.reference)} entries, game {self.game!r} has n*d = {dim}")
        return self

    def fo_config(self) -> FoConfig:
        return FoConfig(**self.params)

    def zo_config(self, seed: int, sys: KktSystem) -> ZoConfig:
        """ZoConfig for one seed, with the named preset expanded for ``sys``."""
        params = dict(self.params)
        if params.get("schedule") == PAPER_SCHEDULE_PRESET:
            if sys.layout.dim_x != 4:
                raise ConfigurationError(
                    f"'{PAPER_SCHEDULE_PRESET}' schedule needs a 4-coordinate action, got {sys.layout.dim_x}"
                )
            params["schedule"] = paper_example_schedule(sys.layout.dim_lambda)
        params["seed"] = seed
        return ZoConfig(**params)


def load_run_config(path: Path | str) -> RunConfig:
    """Parse a run document (JSON or YAML).

    Raises:
        GameLoadError: If the file is missing or cannot be parsed.
        ConfigurationError: If the document fails the schema.
    """
    path = Path(path)
    if not path.exists():
        raise GameLoadError(str(path), "file not found")
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise GameLoadError(str(path), f"parse error{where}: {e}", cause=e) from e
    if not isinstance(data, dict):
        raise GameLoadError(str(path), "document must contain a mapping")
    try:
        return RunConfig(**data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid run config {path}:\n{e}") from e

from typing import Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scrible.globals import DEFAULT_OUT_DIR
from scrible.objects.run_config import RunConfig


class PolytopeSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    A: list[list[float]]
    b: list[float]
    interior_point: Optional[list[float]] = None


class BoxSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    lower: list[float]
    upper: list[float]


class LossSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["constant", "rotating", "random_signed", "alternating"] = "rotating"
    vectors: Optional[list[list[float]]] = None
    seed: int = 0


class EnvironmentSpec(BaseModel):
    """
    Where the losses come from. Exactly one of: a body (`polytope`, `box` or `simplex_dimension`)
    with a `losses` generator; an inline `graph` (graph JSON schema, delays included); a
    `graph_file` path; or a `named` acceptance environment.
    """
    model_config = ConfigDict(extra="forbid")
    polytope: Optional[PolytopeSpec] = None
    box: Optional[BoxSpec] = None
    simplex_dimension: Optional[int] = Field(None, ge=1)
    losses: LossSpec = LossSpec()
    graph: Optional[dict] = None
    graph_file: Optional[str] = None
    named: Optional[Literal["box_rotating", "diamond"]] = None
    named_seed: int = 0

    @model_validator(mode="after")
    def _exactly_one_source(self):
        sources = [self.polytope, self.box, self.simplex_dimension, self.graph, self.graph_file, self.named]
        if sum(s is not None for s in sources) != 1:
            raise ValueError("environment needs exactly one of polytope, box, simplex_dimension, graph, graph_file, named")
        return self


class ExperimentConfig(BaseModel):
    """A run configuration replicated over seeds base_seed + r, with its environment and outputs."""
    model_config = ConfigDict(extra="forbid")

    run: RunConfig
    environment: EnvironmentSpec
    replications: int = Field(1, ge=1)
    out_dir: str = DEFAULT_OUT_DIR
    emit_plot_data: bool = False

    def replication_seed(self, replication: int) -> int:
        return self.run.seed + replication

    def replication_config(self, replication: int) -> RunConfig:
        return self.run.model_copy(update={"seed": self.replication_seed(replication)})

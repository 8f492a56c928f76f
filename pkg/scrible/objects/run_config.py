from typing import Literal, Optional, Union
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SCRIBLE = "scrible"
FTRL_FULL = "ftrl_full"
BANDIT_PGD = "bandit_pgd"
FTL = "ftl"
ARGMIN = "argmin"
SINGLE_NEWTON = "single_newton"
AUTO = "auto"


class RunConfig(BaseModel):
    """Parameters of one run: horizon, learning rate, loss bound, seed, algorithm and update mode."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    horizon: int = Field(..., ge=0)
    eta: Union[Literal["auto"], float] = AUTO
    loss_bound: float = Field(1.0, gt=0)
    seed: int = Field(0, ge=-(2**63), lt=2**64)
    algorithm: Literal["scrible", "ftrl_full", "bandit_pgd", "ftl"] = SCRIBLE
    update_mode: Literal["argmin", "single_newton"] = ARGMIN
    pgd_delta: Optional[float] = Field(None, gt=0, lt=1)
    newton_tol: float = Field(1e-8, gt=0)
    sample_shrink: float = Field(1.0, gt=0, le=1)
    allow_condition_violation: bool = False

    @field_validator("update_mode", mode="before")
    @classmethod
    def _accept_cli_spelling(cls, value):
        return value.replace("-", "_") if isinstance(value, str) else value

    @field_validator("eta", mode="before")
    @classmethod
    def _parse_eta(cls, value):
        if isinstance(value, str):
            value = AUTO if value.strip().lower() == AUTO else float(value)
        if isinstance(value, (int, float)) and not value > 0:
            raise ValueError(f"eta must be positive, got {value}")
        return value

    @model_validator(mode="after")
    def _pgd_needs_delta(self):
        if self.algorithm == BANDIT_PGD and self.pgd_delta is None:
            raise ValueError("bandit_pgd requires pgd_delta")
        return self

    def is_auto_eta(self) -> bool: return self.eta == AUTO

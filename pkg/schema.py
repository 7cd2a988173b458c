from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

ShotMode = Literal["single_shot", "exact"]


class EstimatorConfig(BaseModel):
    """Overlap bound, ACDF accuracy and per-query failure probability of the estimator."""

    eta: float = Field(gt=0.0, le=1.0)
    epsilon: float = Field(gt=0.0)
    nu: float = Field(gt=0.0, lt=1.0)
    shot_mode: ShotMode = "single_shot"

    @model_validator(mode="after")
    def _check_margin(self) -> "EstimatorConfig":
        if not self.epsilon < self.eta / 2:
            raise ValueError(f"epsilon must be smaller than eta/2 (epsilon={self.epsilon}, eta={self.eta})")
        return self

    @property
    def margin(self) -> float:
        """eta/2 - epsilon."""
        return self.eta / 2 - self.epsilon


class SearchConfig(BaseModel):
    """Threshold binary search settings; ``success_probability`` is 1 - zeta for the whole search."""

    eta: float = Field(gt=0.0, le=1.0)
    delta_band: float = Field(gt=0.0, lt=math.pi / 2)
    tau: float = Field(gt=0.0)
    success_probability: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    max_iters: int = Field(default=64, ge=1)


class ChangepointConfig(BaseModel):
    grid: List[float] = Field(min_length=3)
    delta_c: float = Field(gt=0.0)
    resolution: float = Field(gt=0.0)

    @field_validator("grid")
    @classmethod
    def _check_bounds(cls, grid: List[float]) -> List[float]:
        if grid[0] < -math.pi / 2 - 1e-12 or grid[-1] > math.pi / 2 + 1e-12:
            raise ValueError("grid must lie inside [-pi/2, pi/2]")
        return grid

    @model_validator(mode="after")
    def _check_spacing(self) -> "ChangepointConfig":
        steps = [b - a for a, b in zip(self.grid, self.grid[1:])]
        if any(step <= 0 for step in steps):
            raise ValueError("grid must be strictly ascending")
        if any(abs(step - self.resolution) > 1e-12 for step in steps):
            raise ValueError(f"grid spacing must equal resolution={self.resolution}")
        return self


class RunConfig(BaseModel):
    """Every parameter of a ground-state-energy run plus plumbing (paths, seeds, persistence)."""

    hamiltonian_path: Path
    delta_precision: float = Field(gt=0.0)
    eta: float = Field(gt=0.0, le=1.0)
    epsilon: float = Field(gt=0.0)
    nu: float = Field(default=0.1, gt=0.0, lt=1.0)
    delta_band: Union[Literal["auto"], float] = "auto"
    epsilon_q: float = Field(default=1e-12, gt=0.0, lt=1.0)
    epsilon_c: float = Field(default=1e-14, gt=0.0)
    runtime_mode: Literal["eq18", "optimized"] = "eq18"
    b_g: Optional[float] = Field(default=None, ge=1.0)
    shot_mode: ShotMode = "single_shot"
    seed: int = 0
    trial_seed: Optional[int] = None
    threads: int = Field(default=1, ge=1)
    solver: Literal["binary", "changepoint"] = "binary"
    grid_resolution: float = Field(default=0.057, gt=0.0)
    delta_c: float = Field(default=0.01, gt=0.0)
    n_samples: Optional[int] = Field(default=None, ge=1)
    reuse_samples: bool = True
    success_probability: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    max_iters: int = Field(default=64, ge=1)
    output_dir: Path = Path("results")
    database_url: Optional[str] = None

    @field_validator("delta_band")
    @classmethod
    def _check_delta_band(cls, value: Union[str, float]) -> Union[str, float]:
        if value != "auto" and not 0.0 < float(value) < math.pi / 2:
            raise ValueError(f"delta_band must be 'auto' or lie in (0, pi/2), got {value}")
        return value

    @model_validator(mode="after")
    def _check_constraints(self) -> "RunConfig":
        if not self.epsilon < self.eta / 2:
            raise ValueError(f"epsilon must be smaller than eta/2 (epsilon={self.epsilon}, eta={self.eta})")
        if self.runtime_mode == "optimized" and self.b_g is None:
            raise ValueError("b_g is required when runtime_mode is 'optimized'")
        return self

    def resolve_delta_band(self, tau: float) -> float:
        """delta = tau * Delta for 'auto'; an explicit value must not exceed it."""
        limit = min(math.pi / 2, tau * self.delta_precision)
        if self.delta_band == "auto":
            if limit >= math.pi / 2:
                raise ValueError("delta_band: tau * delta_precision reaches pi/2, set delta_band explicitly")
            return limit
        delta = float(self.delta_band)
        if delta > limit:
            raise ValueError(f"delta_band={delta} exceeds min(pi/2, tau * delta_precision)={limit}")
        return delta

    def estimator_config(self) -> EstimatorConfig:
        return EstimatorConfig(eta=self.eta, epsilon=self.epsilon, nu=self.nu, shot_mode=self.shot_mode)


class SearchIterationRow(BaseModel):
    iteration: int
    x: float
    estimate: float
    std_error: float
    flag: int
    x0: float
    x1: float


class ChangepointPassRow(BaseModel):
    pass_index: int
    split_index: int
    deviation_drop: float
    significant: bool


class AcdfSweepRow(BaseModel):
    x: float
    estimate: float
    std_error: float
    exact_cdf: float
    closed_form_acdf: float


class TradeoffRow(BaseModel):
    b_g: float
    n_g: float
    n_s_scaled: float
    c: float


class AsymptoticReport(BaseModel):
    """Closed-form bounds and counts reported next to the measured run."""

    predicted_iterations: int
    nu_per_query: float
    circuit_count: int
    rotation_estimate: float
    max_r_bound: int
    a_bound: float


class GseReport(BaseModel):
    gse_estimate: float
    beta0_reference: float
    delta0: float
    solver: str
    n_iters: int
    n_samples: int
    n_samples_formula: int
    n_samples_legacy: int
    a_value: float
    a_legacy: float
    n_g: float
    fourier_d: int
    fourier_beta: float
    delta_band: float
    tau: float
    lam: float
    seed: int
    config_hash: str
    asymptotics: AsymptoticReport
    search_trace: List[SearchIterationRow] = Field(default_factory=list)
    changepoint_trace: List[ChangepointPassRow] = Field(default_factory=list)
    config_echo: Dict[str, Any] = Field(default_factory=dict)

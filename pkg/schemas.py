from enum import Enum
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

SCHEMA_VERSION = 1


class Command(str, Enum):
    classify = "classify"
    decompose = "decompose"
    synthesize = "synthesize"
    verify = "verify"
    drazin = "drazin"
    project = "project"
    diagnose = "diagnose"


class SupportMode(str, Enum):
    compact = "compact"
    decay = "decay"


class Tolerances(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    tol_unit: float = Field(1e-9, gt=0)
    tol_cluster: float = Field(1e-7, gt=0)
    tol_proj: float = Field(1e-9, gt=0)
    tol_nilp: float = Field(1e-9, gt=0)
    tol_drazin: float = Field(1e-10, gt=0)
    tol_imag: float = Field(1e-9, gt=0)
    tol_flow: float = Field(1e-9, gt=0)
    tol_trunc: float = Field(1e-12, gt=0)


_REQUIRED_PATHS: dict[Command, tuple[str, ...]] = {
    Command.classify: ("phi",),
    Command.decompose: ("phi", "eps", "x"),
    Command.synthesize: ("phi", "eps"),
    Command.verify: ("phi", "eps", "x"),
    Command.drazin: ("phi",),
    Command.project: ("phi",),
    Command.diagnose: ("eps",),
}


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: Command
    phi: Optional[Path] = None
    eps: Optional[Path] = None
    x: Optional[Path] = None
    initial: Optional[Path] = None
    t_min: Optional[int] = None
    t_max: Optional[int] = None
    tolerances: Tolerances = Field(default_factory=Tolerances)
    mode: SupportMode = SupportMode.compact
    output_dir: Path
    subset: Optional[Literal["zero", "forward", "backward", "unit", "stable"]] = None
    theta: Optional[float] = None
    r_grid: list[float] = Field(default_factory=lambda: [0.5, 0.9, 0.99])

    @model_validator(mode="after")
    def _check_inputs(self) -> "RunConfig":
        for name in _REQUIRED_PATHS[self.command]:
            if getattr(self, name) is None:
                raise ValueError(f"--{name} is required for {self.command.value}")
        for name in ("phi", "eps", "x", "initial"):
            path = getattr(self, name)
            if path is not None and not path.is_file():
                raise ValueError(f"--{name} file not found: {path}")
        if self.t_min is not None and self.t_min > 0:
            raise ValueError("Window must contain t=0 (t_min <= 0)")
        if self.t_max is not None and self.t_max < 0:
            raise ValueError("Window must contain t=0 (t_max >= 0)")
        if self.command == Command.project and (self.subset is None) == (
            self.theta is None
        ):
            raise ValueError("project needs exactly one of --subset or --theta")
        return self


class EigenvalueEntry(BaseModel):
    re: float
    im: float
    multiplicity: int
    index: int
    group: Literal["zero", "forward", "backward", "unit"]


class ClassificationReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    dim: int
    eigenvalues: list[EigenvalueEntry]
    frequencies: list[float]
    spectral_radius: float
    unit_margin: Optional[float]
    tolerances: Tolerances


class RecursionReport(BaseModel):
    max_residual: float
    offending_t: Optional[int]
    threshold: float
    passed: bool


class TruncationReport(BaseModel):
    mode: SupportMode
    forward_terms: int
    backward_terms: int
    tail_bound: float


class ResidualReport(BaseModel):
    recursion: RecursionReport
    max_imag_residue: float
    forward_component: float
    backward_component: float
    outward_component: float
    total: float
    truncation: TruncationReport


class DrazinAxiomReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    product_residual: float
    commute_residual: float
    power_residual: float
    threshold: float
    passed: bool


class SubexponentialRow(BaseModel):
    r: float
    weighted_sum: float
    partial_sums: list[float]
    threshold: float
    slope_future: float
    slope_past: float
    exponential_future: bool
    exponential_past: bool


class DiagnosticReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    window: tuple[int, int]
    rows: list[SubexponentialRow]


class InitialConditionsOut(BaseModel):
    forward: list[float]
    backward: list[float]
    outward: list[float]


class SolutionSpaceReport(BaseModel):
    dim_forward: int
    dim_backward: int
    dim_outward: int
    dim_zero: int
    unique: bool
    subexponential_dim: int


class DecompositionSummary(BaseModel):
    schema_version: int = SCHEMA_VERSION
    mode: SupportMode
    window: tuple[int, int]
    initial_conditions: InitialConditionsOut
    residual_report: ResidualReport
    classification: ClassificationReport
    solution_space: SolutionSpaceReport
    tolerances: Tolerances


class ErrorReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    error: str
    message: str
    exit_code: int
    details: dict[str, Any] = Field(default_factory=dict)


class InitialConditionsIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    forward: Optional[list[float]] = None
    backward: Optional[list[float]] = None
    outward: Optional[list[float]] = None


class SynthesisSummary(BaseModel):
    schema_version: int = SCHEMA_VERSION
    window: tuple[int, int]
    initial_conditions: InitialConditionsOut
    recursion: RecursionReport
    solution_space: SolutionSpaceReport
    tolerances: Tolerances


class ProjectorReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    subset: str
    rank: int
    conjugate_pair: bool
    idempotency_residual: float
    commutation_residual: float
    tolerances: Tolerances

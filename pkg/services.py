from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ValidationError

from config import ensure_output_dir
from csv_utils import export_matrix, export_sequence, parse_matrix, parse_sequence
from errors import InputError, NumericError, RecursionViolation
from flows import (
    FlowDecomposition,
    InitialConditions,
    SupportInfo,
    decompose,
    solution_space,
    synthesize,
    verify_recursion,
)
from oracles import drazin_axiom_check, subexponential_diagnostic
from schemas import (
    ClassificationReport,
    DecompositionSummary,
    DiagnosticReport,
    DrazinAxiomReport,
    InitialConditionsIn,
    ProjectorReport,
    RecursionReport,
    RunConfig,
    SynthesisSummary,
)
from sequences import TimeWindowSequence, Window
from spectral import Matrix, SpectralAnalysis, analyze, coerce_real, drazin_inverse, norm

logger = logging.getLogger(__name__)


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"Cannot read {path}: {exc}") from exc


def load_matrix(path: Path) -> Matrix:
    return Matrix.from_real(parse_matrix(_read(path)))


def load_sequence(path: Path) -> TimeWindowSequence:
    return parse_sequence(_read(path))


def load_initial_conditions(path: Optional[Path], dim: int) -> InitialConditions:
    if path is None:
        return InitialConditions.zeros(dim)
    try:
        raw = InitialConditionsIn.model_validate_json(_read(path))
    except ValidationError as exc:
        messages = [err["msg"] for err in exc.errors()]
        raise InputError(f"Invalid initial conditions file {path}", errors=messages) from exc

    def vector(values: Optional[list[float]], name: str) -> np.ndarray:
        if values is None:
            return np.zeros(dim)
        if len(values) != dim:
            raise InputError(f"{name} initial condition has {len(values)} entries, expected {dim}")
        return np.asarray(values, dtype=float)

    return InitialConditions(
        vector(raw.forward, "forward"),
        vector(raw.backward, "backward"),
        vector(raw.outward, "outward"),
    )


def write_json(directory: Path, name: str, report: BaseModel) -> Path:
    path = directory / name
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def emit_report(
    decomposition: FlowDecomposition, directory: Path, summary: DecompositionSummary
) -> list[Path]:
    directory = ensure_output_dir(directory)
    written = []
    for name, flow in decomposition.flows().items():
        path = directory / f"{name}.csv"
        path.write_text(export_sequence(flow), encoding="utf-8")
        written.append(path)
    written.append(write_json(directory, "summary.json", summary))
    logger.info(f"emit_report: directory={directory} files={len(written)}")
    return written


class CommandService:
    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self.tolerances = config.tolerances

    def run(self) -> BaseModel:
        handler = getattr(self, self.config.command.value)
        return handler()

    @property
    def output_dir(self) -> Path:
        return ensure_output_dir(self.config.output_dir)

    def _analysis(self) -> SpectralAnalysis:
        return analyze(load_matrix(self.config.phi), self.tolerances)

    def _window(self, default: Window) -> Window:
        t_min = default.t_min if self.config.t_min is None else self.config.t_min
        t_max = default.t_max if self.config.t_max is None else self.config.t_max
        return Window(t_min, t_max)

    def classify(self) -> ClassificationReport:
        report = self._analysis().report()
        write_json(self.output_dir, "classification.json", report)
        return report

    def decompose(self) -> DecompositionSummary:
        analysis = self._analysis()
        eps = load_sequence(self.config.eps)
        x = load_sequence(self.config.x)
        window = self._window(x.window)
        x, eps = x.on(window), eps.on(window)
        support = SupportInfo.of(eps, self.config.mode)
        result = decompose(analysis, x, eps, support)
        summary = DecompositionSummary(
            mode=self.config.mode,
            window=(window.t_min, window.t_max),
            initial_conditions=result.initial.to_report(),
            residual_report=result.residual_report,
            classification=analysis.report(),
            solution_space=solution_space(analysis),
            tolerances=self.tolerances,
        )
        emit_report(result, self.output_dir, summary)
        return summary

    def synthesize(self) -> SynthesisSummary:
        analysis = self._analysis()
        eps = load_sequence(self.config.eps)
        initial = load_initial_conditions(self.config.initial, analysis.dim)
        window = self._window(eps.window).union(eps.window)
        support = SupportInfo.of(eps, self.config.mode)
        x = synthesize(analysis, eps, initial, support, window=window)
        recursion = verify_recursion(
            analysis.phi, x, eps.on(window), tolerances=self.tolerances
        )
        summary = SynthesisSummary(
            window=(window.t_min, window.t_max),
            initial_conditions=initial.to_report(),
            recursion=recursion,
            solution_space=solution_space(analysis),
            tolerances=self.tolerances,
        )
        directory = self.output_dir
        (directory / "x.csv").write_text(export_sequence(x), encoding="utf-8")
        write_json(directory, "summary.json", summary)
        return summary

    def verify(self) -> RecursionReport:
        phi = load_matrix(self.config.phi)
        eps = load_sequence(self.config.eps)
        x = load_sequence(self.config.x)
        window = self._window(x.window)
        report = verify_recursion(phi, x.on(window), eps.on(window), tolerances=self.tolerances)
        write_json(self.output_dir, "verify.json", report)
        if not report.passed:
            raise RecursionViolation(
                f"Recursion residual {report.max_residual:.3e} at t={report.offending_t} "
                f"exceeds {report.threshold:.3e}",
                offending_t=report.offending_t,
                max_residual=report.max_residual,
                threshold=report.threshold,
            )
        return report

    def drazin(self) -> DrazinAxiomReport:
        phi = load_matrix(self.config.phi)
        d = drazin_inverse(phi, tolerances=self.tolerances)
        report = drazin_axiom_check(phi, d, tolerances=self.tolerances)
        directory = self.output_dir
        (directory / "drazin.csv").write_text(export_matrix(d.real()), encoding="utf-8")
        write_json(directory, "drazin.json", report)
        if not report.passed:
            raise NumericError(
                "Drazin inverse fails its defining identities",
                product_residual=report.product_residual,
                commute_residual=report.commute_residual,
                power_residual=report.power_residual,
            )
        return report

    def project(self) -> ProjectorReport:
        analysis = self._analysis()
        pair = False
        if self.config.subset is not None:
            projector = analysis.projector(self.config.subset)
            matrix = projector.entries
            label, rank = projector.subset, projector.rank
        else:
            theta = self.config.theta
            projector = analysis.frequency_projector(theta)
            matrix = projector.entries
            label, rank = projector.subset, projector.rank
            if not projector.matrix.is_real_input:
                partner = analysis.frequency_projector(-theta)
                matrix = matrix + partner.entries
                rank += partner.rank
                pair = True
                label = f"θ=±{abs(theta):.17g}"
        phi = analysis.phi.entries
        report = ProjectorReport(
            subset=label,
            rank=rank,
            conjugate_pair=pair,
            idempotency_residual=norm(matrix @ matrix - matrix),
            commutation_residual=norm(matrix @ phi - phi @ matrix),
            tolerances=self.tolerances,
        )
        real = coerce_real(matrix, self.tolerances.tol_imag, f"Projector {label}")
        directory = self.output_dir
        (directory / "projector.csv").write_text(export_matrix(real), encoding="utf-8")
        write_json(directory, "projector.json", report)
        return report

    def diagnose(self) -> DiagnosticReport:
        eps = load_sequence(self.config.eps)
        eps = eps.on(self._window(eps.window))
        report = subexponential_diagnostic(eps, self.config.r_grid)
        write_json(self.output_dir, "diagnostic.json", report)
        return report


def run_command(config: RunConfig) -> BaseModel:
    logger.info(f"run_command: command={config.command.value} output_dir={config.output_dir}")
    return CommandService(config).run()


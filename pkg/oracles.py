"""Brute-force reference computations used to cross-check the flows."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from config import get_settings
from errors import InputError, UnsupportedDirectionError
from schemas import DiagnosticReport, DrazinAxiomReport, SubexponentialRow, Tolerances
from sequences import TimeWindowSequence, Window
from spectral import Matrix, norm, resolve_tolerances

logger = logging.getLogger(__name__)

SINGULAR_CONDITION = 1e14


class Regime(str, Enum):
    forward = "forward"
    backward = "backward"
    outward = "outward"
    degenerate = "degenerate"


def regime_of(phi: float, tol_unit: Optional[float] = None) -> Regime:
    tol_unit = get_settings().tol_unit if tol_unit is None else tol_unit
    modulus = abs(phi)
    if modulus <= tol_unit:
        return Regime.degenerate
    if abs(modulus - 1.0) <= tol_unit:
        return Regime.outward
    return Regime.forward if modulus < 1.0 else Regime.backward


@dataclass(frozen=True)
class UnivariateCase:
    phi: float
    regime: Regime

    def __post_init__(self) -> None:
        expected = regime_of(self.phi)
        if expected != self.regime:
            raise InputError(
                f"phi={self.phi} belongs to the {expected.value} regime, not {self.regime.value}"
            )

    @classmethod
    def of(cls, phi: float) -> "UnivariateCase":
        return cls(float(phi), regime_of(float(phi)))


def univariate_solution(
    case: UnivariateCase,
    v: float,
    eps: TimeWindowSequence,
    window: Optional[Window] = None,
) -> TimeWindowSequence:
    """Closed-form scalar solution with initial value ``v`` for compactly supported eps."""
    if eps.dim != 1:
        raise InputError(f"Univariate solution needs scalar innovations, got dimension {eps.dim}")
    window = window or eps.window
    values = eps.real_values()[:, 0]
    s = eps.window.times
    t = window.times
    phi = case.phi

    if case.regime == Regime.degenerate:
        return TimeWindowSequence.from_real(window, eps.on(window).real_values())

    lags = (t[:, None] - s[None, :]).astype(float)
    powers = np.power(phi, lags)
    if case.regime == Regime.forward:
        mask = s[None, :] <= t[:, None]
        innovation = (powers * mask) @ values
    elif case.regime == Regime.backward:
        mask = s[None, :] > t[:, None]
        innovation = -(powers * mask) @ values
    else:
        future = (s[None, :] >= 1) & (s[None, :] <= t[:, None])
        past = (s[None, :] > t[:, None]) & (s[None, :] <= 0)
        innovation = (powers * future) @ values - (powers * past) @ values
    path = np.power(phi, t.astype(float)) * v + innovation
    return TimeWindowSequence.from_real(window, path)


def iterate_recursion(
    phi: Matrix,
    anchor_time: int,
    anchor_value: Union[np.ndarray, Sequence[float]],
    eps: TimeWindowSequence,
    window: Optional[Window] = None,
) -> TimeWindowSequence:
    window = window or eps.window
    if not window.contains(anchor_time):
        raise InputError(f"Anchor time {anchor_time} outside window")
    value = np.asarray(anchor_value, dtype=complex).ravel()
    if value.shape[0] != phi.dim or eps.dim != phi.dim:
        raise InputError("Anchor value, innovations and phi disagree on dimension")
    entries = phi.entries
    out = np.zeros((window.length, phi.dim), dtype=complex)
    anchor = window.index(anchor_time)
    out[anchor] = value
    for i in range(anchor + 1, window.length):
        out[i] = entries @ out[i - 1] + eps.at(window.t_min + i)
    if anchor > 0:
        if np.linalg.cond(entries) > SINGULAR_CONDITION:
            raise UnsupportedDirectionError(
                "Backward iteration needs an invertible phi", anchor_time=anchor_time
            )
        lu = scipy.linalg.lu_factor(entries)
        for i in range(anchor, 0, -1):
            out[i - 1] = scipy.linalg.lu_solve(lu, out[i] - eps.at(window.t_min + i))
    real = phi.is_real_input and eps.is_real and not np.iscomplexobj(anchor_value)
    if real:
        return TimeWindowSequence(window, out.real, is_real=True)
    return TimeWindowSequence(window, out)


def drazin_axiom_check(
    m: Matrix, d: Matrix, *, tolerances: Optional[Tolerances] = None
) -> DrazinAxiomReport:
    tol = resolve_tolerances(tolerances)
    a, b = m.entries, d.entries
    n = m.dim
    m_n = np.linalg.matrix_power(a, n)
    product = norm(b @ a @ b - b)
    commute = norm(b @ a - a @ b)
    power = norm(b @ m_n @ a - m_n)
    threshold = tol.tol_drazin * max(1.0, norm(b)) ** 2 * max(1.0, norm(a)) ** (n + 1)
    return DrazinAxiomReport(
        product_residual=product,
        commute_residual=commute,
        power_residual=power,
        threshold=threshold,
        passed=max(product, commute, power) <= threshold,
    )


def _log_slope(envelope: np.ndarray) -> float:
    steps = np.arange(envelope.shape[0], dtype=float)
    half = envelope.shape[0] // 2
    steps, envelope = steps[half:], envelope[half:]
    positive = envelope > 0
    if np.count_nonzero(positive) < 2:
        return 0.0
    slope, _ = np.polyfit(steps[positive], np.log(envelope[positive]), 1)
    return float(slope)


def subexponential_diagnostic(
    eps: TimeWindowSequence, r_grid: Sequence[float]
) -> DiagnosticReport:
    """Weighted sums and growth rates of ||eps_t|| toward both ends of the window.

    A direction is flagged exponential when the log-slope of the running
    maximum of ||eps_t|| reaches -log r; this is a finite-window statistic,
    not a statement about the process that generated eps.
    """
    if not r_grid:
        raise InputError("Diagnostic needs at least one r value")
    for r in r_grid:
        if not 0.0 < r < 1.0:
            raise InputError(f"r must lie in (0, 1), got {r}")
    window = eps.window
    norms = eps.norms()
    t = window.times
    zero = -window.t_min
    future = np.maximum.accumulate(norms[zero:])
    past = np.maximum.accumulate(norms[zero::-1])
    slope_future = _log_slope(future)
    slope_past = _log_slope(past)
    horizon = max(-window.t_min, window.t_max)

    rows = []
    for r in r_grid:
        weights = np.power(r, np.abs(t).astype(float))
        weighted = weights * norms
        partial = [float(np.sum(weighted[np.abs(t) <= h])) for h in range(horizon + 1)]
        threshold = -math.log(r)
        rows.append(
            SubexponentialRow(
                r=r,
                weighted_sum=float(np.sum(weighted)),
                partial_sums=partial,
                threshold=threshold,
                slope_future=slope_future,
                slope_past=slope_past,
                exponential_future=slope_future >= threshold - 1e-9,
                exponential_past=slope_past >= threshold - 1e-9,
            )
        )
    logger.debug(
        f"subexponential_diagnostic: window=[{window.t_min}, {window.t_max}] "
        f"slope_future={slope_future:.4g} slope_past={slope_past:.4g}"
    )
    return DiagnosticReport(window=(window.t_min, window.t_max), rows=rows)

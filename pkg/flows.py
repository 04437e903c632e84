"""The six flows that make up every solution of x_t = Phi x_{t-1} + eps_t.

Forward and backward innovation flows are evaluated exactly when the
innovations have compact support inside the window, and as truncated series in
decay mode. Outward flows are always exact because cumulation only looks at
times between 0 and t.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from config import get_settings
from errors import (
    ClassificationError,
    ComponentIdentityError,
    InconsistencyError,
    InputError,
    NumericError,
    PreconditionError,
    RecursionViolation,
)
from schemas import (
    InitialConditionsOut,
    RecursionReport,
    ResidualReport,
    SolutionSpaceReport,
    SupportMode,
    Tolerances,
    TruncationReport,
)
from sequences import (
    Frequency,
    TimeWindowSequence,
    Window,
    apply_matrix,
    backshift,
    cum_theta,
    generalized_binomial,
    imag_residue,
    max_difference,
    real_part,
    residual_theta,
    sum_sequences,
)
from spectral import (
    Matrix,
    SpectralAnalysis,
    SubsetKind,
    coerce_real,
    norm,
    resolve_tolerances,
    spectral_radius,
)

logger = logging.getLogger(__name__)

FLOW_NAMES = (
    "predetermined_forward",
    "forward_eps",
    "predetermined_backward",
    "backward_eps",
    "predetermined_outward",
    "outward_eps",
)


@dataclass(frozen=True)
class SupportInfo:
    s_min: int
    s_max: int
    mode: SupportMode = SupportMode.compact
    empty: bool = False

    @classmethod
    def of(cls, eps: TimeWindowSequence, mode: SupportMode = SupportMode.compact) -> "SupportInfo":
        bounds = eps.support()
        if bounds is None:
            return cls(0, 0, mode, empty=True)
        return cls(bounds[0], bounds[1], mode)

    def check(self, window: Window) -> None:
        if self.s_min > self.s_max:
            raise InputError(f"Support [{self.s_min}, {self.s_max}] is empty")
        if self.mode == SupportMode.compact and not self.empty:
            if self.s_min < window.t_min or self.s_max > window.t_max:
                raise PreconditionError(
                    f"Support [{self.s_min}, {self.s_max}] leaves window "
                    f"[{window.t_min}, {window.t_max}]"
                )


@dataclass(frozen=True, eq=False)
class InitialConditions:
    forward: np.ndarray
    backward: np.ndarray
    outward: np.ndarray

    def __post_init__(self) -> None:
        for name in ("forward", "backward", "outward"):
            vec = np.array(getattr(self, name), dtype=float).ravel()
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)
        if not self.forward.shape == self.backward.shape == self.outward.shape:
            raise InputError("Initial condition vectors differ in dimension")

    @classmethod
    def zeros(cls, dim: int) -> "InitialConditions":
        return cls(np.zeros(dim), np.zeros(dim), np.zeros(dim))

    @property
    def dim(self) -> int:
        return self.forward.shape[0]

    def check(self, analysis: SpectralAnalysis) -> None:
        if self.dim != analysis.dim:
            raise InputError(
                f"Initial conditions have dimension {self.dim}, expected {analysis.dim}"
            )
        for name, subset in (
            ("forward", SubsetKind.forward),
            ("backward", SubsetKind.backward),
            ("outward", SubsetKind.unit),
        ):
            _check_membership(analysis, getattr(self, name), subset, name)

    def to_report(self) -> InitialConditionsOut:
        return InitialConditionsOut(
            forward=self.forward.tolist(),
            backward=self.backward.tolist(),
            outward=self.outward.tolist(),
        )


@dataclass(frozen=True, eq=False)
class FlowDecomposition:
    predetermined_forward: TimeWindowSequence
    forward_eps: TimeWindowSequence
    predetermined_backward: TimeWindowSequence
    backward_eps: TimeWindowSequence
    predetermined_outward: TimeWindowSequence
    outward_eps: TimeWindowSequence
    initial: InitialConditions
    residual_report: ResidualReport

    @property
    def window(self) -> Window:
        return self.forward_eps.window

    def flows(self) -> dict[str, TimeWindowSequence]:
        return {name: getattr(self, name) for name in FLOW_NAMES}


def _check_membership(
    analysis: SpectralAnalysis, v: np.ndarray, subset: SubsetKind, name: str
) -> None:
    p = analysis.projector(subset).entries
    gap = norm(v - p @ v)
    bound = analysis.proj_tol * max(1.0, norm(v))
    if gap > bound:
        raise InputError(
            f"{name} initial condition is not in its spectral subspace "
            f"(distance {gap:.3e} > {bound:.3e})",
            distance=gap,
        )


def _finish(analysis: SpectralAnalysis, s: TimeWindowSequence) -> TimeWindowSequence:
    if analysis.phi.is_real_input:
        return real_part(s, analysis.tolerances.tol_imag)
    return s


def _span(eps: TimeWindowSequence, window: Optional[Window]) -> Window:
    return eps.window if window is None else eps.window.union(window)


def _target(eps: TimeWindowSequence, window: Optional[Window]) -> Window:
    return eps.window if window is None else window


def _stable_operator(analysis: SpectralAnalysis, base: np.ndarray, subset: SubsetKind, what: str):
    p = analysis.projector(subset).entries
    a = base @ p
    rho = spectral_radius(a)
    if rho >= 1.0 - analysis.tolerances.tol_unit:
        raise ClassificationError(
            f"{what} operator has spectral radius {rho:.6g}, expected < 1",
            spectral_radius=rho,
        )
    return a, p, rho


def _truncation_terms(
    a: np.ndarray, p: np.ndarray, rho: float, sup_eps: float, tol_trunc: float, limit: int
) -> tuple[int, float]:
    rho_hat = rho + (1.0 - rho) / 2.0
    factor = norm(p) * sup_eps / (1.0 - rho_hat)
    power = np.eye(a.shape[0], dtype=complex)
    k = 0
    bound = norm(power) * factor
    while bound >= tol_trunc and k < limit:
        power = a @ power
        k += 1
        bound = norm(power) * factor
    return k, bound


def _truncated_sum(
    a: np.ndarray, projected: np.ndarray, terms: int, direction: int
) -> np.ndarray:
    """Sum of a^k applied to projected values shifted k steps (direction +1 looks back)."""
    out = np.zeros_like(projected)
    power = np.eye(a.shape[0], dtype=complex)
    length = projected.shape[0]
    for k in range(terms):
        if k >= length:
            break
        if direction > 0:
            out[k:] += projected[: length - k] @ power.T
        else:
            out[: length - k] += projected[k:] @ power.T
        power = a @ power
    return out


def _forward_eps(
    analysis: SpectralAnalysis,
    eps: TimeWindowSequence,
    support: SupportInfo,
    window: Optional[Window],
) -> tuple[TimeWindowSequence, int, float]:
    span = _span(eps, window)
    a, p, rho = _stable_operator(analysis, analysis.phi.entries, SubsetKind.stable, "Forward")
    projected = eps.on(span).values @ p.T
    if support.mode == SupportMode.compact:
        support.check(eps.window)
        out = np.zeros_like(projected)
        state = np.zeros(projected.shape[1], dtype=complex)
        for i in range(span.length):
            state = a @ state + projected[i]
            out[i] = state
        terms, bound = span.length, 0.0
    else:
        terms, bound = _truncation_terms(
            a, p, rho, eps.max_norm(), analysis.tolerances.tol_trunc, span.length
        )
        out = _truncated_sum(a, projected, terms, +1)
    seq = TimeWindowSequence(span, out).on(_target(eps, window))
    return _finish(analysis, seq), terms, bound


def _backward_eps(
    analysis: SpectralAnalysis,
    eps: TimeWindowSequence,
    support: SupportInfo,
    window: Optional[Window],
) -> tuple[TimeWindowSequence, int, float]:
    span = _span(eps, window)
    g, p, rho = _stable_operator(analysis, analysis.drazin.entries, SubsetKind.backward, "Backward")
    projected = eps.on(span).values @ p.T
    if support.mode == SupportMode.compact:
        support.check(eps.window)
        out = np.zeros_like(projected)
        state = np.zeros(projected.shape[1], dtype=complex)
        for i in range(span.length - 2, -1, -1):
            state = g @ (state - projected[i + 1])
            out[i] = state
        terms, bound = span.length, 0.0
    else:
        terms, bound = _truncation_terms(
            g, p, rho, eps.max_norm(), analysis.tolerances.tol_trunc, span.length
        )
        shifted = np.zeros_like(projected)
        shifted[:-1] = projected[1:]
        out = -(_truncated_sum(g, shifted, terms, -1) @ g.T)
    seq = TimeWindowSequence(span, out).on(_target(eps, window))
    return _finish(analysis, seq), terms, bound


def forward_eps_flow(
    analysis: SpectralAnalysis,
    eps: TimeWindowSequence,
    support: Optional[SupportInfo] = None,
    *,
    window: Optional[Window] = None,
) -> TimeWindowSequence:
    support = support or SupportInfo.of(eps)
    return _forward_eps(analysis, eps, support, window)[0]


def backward_eps_flow(
    analysis: SpectralAnalysis,
    eps: TimeWindowSequence,
    support: Optional[SupportInfo] = None,
    *,
    window: Optional[Window] = None,
) -> TimeWindowSequence:
    support = support or SupportInfo.of(eps)
    return _backward_eps(analysis, eps, support, window)[0]


def _outward_chain(
    analysis: SpectralAnalysis, start: Callable[[float], TimeWindowSequence]
) -> TimeWindowSequence:
    """Sum over theta and k of (Phi - w I)^{k-1} P_theta (C_theta B)^{k-1} applied to start(theta)."""
    phi = analysis.phi.entries
    total: Optional[np.ndarray] = None
    window: Optional[Window] = None
    for theta in analysis.frequencies:
        f = Frequency(theta)
        p = analysis.frequency_projector(theta).entries
        shift = phi - f.unit_root * np.eye(analysis.dim)
        term = apply_matrix(p, start(theta))
        acc = term.values.copy()
        for _ in range(1, analysis.index_at(theta)):
            term = apply_matrix(shift, cum_theta(backshift(term), f))
            acc = acc + term.values
        total = acc if total is None else total + acc
        window = term.window
    if total is None:
        return None
    return TimeWindowSequence(window, total)


def _outward_eps_complex(
    analysis: SpectralAnalysis, eps: TimeWindowSequence, window: Optional[Window]
) -> TimeWindowSequence:
    span = _span(eps, window)
    extended = eps.on(span)
    seq = _outward_chain(analysis, lambda theta: cum_theta(extended, theta))
    if seq is None:
        return TimeWindowSequence.zeros(_target(eps, window), analysis.dim)
    return seq.on(_target(eps, window))


def outward_eps_flow(
    analysis: SpectralAnalysis,
    eps: TimeWindowSequence,
    *,
    window: Optional[Window] = None,
) -> TimeWindowSequence:
    return _finish(analysis, _outward_eps_complex(analysis, eps, window))


def _signed_orbit(
    analysis: SpectralAnalysis, v: np.ndarray, subset: SubsetKind, window: Window
) -> TimeWindowSequence:
    """Phi^t v on the window, with Drazin powers for negative t."""
    p = analysis.projector(subset).entries
    phi = analysis.phi.entries @ p
    drazin = analysis.drazin.entries @ p
    out = np.zeros((window.length, analysis.dim), dtype=complex)
    zero = -window.t_min
    out[zero] = p @ v
    for i in range(zero + 1, window.length):
        out[i] = phi @ out[i - 1]
    for i in range(zero - 1, -1, -1):
        out[i] = drazin @ out[i + 1]
    return _finish(analysis, TimeWindowSequence(window, out))


def predetermined_forward(
    analysis: SpectralAnalysis, v_forward: np.ndarray, window: Window
) -> TimeWindowSequence:
    v = np.asarray(v_forward, dtype=float).ravel()
    _check_membership(analysis, v, SubsetKind.forward, "forward")
    return _signed_orbit(analysis, v, SubsetKind.forward, window)


def predetermined_backward(
    analysis: SpectralAnalysis, v_backward: np.ndarray, window: Window
) -> TimeWindowSequence:
    v = np.asarray(v_backward, dtype=float).ravel()
    _check_membership(analysis, v, SubsetKind.backward, "backward")
    return _signed_orbit(analysis, v, SubsetKind.backward, window)


def _binomial_outward(analysis: SpectralAnalysis, v: np.ndarray, window: Window) -> np.ndarray:
    shift = analysis.phi.entries - np.eye(analysis.dim)
    term = analysis.frequency_projector(0.0).entries @ v
    times = window.times.astype(float)
    out = np.zeros((window.length, analysis.dim), dtype=complex)
    for k in range(analysis.index_at(0.0)):
        out += generalized_binomial(times, k)[:, None] * term[None, :]
        term = shift @ term
    return out


def _predetermined_outward_complex(
    analysis: SpectralAnalysis, v: np.ndarray, window: Window
) -> TimeWindowSequence:
    seq = _outward_chain(analysis, lambda theta: residual_theta(v, theta, window))
    if seq is None:
        return TimeWindowSequence.zeros(window, analysis.dim)
    if analysis.frequencies == (0.0,):
        closed = _binomial_outward(analysis, v, window)
        gap = float(np.max(np.abs(closed - seq.values), initial=0.0))
        bound = analysis.tolerances.tol_flow * max(1.0, float(np.max(np.abs(closed), initial=0.0)))
        if not gap <= bound:
            raise NumericError(
                f"Binomial and cumulation forms of the outward flow disagree by {gap:.3e}",
                gap=gap,
            )
    return seq


def predetermined_outward(
    analysis: SpectralAnalysis, v_outward: np.ndarray, window: Window
) -> TimeWindowSequence:
    v = np.asarray(v_outward, dtype=float).ravel()
    _check_membership(analysis, v, SubsetKind.unit, "outward")
    return _finish(analysis, _predetermined_outward_complex(analysis, v, window))


def _real_pair(analysis: SpectralAnalysis, theta: float) -> tuple[np.ndarray, np.ndarray]:
    if not 0.0 < theta < math.pi:
        raise PreconditionError(f"Trigonometric form needs theta in (0, pi), got {theta:.6g}")
    classification = analysis.classification
    try:
        plus = classification.frequency_cluster(theta)
        minus = classification.frequency_cluster(-theta)
    except InputError as exc:
        raise PreconditionError(
            f"Frequencies +/-{theta:.6g} are not both in the unit spectrum"
        ) from exc
    for cid in (plus, minus):
        if classification.cluster(cid).index != 1:
            raise PreconditionError(
                f"Trigonometric form needs index one, frequency {theta:.6g} has index "
                f"{classification.cluster(cid).index}"
            )
    p_plus = analysis.frequency_projector(theta).entries
    p_minus = analysis.frequency_projector(-theta).entries
    tol = analysis.tolerances.tol_imag
    cos_part = coerce_real(p_plus + p_minus, tol, "P_theta + P_-theta")
    sin_part = coerce_real(-1j * (p_plus - p_minus), tol, "-i(P_theta - P_-theta)")
    return cos_part, sin_part


def trig_outward_pair(
    analysis: SpectralAnalysis,
    theta: float,
    *,
    x0: Optional[np.ndarray] = None,
    eps: Optional[TimeWindowSequence] = None,
    window: Optional[Window] = None,
) -> TimeWindowSequence:
    """Real outward flows of a conjugate index-one pair {theta, -theta}.

    Returns the predetermined flow of ``x0`` plus the innovation flow of
    ``eps``; either may be omitted.
    """
    cos_part, sin_part = _real_pair(analysis, abs(theta))
    theta = abs(theta)
    if window is None:
        if eps is None:
            raise InputError("trig_outward_pair needs a window or an innovation sequence")
        window = eps.window
    times = window.times.astype(float)
    cos_t = np.cos(theta * times)[:, None]
    sin_t = np.sin(theta * times)[:, None]
    out = np.zeros((window.length, analysis.dim))
    if x0 is not None:
        x0 = np.asarray(x0, dtype=float).ravel()
        out += cos_t * (cos_part @ x0)[None, :] + sin_t * (sin_part @ x0)[None, :]
    if eps is not None:
        values = eps.on(window).real_values()
        a = values @ cos_part.T
        b = values @ sin_part.T
        u = cos_t * a - sin_t * b
        w = sin_t * a + cos_t * b
        zero = -window.t_min
        if window.t_max > 0:
            su = np.cumsum(u[zero + 1 :], axis=0)
            sw = np.cumsum(w[zero + 1 :], axis=0)
            out[zero + 1 :] += cos_t[zero + 1 :] * su + sin_t[zero + 1 :] * sw
        if window.t_min < 0:
            su = np.cumsum(u[zero::-1], axis=0)[:zero][::-1]
            sw = np.cumsum(w[zero::-1], axis=0)[:zero][::-1]
            out[:zero] -= cos_t[:zero] * su + sin_t[:zero] * sw
    return TimeWindowSequence.from_real(window, out)


def synthesize(
    analysis: SpectralAnalysis,
    eps: TimeWindowSequence,
    initial: Optional[InitialConditions] = None,
    support: Optional[SupportInfo] = None,
    *,
    window: Optional[Window] = None,
) -> TimeWindowSequence:
    if eps.dim != analysis.dim:
        raise InputError(f"Innovations have dimension {eps.dim}, expected {analysis.dim}")
    initial = initial or InitialConditions.zeros(analysis.dim)
    initial.check(analysis)
    support = support or SupportInfo.of(eps)
    target = _target(eps, window)
    parts = [
        predetermined_forward(analysis, initial.forward, target),
        forward_eps_flow(analysis, eps, support, window=target),
        predetermined_backward(analysis, initial.backward, target),
        backward_eps_flow(analysis, eps, support, window=target),
        predetermined_outward(analysis, initial.outward, target),
        outward_eps_flow(analysis, eps, window=target),
    ]
    logger.info(f"synthesize: dim={analysis.dim} window=[{target.t_min}, {target.t_max}]")
    return sum_sequences(parts)


def solution_scale(phi: Matrix, *sequences: TimeWindowSequence) -> float:
    largest = max((s.max_norm() for s in sequences), default=0.0)
    return max(1.0, phi.norm()) * max(1.0, largest)


def verify_recursion(
    phi: Matrix,
    x: TimeWindowSequence,
    eps: TimeWindowSequence,
    *,
    tolerances: Optional[Tolerances] = None,
) -> RecursionReport:
    tol = resolve_tolerances(tolerances)
    if x.window != eps.window:
        raise InputError(f"Windows differ: x on {x.window}, eps on {eps.window}")
    if x.dim != phi.dim or eps.dim != phi.dim:
        raise InputError(f"Dimensions differ: phi {phi.dim}, x {x.dim}, eps {eps.dim}")
    threshold = tol.tol_flow * solution_scale(phi, x, eps)
    if x.window.length < 2:
        return RecursionReport(max_residual=0.0, offending_t=None, threshold=threshold, passed=True)
    residual = x.values[1:] - x.values[:-1] @ phi.entries.T - eps.values[1:]
    gaps = np.linalg.norm(residual, axis=1)
    pos = int(np.argmax(gaps))
    worst = float(gaps[pos])
    return RecursionReport(
        max_residual=worst,
        offending_t=x.window.t_min + 1 + pos,
        threshold=threshold,
        passed=worst <= threshold,
    )


def _anchor_vector(
    a: np.ndarray, p: np.ndarray, x: TimeWindowSequence, t: int, n: int, correction=None
) -> np.ndarray:
    vec = p @ x.at(t)
    if correction is not None:
        vec = vec - p @ correction.at(t)
    return np.linalg.matrix_power(a, n) @ vec


def _recover_side(
    analysis: SpectralAnalysis,
    x: TimeWindowSequence,
    subset: SubsetKind,
    base: np.ndarray,
    n0: int,
    sign: int,
    threshold: float,
) -> np.ndarray:
    p = analysis.projector(subset).entries
    if not p.any():
        return np.zeros(analysis.dim)
    a = base @ p
    first = _anchor_vector(a, p, x, sign * n0, n0)
    if x.window.contains(sign * (n0 + 1)):
        second = _anchor_vector(a, p, x, sign * (n0 + 1), n0 + 1)
        gap = norm(first - second)
        if gap > threshold:
            raise InconsistencyError(
                f"{subset.value} initial condition differs by {gap:.3e} between "
                f"anchors {sign * n0} and {sign * (n0 + 1)}",
                offending_t=sign * (n0 + 1),
                gap=gap,
            )
    else:
        logger.warning(
            f"recover_initial_conditions: subset={subset.value} no room to re-check "
            f"anchor {sign * n0}"
        )
    return coerce_real(first, analysis.tolerances.tol_imag, f"{subset.value} initial condition")


def recover_initial_conditions(
    analysis: SpectralAnalysis,
    x: TimeWindowSequence,
    eps: TimeWindowSequence,
    support: Optional[SupportInfo] = None,
) -> InitialConditions:
    support = support or SupportInfo.of(eps)
    window = x.window
    tol = analysis.tolerances
    threshold = tol.tol_flow * solution_scale(analysis.phi, x, eps)
    outward = coerce_real(
        analysis.projector(SubsetKind.unit).entries @ x.at(0), tol.tol_imag, "outward initial condition"
    )

    if support.mode == SupportMode.decay:
        return _recover_decay(analysis, x, eps, support, outward)

    support.check(window)
    n_forward = 0 if support.empty else max(0, 1 - support.s_min)
    n_backward = 0 if support.empty else max(0, support.s_max)
    if -n_forward < window.t_min:
        raise PreconditionError(
            f"Window starts at {window.t_min} but forward recovery needs x at {-n_forward}",
            t_min=window.t_min,
            s_min=support.s_min,
        )
    if n_backward > window.t_max:
        raise PreconditionError(
            f"Window ends at {window.t_max} but backward recovery needs x at {n_backward}",
            t_max=window.t_max,
            s_max=support.s_max,
        )
    forward = _recover_side(
        analysis, x, SubsetKind.forward, analysis.phi.entries, n_forward, -1, threshold
    )
    backward = _recover_side(
        analysis, x, SubsetKind.backward, analysis.drazin.entries, n_backward, +1, threshold
    )
    return InitialConditions(forward, backward, outward)


def _recover_decay(
    analysis: SpectralAnalysis,
    x: TimeWindowSequence,
    eps: TimeWindowSequence,
    support: SupportInfo,
    outward: np.ndarray,
) -> InitialConditions:
    window = x.window
    tol = analysis.tolerances
    forward_flow = forward_eps_flow(analysis, eps, support)
    backward_flow = backward_eps_flow(analysis, eps, support)
    p_f = analysis.projector(SubsetKind.forward).entries
    p_b = analysis.projector(SubsetKind.backward).entries
    forward = _anchor_vector(
        analysis.phi.entries @ p_f, p_f, x, window.t_min, -window.t_min, forward_flow
    )
    backward = _anchor_vector(
        analysis.drazin.entries @ p_b, p_b, x, window.t_max, window.t_max, backward_flow
    )
    logger.info(
        f"recover_initial_conditions: mode=decay anchors=({window.t_min}, {window.t_max}) approximate"
    )
    return InitialConditions(
        coerce_real(forward, tol.tol_imag, "forward initial condition"),
        coerce_real(backward, tol.tol_imag, "backward initial condition"),
        outward,
    )


def _run_flows(
    jobs: Sequence[Callable[[], object]], max_workers: int
) -> list[object]:
    if max_workers <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(job) for job in jobs]
        return [future.result() for future in futures]


def _component(
    analysis: SpectralAnalysis, subset: SubsetKind, x: TimeWindowSequence
) -> TimeWindowSequence:
    return _finish(analysis, apply_matrix(analysis.projector(subset).entries, x))


def decompose(
    analysis: SpectralAnalysis,
    x: TimeWindowSequence,
    eps: TimeWindowSequence,
    support: Optional[SupportInfo] = None,
    *,
    max_workers: Optional[int] = None,
) -> FlowDecomposition:
    tol = analysis.tolerances
    recursion = verify_recursion(analysis.phi, x, eps, tolerances=tol)
    if not recursion.passed:
        raise RecursionViolation(
            f"x does not satisfy the recursion: residual {recursion.max_residual:.3e} "
            f"at t={recursion.offending_t} exceeds {recursion.threshold:.3e}",
            offending_t=recursion.offending_t,
            max_residual=recursion.max_residual,
        )
    support = support or SupportInfo.of(eps)
    initial = recover_initial_conditions(analysis, x, eps, support)
    window = x.window
    workers = max_workers if max_workers is not None else get_settings().max_workers

    results = _run_flows(
        [
            lambda: predetermined_forward(analysis, initial.forward, window),
            lambda: _forward_eps(analysis, eps, support, None),
            lambda: predetermined_backward(analysis, initial.backward, window),
            lambda: _backward_eps(analysis, eps, support, None),
            lambda: _predetermined_outward_complex(analysis, initial.outward, window),
            lambda: _outward_eps_complex(analysis, eps, None),
        ],
        workers,
    )
    pred_fwd, (fwd_eps, fwd_terms, fwd_bound), pred_bwd = results[0], results[1], results[2]
    bwd_eps, bwd_terms, bwd_bound = results[3]
    pred_out_c, out_eps_c = results[4], results[5]
    residue = max(imag_residue(pred_out_c), imag_residue(out_eps_c))
    pred_out = _finish(analysis, pred_out_c)
    out_eps = _finish(analysis, out_eps_c)

    tail = fwd_bound + bwd_bound
    threshold = tol.tol_flow * solution_scale(analysis.phi, x, eps) + tail
    checks = {
        "forward": (
            _component(analysis, SubsetKind.stable, x),
            sum_sequences([pred_fwd, fwd_eps]),
        ),
        "backward": (
            _component(analysis, SubsetKind.backward, x),
            sum_sequences([pred_bwd, bwd_eps]),
        ),
        "outward": (
            _component(analysis, SubsetKind.unit, x),
            sum_sequences([pred_out, out_eps]),
        ),
    }
    gaps = {}
    for name, (expected, actual) in checks.items():
        gap, at = max_difference(expected, actual, interior=True)
        gaps[name] = gap
        if not gap <= threshold:
            raise ComponentIdentityError(
                f"{name} component identity fails by {gap:.3e} at t={at} "
                f"(threshold {threshold:.3e})",
                component=name,
                offending_t=at,
                gap=gap,
            )
    total_gap, at = max_difference(
        x, sum_sequences([pred_fwd, fwd_eps, pred_bwd, bwd_eps, pred_out, out_eps]), interior=True
    )
    if not total_gap <= threshold:
        raise ComponentIdentityError(
            f"Flows do not add up to x: gap {total_gap:.3e} at t={at}",
            component="total",
            offending_t=at,
            gap=total_gap,
        )

    report = ResidualReport(
        recursion=recursion,
        max_imag_residue=residue,
        forward_component=gaps["forward"],
        backward_component=gaps["backward"],
        outward_component=gaps["outward"],
        total=total_gap,
        truncation=TruncationReport(
            mode=support.mode,
            forward_terms=fwd_terms,
            backward_terms=bwd_terms,
            tail_bound=tail,
        ),
    )
    logger.info(
        f"decompose: window=[{window.t_min}, {window.t_max}] mode={support.mode.value} "
        f"total_gap={total_gap:.3e}"
    )
    return FlowDecomposition(
        predetermined_forward=pred_fwd,
        forward_eps=fwd_eps,
        predetermined_backward=pred_bwd,
        backward_eps=bwd_eps,
        predetermined_outward=pred_out,
        outward_eps=out_eps,
        initial=initial,
        residual_report=report,
    )


def solution_space(analysis: SpectralAnalysis) -> SolutionSpaceReport:
    c = analysis.classification

    def dim_of(ids: tuple[int, ...]) -> int:
        return sum(c.cluster(i).algebraic_multiplicity for i in ids)

    dim_unit = dim_of(c.unit_set)
    return SolutionSpaceReport(
        dim_forward=dim_of(c.forward_set),
        dim_backward=dim_of(c.backward_set),
        dim_outward=dim_unit,
        dim_zero=dim_of(c.zero_set),
        unique=analysis.is_nilpotent,
        subexponential_dim=dim_unit,
    )

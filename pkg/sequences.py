"""Finite-window vector sequences and the frequency-specific lag operators.

Sequences are zero outside their window. Every operator here keeps the window
of its input; edge effects only ever touch ``t_min``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np

from errors import ConjugatePairingError, InputError

_SNAP = 1e-14


def normalize_frequency(theta: float) -> float:
    """Map an angle into (-pi, pi]."""
    if not math.isfinite(theta):
        raise InputError(f"Frequency must be finite, got {theta}")
    wrapped = math.remainder(theta, 2 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2 * math.pi
    if abs(wrapped - math.pi) <= _SNAP:
        return math.pi
    if abs(wrapped) <= _SNAP:
        return 0.0
    return wrapped


def _snap(z: np.ndarray) -> np.ndarray:
    re = np.where(np.abs(z.real) < _SNAP, 0.0, z.real)
    im = np.where(np.abs(z.imag) < _SNAP, 0.0, z.imag)
    re = np.where(np.abs(np.abs(re) - 1.0) < _SNAP, np.sign(re), re)
    im = np.where(np.abs(np.abs(im) - 1.0) < _SNAP, np.sign(im), im)
    return re + 1j * im


@dataclass(frozen=True)
class Window:
    t_min: int
    t_max: int

    def __post_init__(self) -> None:
        if not self.t_min <= 0 <= self.t_max:
            raise InputError(
                f"Window [{self.t_min}, {self.t_max}] must contain t=0",
                t_min=self.t_min,
                t_max=self.t_max,
            )

    @classmethod
    def symmetric(cls, half_width: int) -> "Window":
        return cls(-half_width, half_width)

    @property
    def length(self) -> int:
        return self.t_max - self.t_min + 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.t_min, self.t_max + 1)

    @property
    def interior(self) -> np.ndarray:
        return np.arange(self.t_min + 1, self.t_max + 1)

    def index(self, t: int) -> int:
        if not self.contains(t):
            raise InputError(f"Time {t} outside window [{self.t_min}, {self.t_max}]")
        return t - self.t_min

    def contains(self, t: int) -> bool:
        return self.t_min <= t <= self.t_max

    def union(self, other: "Window") -> "Window":
        return Window(min(self.t_min, other.t_min), max(self.t_max, other.t_max))


@dataclass(frozen=True, eq=False)
class TimeWindowSequence:
    window: Window
    values: np.ndarray
    is_real: bool = False

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=complex)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[0] != self.window.length or arr.shape[1] == 0:
            raise InputError(
                f"Sequence values of shape {arr.shape} do not fit window "
                f"[{self.window.t_min}, {self.window.t_max}]"
            )
        if not np.all(np.isfinite(arr)):
            raise InputError("Sequence has non-finite values")
        if self.is_real and np.any(arr.imag):
            raise InputError("Real sequence has nonzero imaginary parts")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def zeros(cls, window: Window, dim: int) -> "TimeWindowSequence":
        return cls(window, np.zeros((window.length, dim)), is_real=True)

    @classmethod
    def from_real(cls, window: Window, values: Union[np.ndarray, Sequence]) -> "TimeWindowSequence":
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        return cls(window, arr, is_real=True)

    @classmethod
    def delta(
        cls, window: Window, at: int, vector: Union[np.ndarray, Sequence, float]
    ) -> "TimeWindowSequence":
        vec = np.atleast_1d(np.asarray(vector))
        values = np.zeros((window.length, vec.shape[0]), dtype=vec.dtype)
        values[window.index(at)] = vec
        return cls(window, values, is_real=not np.iscomplexobj(vec))

    @classmethod
    def constant(
        cls, window: Window, vector: Union[np.ndarray, Sequence, float]
    ) -> "TimeWindowSequence":
        vec = np.atleast_1d(np.asarray(vector))
        values = np.tile(vec, (window.length, 1))
        return cls(window, values, is_real=not np.iscomplexobj(vec))

    @classmethod
    def from_function(
        cls, window: Window, fn: Callable[[int], Any], *, real: bool = True
    ) -> "TimeWindowSequence":
        rows = [np.atleast_1d(np.asarray(fn(int(t)))) for t in window.times]
        return cls(window, np.vstack(rows), is_real=real)

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.window.times

    def at(self, t: int) -> np.ndarray:
        if not self.window.contains(t):
            return np.zeros(self.dim, dtype=complex)
        return self.values[t - self.window.t_min]

    def real_values(self) -> np.ndarray:
        return self.values.real.copy()

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.values, axis=1)

    def max_norm(self) -> float:
        return float(np.max(self.norms(), initial=0.0))

    def on(self, window: Window) -> "TimeWindowSequence":
        """Restrict or zero-extend to another window."""
        out = np.zeros((window.length, self.dim), dtype=complex)
        lo = max(window.t_min, self.window.t_min)
        hi = min(window.t_max, self.window.t_max)
        if lo <= hi:
            out[lo - window.t_min : hi - window.t_min + 1] = self.values[
                lo - self.window.t_min : hi - self.window.t_min + 1
            ]
        return TimeWindowSequence(window, out if not self.is_real else out.real, self.is_real)

    def support(self) -> Optional[tuple[int, int]]:
        nonzero = np.flatnonzero(np.any(self.values != 0, axis=1))
        if nonzero.size == 0:
            return None
        return int(self.window.t_min + nonzero[0]), int(self.window.t_min + nonzero[-1])


@dataclass(frozen=True)
class Frequency:
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", normalize_frequency(float(self.theta)))

    @property
    def is_real(self) -> bool:
        return self.theta in (0.0, math.pi)

    @property
    def unit_root(self) -> complex:
        if self.theta == 0.0:
            return 1.0 + 0j
        if self.theta == math.pi:
            return -1.0 + 0j
        return complex(_snap(np.array([np.exp(-1j * self.theta)]))[0])

    def phases(self, times: np.ndarray) -> np.ndarray:
        """e^{-i theta t} for integer t."""
        times = np.asarray(times)
        if self.theta == 0.0:
            return np.ones(times.shape, dtype=complex)
        if self.theta == math.pi:
            return np.where(times % 2 == 0, 1.0, -1.0).astype(complex)
        return _snap(np.exp(-1j * self.theta * times))

    def conjugate(self) -> "Frequency":
        return Frequency(-self.theta) if self.theta != math.pi else self


FrequencyLike = Union[Frequency, float]


def _frequency(f: FrequencyLike) -> Frequency:
    return f if isinstance(f, Frequency) else Frequency(float(f))


def _check_same(s1: TimeWindowSequence, s2: TimeWindowSequence) -> None:
    if s1.window != s2.window:
        raise InputError(f"Window mismatch: {s1.window} vs {s2.window}")
    if s1.dim != s2.dim:
        raise InputError(f"Dimension mismatch: {s1.dim} vs {s2.dim}")


def backshift(s: TimeWindowSequence) -> TimeWindowSequence:
    out = np.zeros_like(s.values)
    out[1:] = s.values[:-1]
    return TimeWindowSequence(s.window, out, s.is_real)


def diff_theta(s: TimeWindowSequence, f: FrequencyLike) -> TimeWindowSequence:
    f = _frequency(f)
    out = s.values - f.unit_root * backshift(s).values
    return TimeWindowSequence(s.window, out, s.is_real and f.is_real)


def cum_theta(s: TimeWindowSequence, f: FrequencyLike) -> TimeWindowSequence:
    """Cumulation at frequency theta, anchored so that the value at t=0 is zero."""
    f = _frequency(f)
    w = s.window
    phase = f.phases(w.times)[:, None]
    # phase has unit modulus, so its conjugate is e^{+i theta t}
    weighted = np.conj(phase) * s.values
    out = np.zeros_like(s.values)
    zero = -w.t_min
    if w.t_max > 0:
        out[zero + 1 :] = phase[zero + 1 :] * np.cumsum(weighted[zero + 1 :], axis=0)
    if w.t_min < 0:
        backward = np.cumsum(weighted[zero::-1], axis=0)[:zero]
        out[:zero] = -phase[:zero] * backward[::-1]
    return TimeWindowSequence(w, out, s.is_real and f.is_real)


def residual_theta(
    v: Union[np.ndarray, Sequence, float], f: FrequencyLike, window: Window, *, dim: Optional[int] = None
) -> TimeWindowSequence:
    f = _frequency(f)
    vec = np.atleast_1d(np.asarray(v))
    if vec.ndim != 1 or (dim is not None and vec.shape[0] != dim):
        raise InputError(f"Vector of shape {vec.shape} does not match dimension {dim}")
    out = f.phases(window.times)[:, None] * vec[None, :]
    return TimeWindowSequence(window, out, f.is_real and not np.iscomplexobj(vec))


def _matrix_entries(m: Any) -> np.ndarray:
    return np.asarray(getattr(m, "entries", m))


def apply_matrix(m: Any, s: TimeWindowSequence) -> TimeWindowSequence:
    entries = _matrix_entries(m)
    if entries.ndim != 2 or entries.shape[1] != s.dim:
        raise InputError(f"Matrix of shape {entries.shape} cannot act on dimension {s.dim}")
    real = s.is_real and not np.any(np.imag(entries))
    return TimeWindowSequence(s.window, s.values @ entries.T, real)


def add(s1: TimeWindowSequence, s2: TimeWindowSequence) -> TimeWindowSequence:
    _check_same(s1, s2)
    return TimeWindowSequence(s1.window, s1.values + s2.values, s1.is_real and s2.is_real)


def scale(c: complex, s: TimeWindowSequence) -> TimeWindowSequence:
    real = s.is_real and complex(c).imag == 0
    return TimeWindowSequence(s.window, c * s.values, real)


def sum_sequences(items: Sequence[TimeWindowSequence]) -> TimeWindowSequence:
    if not items:
        raise InputError("Cannot sum an empty list of sequences")
    total = items[0]
    for item in items[1:]:
        total = add(total, item)
    return total


def generalized_binomial(t: Union[np.ndarray, Sequence[float]], k: int) -> np.ndarray:
    """t(t-1)...(t-k+1)/k! elementwise, finite for negative integer t."""
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    for j in range(1, k + 1):
        out = out * (t - j + 1) / j
    return out


def imag_residue(s: TimeWindowSequence) -> float:
    return float(np.max(np.abs(s.values.imag), initial=0.0))


def real_part(s: TimeWindowSequence, tol_imag: float) -> TimeWindowSequence:
    if s.is_real:
        return s
    residue = imag_residue(s)
    bound = tol_imag * max(1.0, float(np.max(np.abs(s.values), initial=0.0)))
    if residue > bound:
        raise ConjugatePairingError(
            f"Imaginary residue {residue:.3e} exceeds {bound:.3e}",
            residue=residue,
            bound=bound,
        )
    return TimeWindowSequence(s.window, s.values.real, is_real=True)


def max_difference(
    s1: TimeWindowSequence, s2: TimeWindowSequence, *, interior: bool = False
) -> tuple[float, Optional[int]]:
    """Largest pointwise distance and the time it occurs."""
    _check_same(s1, s2)
    gaps = np.linalg.norm(s1.values - s2.values, axis=1)
    if interior:
        gaps = gaps[1:]
    if gaps.size == 0:
        return 0.0, None
    pos = int(np.argmax(gaps))
    offset = s1.window.t_min + (1 if interior else 0)
    return float(gaps[pos]), offset + pos


def companion_innovations(eps: TimeWindowSequence, p: int) -> TimeWindowSequence:
    if p < 1:
        raise InputError("Lag order must be at least 1")
    out = np.zeros((eps.window.length, eps.dim * p), dtype=complex)
    out[:, : eps.dim] = eps.values
    return TimeWindowSequence(eps.window, out, eps.is_real)


def companion_states(x: TimeWindowSequence, p: int) -> TimeWindowSequence:
    """Stack (x_t, x_{t-1}, ..., x_{t-p+1}); lags before the window are zero."""
    if p < 1:
        raise InputError("Lag order must be at least 1")
    blocks = [x.values]
    lagged = x
    for _ in range(p - 1):
        lagged = backshift(lagged)
        blocks.append(lagged.values)
    return TimeWindowSequence(x.window, np.hstack(blocks), x.is_real)


def project_state(states: TimeWindowSequence, n: int) -> TimeWindowSequence:
    if n < 1 or states.dim % n:
        raise InputError(f"State dimension {states.dim} is not a multiple of {n}")
    return TimeWindowSequence(states.window, states.values[:, :n], states.is_real)

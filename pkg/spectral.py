"""Eigenstructure of a real autoregressive matrix.

Spectral projectors and the Drazin inverse are assembled from a reordered
complex Schur form and one Sylvester solve per split; Jordan chains are never
formed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np
import scipy.linalg
from scipy.linalg import LinAlgError

from config import get_settings
from errors import (
    ClassificationError,
    ConjugatePairingError,
    InputError,
    NumericError,
)
from schemas import ClassificationReport, EigenvalueEntry, Tolerances
from sequences import normalize_frequency

logger = logging.getLogger(__name__)

SYLVESTER_RESIDUAL_LIMIT = 1e-8


def norm(a: np.ndarray) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.ndim == 2:
        return float(np.linalg.norm(a, 2))
    return float(np.linalg.norm(a.ravel()))


def resolve_tolerances(tolerances: Optional[Tolerances]) -> Tolerances:
    return tolerances if tolerances is not None else get_settings().tolerances()


def coerce_real(a: np.ndarray, tol_imag: float, what: str) -> np.ndarray:
    a = np.asarray(a)
    if not np.iscomplexobj(a):
        return a.astype(float)
    residue = float(np.max(np.abs(a.imag), initial=0.0))
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    if residue > tol_imag * scale:
        raise ConjugatePairingError(
            f"{what} has imaginary residue {residue:.3e} above {tol_imag * scale:.3e}",
            residue=residue,
        )
    return a.real.copy()


@dataclass(frozen=True, eq=False)
class Matrix:
    entries: np.ndarray
    is_real_input: bool = False

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InputError("Matrix must be square and non-empty", shape=list(arr.shape))
        if not np.all(np.isfinite(arr)):
            raise InputError("Matrix has non-finite entries")
        if self.is_real_input and np.any(arr.imag):
            raise InputError("Real-input matrix has nonzero imaginary parts")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_real(cls, values: Union[Sequence, np.ndarray, float]) -> "Matrix":
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        return cls(arr, is_real_input=True)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def real(self) -> np.ndarray:
        if not self.is_real_input:
            raise ConjugatePairingError("Matrix is not flagged as real")
        return self.entries.real.copy()

    def norm(self) -> float:
        return norm(self.entries)


def _as_array(m: Union[Matrix, np.ndarray]) -> np.ndarray:
    return m.entries if isinstance(m, Matrix) else np.asarray(m, dtype=complex)


def _wrap(a: np.ndarray, real: bool, tol_imag: float, what: str) -> Matrix:
    if real:
        return Matrix(coerce_real(a, tol_imag, what), is_real_input=True)
    return Matrix(a)


@dataclass(frozen=True)
class EigenCluster:
    id: int
    value: complex
    algebraic_multiplicity: int
    index: int
    member_ids: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    matrix: Matrix
    schur_form: np.ndarray
    unitary: np.ndarray
    eigenvalues: np.ndarray
    clusters: tuple[EigenCluster, ...]
    bases: tuple[np.ndarray, ...]

    def basis(self, cluster_id: int) -> np.ndarray:
        return self.bases[cluster_id]


def _nearest_cluster(values: np.ndarray) -> Callable[[complex], int]:
    def lookup(lam: complex) -> int:
        return int(np.argmin(np.abs(values - lam)))

    return lookup


def _schur(entries: np.ndarray, select: Optional[Callable[[complex], bool]] = None):
    try:
        if select is None:
            t, z = scipy.linalg.schur(entries, output="complex")
            return t, z, None
        return scipy.linalg.schur(entries, output="complex", sort=select)
    except (LinAlgError, ValueError) as exc:
        raise NumericError(f"Schur triangularization failed: {exc}") from exc


def _leading_split(
    entries: np.ndarray, select: Callable[[complex], bool], expected: int
) -> tuple[np.ndarray, np.ndarray]:
    """Projector onto the invariant subspace of the selected eigenvalues.

    Returns the projector along the complementary invariant subspace and an
    orthonormal basis of its range.
    """
    n = entries.shape[0]
    if expected == 0:
        return np.zeros((n, n), dtype=complex), np.zeros((n, 0), dtype=complex)
    if expected == n:
        return np.eye(n, dtype=complex), np.eye(n, dtype=complex)
    t, z, sdim = _schur(entries, select)
    if sdim != expected:
        raise NumericError(
            f"Schur reordering selected {sdim} eigenvalues, expected {expected}",
            selected=int(sdim),
            expected=expected,
        )
    k = expected
    t11, t12, t22 = t[:k, :k], t[:k, k:], t[k:, k:]
    try:
        x = scipy.linalg.solve_sylvester(t11, -t22, -t12)
    except (LinAlgError, ValueError) as exc:
        raise NumericError(f"Sylvester solve failed: {exc}") from exc
    scale = (norm(t11) + norm(t22)) * norm(x) + norm(t12)
    residual = norm(t11 @ x - x @ t22 + t12) / max(scale, np.finfo(float).tiny)
    if not np.isfinite(residual) or residual > SYLVESTER_RESIDUAL_LIMIT:
        raise NumericError(
            f"Ill-conditioned subspace splitting (Sylvester residual {residual:.3e})",
            residual=float(residual),
        )
    p_t = np.zeros((n, n), dtype=complex)
    p_t[:k, :k] = np.eye(k)
    p_t[:k, k:] = -x
    return z @ p_t @ z.conj().T, z[:, :k]


def _cluster_values(
    eigenvalues: np.ndarray, tol_cluster: float
) -> list[list[int]]:
    n = len(eigenvalues)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            a, b = eigenvalues[i], eigenvalues[j]
            if abs(a - b) <= tol_cluster * max(1.0, abs(a), abs(b)):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _symmetrize(values: list[complex], sizes: list[int], tol_cluster: float) -> list[complex]:
    """Make cluster values of a real matrix exactly conjugation-closed."""
    out = list(values)
    for i, v in enumerate(out):
        if abs(v.imag) <= tol_cluster * max(1.0, abs(v)):
            out[i] = complex(v.real, 0.0)
    for i, v in enumerate(out):
        if v.imag <= 0:
            continue
        candidates = [
            j for j, w in enumerate(out) if w.imag < 0 and sizes[j] == sizes[i]
        ]
        if not candidates:
            raise ConjugatePairingError(
                f"Eigenvalue cluster {v:.6g} of a real matrix has no conjugate partner of the "
                f"same multiplicity; a defective eigenvalue may have split, raise tol_cluster "
                f"(now {tol_cluster:g})",
                value=str(v),
                tol_cluster=tol_cluster,
            )
        j = min(candidates, key=lambda c: (abs(out[c] - v.conjugate()), c))
        if abs(out[j] - v.conjugate()) > tol_cluster * max(1.0, abs(v)) * 10:
            raise ConjugatePairingError(
                f"Eigenvalue cluster {v:.6g} of a real matrix has no conjugate partner; "
                f"check tol_cluster (now {tol_cluster:g})",
                value=str(v),
                tol_cluster=tol_cluster,
            )
        mean = 0.5 * (v + out[j].conjugate())
        out[i], out[j] = mean, mean.conjugate()
    return out


def _clusters(
    m: Matrix, tol_cluster: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[EigenCluster]]:
    t, z, _ = _schur(m.entries)
    eigenvalues = np.diag(t).copy()
    groups = _cluster_values(eigenvalues, tol_cluster)
    values = [complex(np.mean(eigenvalues[g])) for g in groups]
    sizes = [len(g) for g in groups]
    if m.is_real_input:
        values = _symmetrize(values, sizes, tol_cluster)
    order = sorted(range(len(groups)), key=lambda i: (values[i].real, values[i].imag))
    clusters = [
        EigenCluster(
            id=new_id,
            value=values[i],
            algebraic_multiplicity=sizes[i],
            index=1,
            member_ids=tuple(groups[i]),
        )
        for new_id, i in enumerate(order)
    ]
    return t, z, eigenvalues, clusters


def eig_decompose(
    m: Matrix,
    tol_cluster: Optional[float] = None,
    *,
    tolerances: Optional[Tolerances] = None,
) -> EigenDecomposition:
    tol = resolve_tolerances(tolerances)
    tol_cluster = tol.tol_cluster if tol_cluster is None else tol_cluster
    t, z, eigenvalues, clusters = _clusters(m, tol_cluster)
    values = np.array([c.value for c in clusters])
    lookup = _nearest_cluster(values)
    bases = []
    indexed = []
    for cluster in clusters:
        p, basis = _leading_split(
            m.entries,
            lambda lam, cid=cluster.id: lookup(lam) == cid,
            cluster.algebraic_multiplicity,
        )
        projector = SpectralProjector(
            subset=f"{{{cluster.value:.6g}}}",
            cluster_ids=(cluster.id,),
            matrix=Matrix(p),
            rank=cluster.algebraic_multiplicity,
        )
        d = eigen_index(m, cluster, projector, tol_nilp=tol.tol_nilp)
        indexed.append(replace(cluster, index=d))
        bases.append(basis)
    if m.is_real_input:
        for cluster in indexed:
            if cluster.value.imag > 0:
                partner = indexed[lookup(cluster.value.conjugate())]
                if partner.index != cluster.index:
                    raise ClassificationError(
                        "Conjugate eigenvalues report different indices",
                        value=str(cluster.value),
                    )
    logger.debug(
        f"eig_decompose: dim={m.dim} clusters={len(indexed)} "
        f"indices={[c.index for c in indexed]}"
    )
    return EigenDecomposition(
        matrix=m,
        schur_form=t,
        unitary=z,
        eigenvalues=eigenvalues,
        clusters=tuple(indexed),
        bases=tuple(bases),
    )


class SubsetKind(str, Enum):
    zero = "zero"
    forward = "forward"
    backward = "backward"
    unit = "unit"
    stable = "stable"
    everything = "all"
    empty = "empty"


SUBSET_SYMBOLS = {
    SubsetKind.zero: "•",
    SubsetKind.forward: "→",
    SubsetKind.backward: "←",
    SubsetKind.unit: "↔",
    SubsetKind.stable: "•→",
    SubsetKind.everything: "σ",
    SubsetKind.empty: "∅",
}

Subset = Union[SubsetKind, str, float, frozenset]


@dataclass(frozen=True)
class SpectralClassification:
    clusters: tuple[EigenCluster, ...]
    zero_set: tuple[int, ...]
    forward_set: tuple[int, ...]
    backward_set: tuple[int, ...]
    unit_set: tuple[int, ...]
    unit_frequencies: tuple[tuple[float, int], ...]
    conjugate_of: tuple[Optional[int], ...]
    tol_unit: float
    tol_cluster: float

    @property
    def dim(self) -> int:
        return sum(c.algebraic_multiplicity for c in self.clusters)

    @property
    def frequencies(self) -> tuple[float, ...]:
        return tuple(theta for theta, _ in self.unit_frequencies)

    def cluster(self, cluster_id: int) -> EigenCluster:
        return self.clusters[cluster_id]

    def group_of(self, cluster_id: int) -> str:
        for name in ("zero", "forward", "backward", "unit"):
            if cluster_id in getattr(self, f"{name}_set"):
                return name
        raise InputError(f"Unknown cluster id {cluster_id}")

    def frequency_cluster(self, theta: float, tol: Optional[float] = None) -> int:
        tol = self.tol_cluster if tol is None else tol
        theta = normalize_frequency(theta)
        for value, cid in self.unit_frequencies:
            gap = abs(theta - value)
            if min(gap, 2 * np.pi - gap) <= tol:
                return cid
        raise InputError(f"Frequency {theta:.6g} is not in the unit spectrum")

    def index_at(self, theta: float) -> int:
        return self.cluster(self.frequency_cluster(theta)).index

    def ids_for(self, kind: SubsetKind) -> tuple[int, ...]:
        if kind == SubsetKind.stable:
            return tuple(sorted(self.zero_set + self.forward_set))
        if kind == SubsetKind.everything:
            return tuple(c.id for c in self.clusters)
        if kind == SubsetKind.empty:
            return ()
        return getattr(self, f"{kind.value}_set")

    def resolve(self, subset: Subset) -> tuple[str, tuple[int, ...]]:
        if isinstance(subset, frozenset):
            ids = tuple(sorted(subset))
            unknown = [i for i in ids if not 0 <= i < len(self.clusters)]
            if unknown:
                raise InputError(f"Subset references unknown clusters {unknown}")
            return "{" + ",".join(str(i) for i in ids) + "}", ids
        if isinstance(subset, (float, int)) and not isinstance(subset, bool):
            cid = self.frequency_cluster(float(subset))
            return f"θ={normalize_frequency(float(subset)):.17g}", (cid,)
        try:
            kind = SubsetKind(subset)
        except ValueError as exc:
            raise InputError(f"Unknown spectral subset {subset!r}") from exc
        return SUBSET_SYMBOLS[kind], self.ids_for(kind)

    def is_conjugation_closed(self, ids: Iterable[int]) -> bool:
        ids = set(ids)
        return all(self.conjugate_of[i] is not None and self.conjugate_of[i] in ids for i in ids)

    def unit_margin(self) -> Optional[float]:
        margins = [
            abs(abs(c.value) - 1.0) for c in self.clusters if c.id not in self.unit_set
        ]
        return min(margins) if margins else None

    def report(self, tolerances: Tolerances) -> ClassificationReport:
        entries = [
            EigenvalueEntry(
                re=c.value.real,
                im=c.value.imag,
                multiplicity=c.algebraic_multiplicity,
                index=c.index,
                group=self.group_of(c.id),
            )
            for c in self.clusters
        ]
        return ClassificationReport(
            dim=self.dim,
            eigenvalues=entries,
            frequencies=list(self.frequencies),
            spectral_radius=max((abs(c.value) for c in self.clusters), default=0.0),
            unit_margin=self.unit_margin(),
            tolerances=tolerances,
        )


def classify_spectrum(
    clusters: Sequence[EigenCluster],
    tol_unit: Optional[float] = None,
    *,
    tol_cluster: Optional[float] = None,
) -> SpectralClassification:
    settings = get_settings()
    tol_unit = settings.tol_unit if tol_unit is None else tol_unit
    tol_cluster = settings.tol_cluster if tol_cluster is None else tol_cluster
    zero, forward, backward, unit = [], [], [], []
    frequencies: dict[int, float] = {}
    for c in clusters:
        modulus = abs(c.value)
        if modulus <= tol_unit:
            zero.append(c.id)
        elif abs(modulus - 1.0) <= tol_unit:
            unit.append(c.id)
            if abs(c.value.imag) <= tol_unit:
                frequencies[c.id] = 0.0 if c.value.real > 0 else float(np.pi)
            else:
                frequencies[c.id] = normalize_frequency(-float(np.angle(c.value)))
        elif modulus < 1.0:
            forward.append(c.id)
        else:
            backward.append(c.id)

    for cid, theta in list(frequencies.items()):
        if theta in (0.0, float(np.pi)) or theta < 0:
            continue
        for other, phi in frequencies.items():
            if other != cid and abs(theta + phi) <= tol_cluster:
                frequencies[other] = -theta

    conjugate_of: list[Optional[int]] = []
    for c in clusters:
        target = c.value.conjugate()
        best = min(clusters, key=lambda o: (abs(o.value - target), o.id))
        close = abs(best.value - target) <= tol_cluster * max(1.0, abs(c.value))
        same = best.algebraic_multiplicity == c.algebraic_multiplicity
        conjugate_of.append(best.id if close and same else None)

    unit_frequencies = tuple(
        sorted(((theta, cid) for cid, theta in frequencies.items()), key=lambda p: p[0])
    )
    logger.debug(
        f"classify_spectrum: clusters={len(clusters)} zero={len(zero)} "
        f"forward={len(forward)} backward={len(backward)} unit={len(unit)}"
    )
    return SpectralClassification(
        clusters=tuple(clusters),
        zero_set=tuple(zero),
        forward_set=tuple(forward),
        backward_set=tuple(backward),
        unit_set=tuple(unit),
        unit_frequencies=unit_frequencies,
        conjugate_of=tuple(conjugate_of),
        tol_unit=tol_unit,
        tol_cluster=tol_cluster,
    )


@dataclass(frozen=True, eq=False)
class SpectralProjector:
    subset: str
    cluster_ids: tuple[int, ...]
    matrix: Matrix
    rank: int

    @property
    def entries(self) -> np.ndarray:
        return self.matrix.entries


def spectral_projector(
    m: Matrix,
    classification: SpectralClassification,
    subset: Subset,
    *,
    tolerances: Optional[Tolerances] = None,
) -> SpectralProjector:
    tol = resolve_tolerances(tolerances)
    label, ids = classification.resolve(subset)
    rank = sum(classification.cluster(i).algebraic_multiplicity for i in ids)
    values = np.array([c.value for c in classification.clusters])
    lookup = _nearest_cluster(values)
    selected = set(ids)
    p, _ = _leading_split(m.entries, lambda lam: lookup(lam) in selected, rank)

    bound = tol.tol_proj * max(1.0, m.norm())
    idempotency = norm(p @ p - p)
    commutation = norm(p @ m.entries - m.entries @ p)
    if idempotency > bound or commutation > bound:
        logger.warning(
            f"spectral_projector: subset={label} idempotency={idempotency:.3e} "
            f"commutation={commutation:.3e} bound={bound:.3e}"
        )
    real = m.is_real_input and classification.is_conjugation_closed(ids)
    return SpectralProjector(
        subset=label,
        cluster_ids=ids,
        matrix=_wrap(p, real, tol.tol_imag, f"Projector {label}"),
        rank=rank,
    )


def drazin_inverse(m: Matrix, *, tolerances: Optional[Tolerances] = None) -> Matrix:
    tol = resolve_tolerances(tolerances)
    _, _, _, clusters = _clusters(m, tol.tol_cluster)
    values = np.array([c.value for c in clusters])
    lookup = _nearest_cluster(values)
    core = {c.id for c in clusters if abs(c.value) > tol.tol_unit}
    rank = sum(c.algebraic_multiplicity for c in clusters if c.id in core)
    n = m.dim
    if rank == 0:
        return Matrix(np.zeros((n, n)), is_real_input=True) if m.is_real_input else Matrix(
            np.zeros((n, n), dtype=complex)
        )
    if rank == n:
        try:
            inv = scipy.linalg.inv(m.entries)
        except LinAlgError as exc:
            raise NumericError(f"Inverse of nonsingular core failed: {exc}") from exc
        return _wrap(inv, m.is_real_input, tol.tol_imag, "Inverse")

    t, z, sdim = _schur(m.entries, lambda lam: lookup(lam) in core)
    if sdim != rank:
        raise NumericError(
            f"Core-nilpotent splitting selected {sdim} eigenvalues, expected {rank}"
        )
    k = rank
    t11, t12, t22 = t[:k, :k], t[:k, k:], t[k:, k:]
    try:
        y = scipy.linalg.solve_sylvester(t11, -t22, -t12)
        t11_inv = scipy.linalg.solve_triangular(t11, np.eye(k, dtype=complex))
    except (LinAlgError, ValueError) as exc:
        raise NumericError(f"Core-nilpotent splitting failed: {exc}") from exc
    residual = norm(t11 @ y - y @ t22 + t12) / max(
        (norm(t11) + norm(t22)) * norm(y) + norm(t12), np.finfo(float).tiny
    )
    if residual > SYLVESTER_RESIDUAL_LIMIT:
        raise NumericError(
            f"Core-nilpotent splitting is ill-conditioned (residual {residual:.3e})",
            residual=float(residual),
        )
    d_t = np.zeros((n, n), dtype=complex)
    d_t[:k, :k] = t11_inv
    d_t[:k, k:] = -t11_inv @ y
    d = z @ d_t @ z.conj().T
    return _wrap(d, m.is_real_input, tol.tol_imag, "Drazin inverse")


def signed_power(
    m: Matrix,
    t: int,
    *,
    drazin: Optional[Matrix] = None,
    tolerances: Optional[Tolerances] = None,
) -> Matrix:
    if t >= 0:
        return Matrix(np.linalg.matrix_power(m.entries, t), is_real_input=m.is_real_input)
    d = drazin if drazin is not None else drazin_inverse(m, tolerances=tolerances)
    return Matrix(np.linalg.matrix_power(d.entries, -t), is_real_input=d.is_real_input)


def eigen_index(
    m: Matrix,
    cluster: EigenCluster,
    projector: SpectralProjector,
    *,
    tol_nilp: Optional[float] = None,
) -> int:
    tol_nilp = get_settings().tol_nilp if tol_nilp is None else tol_nilp
    n = m.dim
    shifted = (m.entries - cluster.value * np.eye(n)) @ projector.entries
    scale = m.norm() + abs(cluster.value)
    power = np.eye(n, dtype=complex)
    for k in range(1, cluster.algebraic_multiplicity + 1):
        power = power @ shifted
        if norm(power) <= tol_nilp * scale**k:
            return k
    raise ClassificationError(
        f"No nilpotency degree found up to multiplicity {cluster.algebraic_multiplicity} "
        f"for eigenvalue {cluster.value:.6g}; check tol_nilp/tol_cluster",
        value=str(cluster.value),
    )


def spectral_radius(m: Union[Matrix, np.ndarray]) -> float:
    a = _as_array(m)
    if a.size == 0:
        return 0.0
    try:
        eigenvalues = scipy.linalg.eigvals(a)
    except LinAlgError as exc:
        raise NumericError(f"Eigenvalue computation failed: {exc}") from exc
    return float(np.max(np.abs(eigenvalues)))


def build_companion(coefficients: Sequence[Union[np.ndarray, Sequence, float]]) -> Matrix:
    if len(coefficients) == 0:
        raise InputError("Companion form needs at least one coefficient matrix")
    blocks = [np.atleast_2d(np.asarray(c, dtype=float)) for c in coefficients]
    n = blocks[0].shape[0]
    for i, block in enumerate(blocks):
        if block.shape != (n, n):
            raise InputError(
                f"Coefficient {i + 1} has shape {block.shape}, expected {(n, n)}"
            )
    p = len(blocks)
    out = np.zeros((n * p, n * p))
    out[:n, :] = np.hstack(blocks)
    if p > 1:
        out[n:, : n * (p - 1)] = np.eye(n * (p - 1))
    return Matrix.from_real(out)


class SpectralAnalysis:
    """Cached spectral data for one autoregressive matrix."""

    def __init__(self, phi: Matrix, tolerances: Optional[Tolerances] = None) -> None:
        self.phi = phi
        self.tolerances = resolve_tolerances(tolerances)
        self.decomposition = eig_decompose(phi, tolerances=self.tolerances)
        self.classification = classify_spectrum(
            self.decomposition.clusters,
            self.tolerances.tol_unit,
            tol_cluster=self.tolerances.tol_cluster,
        )
        self._projectors: dict[object, SpectralProjector] = {}

    @property
    def dim(self) -> int:
        return self.phi.dim

    @property
    def proj_tol(self) -> float:
        return self.tolerances.tol_proj * max(1.0, self.phi.norm())

    def projector(self, subset: Subset) -> SpectralProjector:
        key = subset.value if isinstance(subset, SubsetKind) else subset
        if key not in self._projectors:
            self._projectors[key] = spectral_projector(
                self.phi, self.classification, subset, tolerances=self.tolerances
            )
        return self._projectors[key]

    @cached_property
    def drazin(self) -> Matrix:
        return drazin_inverse(self.phi, tolerances=self.tolerances)

    def power(self, t: int) -> np.ndarray:
        return signed_power(self.phi, t, drazin=self.drazin).entries

    @property
    def frequencies(self) -> tuple[float, ...]:
        return self.classification.frequencies

    def frequency_projector(self, theta: float) -> SpectralProjector:
        return self.projector(float(theta))

    def index_at(self, theta: float) -> int:
        return self.classification.index_at(theta)

    @property
    def is_nilpotent(self) -> bool:
        c = self.classification
        return len(c.zero_set) == len(c.clusters)

    def report(self) -> ClassificationReport:
        return self.classification.report(self.tolerances)


def analyze(phi: Matrix, tolerances: Optional[Tolerances] = None) -> SpectralAnalysis:
    analysis = SpectralAnalysis(phi, tolerances)
    c = analysis.classification
    logger.info(
        f"analyze: dim={phi.dim} zero={len(c.zero_set)} forward={len(c.forward_set)} "
        f"backward={len(c.backward_set)} unit={len(c.unit_set)} "
        f"frequencies={list(c.frequencies)}"
    )
    return analysis

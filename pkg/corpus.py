"""Seeded test corpora: matrices with prescribed Jordan structure and innovations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.stats import ortho_group

from config import get_settings
from errors import InputError
from flows import InitialConditions
from schemas import Tolerances
from sequences import TimeWindowSequence, Window
from spectral import Matrix, SpectralAnalysis, SubsetKind

# Defective blocks split by roughly eps**(1/size) under similarity.
DEFECTIVE_TOLERANCES = {"tol_cluster": 1e-4}

UNIT_ROOTS = (1.0, -1.0, 1j, complex(-0.5, math.sqrt(3) / 2))
STABLE_VALUES = (0.0, 0.3, -0.5, 0.7, complex(0.2, 0.5), complex(-0.4, 0.3))
EXPLOSIVE_VALUES = (1.5, -2.0, 2.6, complex(1.2, 1.1), complex(-1.6, 0.8))

Block = tuple[complex, int]


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(get_settings().seed if seed is None else seed)


def _real_block(value: complex, size: int) -> np.ndarray:
    if abs(value.imag) == 0:
        block = value.real * np.eye(size)
        block += np.diag(np.ones(size - 1), 1)
        return block
    a, b = value.real, abs(value.imag)
    rot = np.array([[a, -b], [b, a]])
    block = np.zeros((2 * size, 2 * size))
    for i in range(size):
        block[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = rot
        if i + 1 < size:
            block[2 * i : 2 * i + 2, 2 * i + 2 : 2 * i + 4] = np.eye(2)
    return block


def jordan_matrix(blocks: Sequence[Block]) -> np.ndarray:
    """Real Jordan form; a complex value stands for its conjugate pair."""
    if not blocks:
        raise InputError("Jordan matrix needs at least one block")
    parts = [_real_block(complex(value), size) for value, size in blocks]
    dim = sum(p.shape[0] for p in parts)
    out = np.zeros((dim, dim))
    offset = 0
    for p in parts:
        k = p.shape[0]
        out[offset : offset + k, offset : offset + k] = p
        offset += k
    return out


def unimodular(dim: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Integer matrix with determinant 1 and its integer inverse."""
    upper = np.triu(rng.integers(-1, 2, size=(dim, dim)), 1) + np.eye(dim, dtype=int)
    lower = np.tril(rng.integers(-1, 2, size=(dim, dim)), -1) + np.eye(dim, dtype=int)
    u = upper @ lower
    inverse = np.rint(np.linalg.inv(u)).astype(int)
    return u.astype(float), inverse.astype(float)


def similar(
    base: np.ndarray, rng: np.random.Generator, kind: str = "orthogonal"
) -> np.ndarray:
    dim = base.shape[0]
    if dim == 1:
        return base.copy()
    if kind == "orthogonal":
        q = ortho_group.rvs(dim, random_state=rng)
        return q @ base @ q.T
    if kind == "unimodular":
        u, inverse = unimodular(dim, rng)
        return u @ base @ inverse
    raise InputError(f"Unknown similarity kind {kind!r}")


@dataclass(frozen=True, eq=False)
class CorpusInstance:
    name: str
    blocks: tuple[Block, ...]
    phi: Matrix
    tolerance_overrides: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.phi.dim

    @property
    def defective(self) -> bool:
        return any(size > 1 for _, size in self.blocks)

    def tolerances(self) -> Tolerances:
        return get_settings().tolerances(**self.tolerance_overrides)

    def analyze(self) -> SpectralAnalysis:
        return SpectralAnalysis(self.phi, self.tolerances())


def _block_dim(blocks: Sequence[Block]) -> int:
    return sum(size * (2 if complex(v).imag else 1) for v, size in blocks)


def make_instance(
    name: str, blocks: Sequence[Block], rng: np.random.Generator, kind: str = "orthogonal"
) -> CorpusInstance:
    blocks = tuple((complex(v), int(k)) for v, k in blocks)
    phi = Matrix.from_real(similar(jordan_matrix(blocks), rng, kind))
    overrides = dict(DEFECTIVE_TOLERANCES) if any(k > 1 for _, k in blocks) else {}
    return CorpusInstance(name=name, blocks=blocks, phi=phi, tolerance_overrides=overrides)


def _draw_blocks(rng: np.random.Generator, family: str, max_dim: int) -> list[Block]:
    if family == "nilpotent":
        blocks, room = [], max_dim
        while room > 0:
            size = int(rng.integers(1, min(3, room) + 1))
            blocks.append((0j, size))
            room -= size
        return blocks
    if family == "rotation":
        pool = list(UNIT_ROOTS[2:])
    else:
        pool = list(STABLE_VALUES + EXPLOSIVE_VALUES + UNIT_ROOTS)
    max_size = 3 if family in ("defective", "mixed") else 1
    blocks: list[Block] = []
    for pos in rng.permutation(len(pool)):
        value = complex(pool[pos])
        width = 2 if value.imag else 1
        room = max_dim - _block_dim(blocks)
        size = int(rng.integers(1, max_size + 1))
        if family == "defective" and not any(k > 1 for _, k in blocks):
            size = max(size, 2)
        size = min(size, room // width)
        if size < 1:
            continue
        blocks.append((value, size))
        if family == "rotation":
            break
    return blocks


FAMILIES = ("diagonal", "defective", "rotation", "nilpotent", "mixed")


def matrix_corpus(
    count: int = 200, *, seed: Optional[int] = None, max_dim: int = 8
) -> list[CorpusInstance]:
    """Deterministic mix of diagonal, defective, rotation, nilpotent and mixed matrices."""
    rng = make_rng(seed)
    corpus = []
    for i in range(count):
        family = FAMILIES[i % len(FAMILIES)]
        target = int(rng.integers(1, max_dim + 1))
        if family == "rotation":
            target = max(target, 2)
        blocks = _draw_blocks(rng, family, target)
        defective = any(k > 1 for _, k in blocks)
        small = _block_dim(blocks) <= 4
        kind = "unimodular" if i % 3 == 2 and small and not defective else "orthogonal"
        corpus.append(make_instance(f"{family}-{i}", blocks, rng, kind))
    return corpus


def compact_innovations(
    window: Window,
    dim: int,
    rng: np.random.Generator,
    support: Optional[tuple[int, int]] = None,
) -> TimeWindowSequence:
    s_min, s_max = support if support is not None else (window.t_min + 1, window.t_max - 1)
    values = np.zeros((window.length, dim))
    lo, hi = s_min - window.t_min, s_max - window.t_min + 1
    values[lo:hi] = rng.uniform(-1.0, 1.0, size=(hi - lo, dim))
    return TimeWindowSequence.from_real(window, values)


def decaying_innovations(
    window: Window, dim: int, rng: np.random.Generator, rate: float = 0.5
) -> TimeWindowSequence:
    weights = np.power(rate, np.abs(window.times).astype(float))[:, None]
    return TimeWindowSequence.from_real(
        window, weights * rng.uniform(-1.0, 1.0, size=(window.length, dim))
    )


def bounded_innovations(
    window: Window, dim: int, rng: np.random.Generator
) -> TimeWindowSequence:
    t = window.times.astype(float)[:, None]
    noise = rng.uniform(-1.0, 1.0, size=(window.length, dim))
    return TimeWindowSequence.from_real(window, 0.5 * noise + 0.5 * np.cos(t))


def exponential_sequence(window: Window, dim: int, base: float) -> TimeWindowSequence:
    values = np.power(base, np.abs(window.times).astype(float))[:, None]
    return TimeWindowSequence.from_real(window, np.tile(values, (1, dim)))


def random_initial_conditions(
    analysis: SpectralAnalysis, rng: np.random.Generator
) -> InitialConditions:
    def draw(subset: SubsetKind) -> np.ndarray:
        p = analysis.projector(subset).matrix.real()
        return p @ rng.uniform(-1.0, 1.0, size=analysis.dim)

    return InitialConditions(
        draw(SubsetKind.forward), draw(SubsetKind.backward), draw(SubsetKind.unit)
    )


def growth_rate(analysis: SpectralAnalysis) -> float:
    """Largest per-step growth of any predetermined flow, in either time direction."""
    c = analysis.classification
    rates = [1.0]
    rates += [1.0 / abs(c.cluster(i).value) for i in c.forward_set]
    rates += [abs(c.cluster(i).value) for i in c.backward_set]
    return max(rates)


def safe_half_width(analysis: SpectralAnalysis, requested: int, limit: float = 1e12) -> int:
    rate = growth_rate(analysis)
    if rate <= 1.0 + 1e-12:
        return requested
    return max(1, min(requested, int(math.log(limit) / math.log(rate))))

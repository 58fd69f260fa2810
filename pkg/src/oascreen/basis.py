"""Orthonormal polynomial contrasts on equally weighted levels 0..s-1.

For an s-level factor the contrasts c_0, ..., c_{s-1} are polynomials of
exactly those degrees with c_0 = 1 and

    sum_x c_u(x) c_v(x) = s * delta_uv.

Tables are produced by exact rational Gram-Schmidt on the monomials and
rounded once at the final square root, so repeated runs give bitwise
identical values. The sign convention makes every leading coefficient
positive; for three levels this yields

    c_1 = (-sqrt(3/2), 0, sqrt(3/2)),   c_2 = (sqrt(2)/2, -sqrt(2), sqrt(2)/2).

Multi-factor contrasts are products over factors, indexed by exponent
tuples t (entry t_j is the degree used for factor j). Tuples are always
enumerated in lexicographic order of (t_1, ..., t_m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .design import Design, DesignError

__all__ = [
    "MAX_FACTORS",
    "MAX_TUPLES",
    "OrthonormalBasis",
    "TupleSpace",
    "bases_for",
    "contrast_matrix",
    "contrast_value",
    "full_contrast_matrix",
    "orthonormal_basis",
    "tuple_space",
]

# Materializing every exponent tuple is refused beyond these limits instead
# of silently thrashing memory.
MAX_FACTORS = 12
MAX_TUPLES = 3**12


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Contrast table for one factor; ``table[u, x]`` is c_u evaluated at level x."""

    levels: int
    table: np.ndarray

    def value(self, degree: int, level: int) -> float:
        return float(self.table[degree, level])


@lru_cache(maxsize=None)
def orthonormal_basis(levels: int) -> OrthonormalBasis:
    """Build the orthonormal contrast table for an s-level factor (s >= 2)."""
    s = int(levels)
    if s < 2:
        raise DesignError(f"need at least two levels, got {s}")
    monic: list[list[Fraction]] = []
    for u in range(s):
        vec = [Fraction(x) ** u for x in range(s)]
        for prev in monic:
            coef = sum(a * b for a, b in zip(vec, prev)) / sum(b * b for b in prev)
            vec = [a - coef * b for a, b in zip(vec, prev)]
        monic.append(vec)
    table = np.zeros((s, s))
    for u, vec in enumerate(monic):
        norm = sum(v * v for v in vec)
        for x, v in enumerate(vec):
            if v == 0:
                continue
            # exact rational square of the normalized value; one rounding here
            squared = v * v * s / norm
            table[u, x] = math.copysign(math.sqrt(float(squared)), float(v))
    table.setflags(write=False)
    return OrthonormalBasis(s, table)


def bases_for(level_counts) -> tuple[OrthonormalBasis, ...]:
    return tuple(orthonormal_basis(int(s)) for s in level_counts)


def contrast_value(bases, exponents, row) -> float:
    """Product of per-factor contrast values: prod_j c_{t_j}(x_j)."""
    if not (len(bases) == len(exponents) == len(row)):
        raise DesignError(
            f"dimension mismatch: {len(bases)} bases, {len(exponents)} exponents, {len(row)} levels"
        )
    out = 1.0
    for basis, t, x in zip(bases, exponents, row):
        out *= basis.table[int(t), int(x)]
    return float(out)


@dataclass(frozen=True, eq=False)
class TupleSpace:
    """All exponent tuples for given level counts, in lexicographic order.

    ``tuples`` is an (N, m) array; ``norm0[i]`` counts nonzero entries of
    tuple i and ``norm1[i]`` is its total polynomial degree.
    """

    level_counts: tuple[int, ...]
    tuples: np.ndarray
    norm0: np.ndarray
    norm1: np.ndarray

    @property
    def size(self) -> int:
        return int(self.tuples.shape[0])

    @property
    def factors(self) -> int:
        return int(self.tuples.shape[1])

    @property
    def max_degree(self) -> int:
        """Largest total degree, sum_j (s_j - 1); the pattern length m'."""
        return sum(s - 1 for s in self.level_counts)

    def degree_mask(self, k: int) -> np.ndarray:
        return self.norm1 == int(k)

    def count_of(self, value: int) -> np.ndarray:
        """Per-tuple count of entries equal to ``value``."""
        return (self.tuples == int(value)).sum(axis=1)

    def split_mask(self, ones: int, twos: int) -> np.ndarray:
        """Tuples with the given numbers of 1 and 2 entries (3-level factors only)."""
        if any(s != 3 for s in self.level_counts):
            raise DesignError("split classes are defined for 3-level designs only")
        return (self.count_of(1) == int(ones)) & (self.count_of(2) == int(twos))

    def index_of(self, exponents) -> int:
        t = tuple(int(v) for v in exponents)
        if len(t) != self.factors:
            raise DesignError(f"tuple has {len(t)} entries, expected {self.factors}")
        idx = 0
        for v, s in zip(t, self.level_counts):
            if not 0 <= v < s:
                raise DesignError(f"exponent {v} outside 0..{s - 1}")
            idx = idx * s + v
        return idx


@lru_cache(maxsize=None)
def tuple_space(level_counts: tuple[int, ...]) -> TupleSpace:
    levels = tuple(int(s) for s in level_counts)
    m = len(levels)
    if m < 1 or min(levels, default=0) < 2:
        raise DesignError(f"invalid level counts {levels}")
    size = math.prod(levels)
    if m > MAX_FACTORS or size > MAX_TUPLES:
        raise DesignError(
            f"refusing to materialize {size} exponent tuples over {m} factors "
            f"(limits: {MAX_FACTORS} factors, {MAX_TUPLES} tuples)"
        )
    grid = np.indices(levels).reshape(m, -1).T
    grid = np.ascontiguousarray(grid, dtype=np.int64)
    grid.setflags(write=False)
    norm1 = grid.sum(axis=1)
    norm0 = (grid != 0).sum(axis=1)
    norm1.setflags(write=False)
    norm0.setflags(write=False)
    return TupleSpace(levels, grid, norm0, norm1)


def full_contrast_matrix(design: Design) -> np.ndarray:
    """n x N matrix of C_t(x_i) over every exponent tuple t (lexicographic columns)."""
    space = tuple_space(design.level_counts)
    if design.runs * space.size > 60_000_000:
        raise DesignError(
            f"full contrast matrix would hold {design.runs * space.size} entries; "
            "use contrast_matrix with a class selection instead"
        )
    bases = bases_for(design.level_counts)
    n = design.runs
    out = np.ones((n, 1))
    for j, basis in enumerate(bases):
        vals = basis.table[:, design.matrix[:, j]]  # (s_j, n)
        out = (out[:, :, None] * vals.T[:, None, :]).reshape(n, -1)
    return out


def contrast_matrix(design: Design, selection) -> np.ndarray:
    """Contrast columns for one tuple class.

    ``selection`` is an int k for the degree class (k = 0 gives the all-ones
    column) or a pair (i, j) for the 3-level class with i entries equal to 1
    and j entries equal to 2. Empty classes yield 0-column matrices.
    """
    space = tuple_space(design.level_counts)
    if isinstance(selection, tuple):
        mask = space.split_mask(*selection)
    else:
        mask = space.degree_mask(int(selection))
    chosen = space.tuples[mask]
    bases = bases_for(design.level_counts)
    out = np.ones((design.runs, chosen.shape[0]))
    for j, basis in enumerate(bases):
        vals = basis.table[chosen[:, j], :]  # (cols, s_j)
        out *= vals[:, design.matrix[:, j]].T
    return out

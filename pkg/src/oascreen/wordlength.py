"""Indicator-function coefficients and wordlength patterns.

The indicator function of a design D inside its full factorial lattice is
F_D(x) = sum_t b_t C_t(x) with b_t = (1/N) sum_{x in D} C_t(x); it equals
the fraction of lattice replicates of x present in D. The normalized
ratios b_t / b_0 drive everything downstream:

* beta_pattern:  beta_k = sum_{|t|_1 = k} (b_t / b_0)^2, for k = 1..m'.
* beta_split:    3-level grid beta_{i,j} over tuples with i ones and j twos.
* xi_grid:       3-level cross-term grid pairing the level-0 and level-2
                 completions of tuples with a free position.

Ratios are computed as column sums of the contrast matrix divided by n,
with fixed summation order, so results are reproducible bit for bit. The
same arithmetic is reused by the general-mean contamination in
:mod:`oascreen.contamination`, which is why the two agree to machine
precision and not just analytically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import TupleSpace, full_contrast_matrix, tuple_space
from .design import Design, DesignError

__all__ = [
    "IndicatorCoefficients",
    "beta_pattern",
    "beta_split",
    "contrast_ratio_vector",
    "indicator_coefficients",
    "xi_grid",
]


def contrast_ratio_vector(design: Design) -> np.ndarray:
    """b_t / b_0 for every exponent tuple, i.e. column means of the contrast matrix."""
    return full_contrast_matrix(design).sum(axis=0) / design.runs


@dataclass(frozen=True, eq=False)
class IndicatorCoefficients:
    """Coefficients b_t of a design's indicator function, lexicographic tuple order."""

    level_counts: tuple[int, ...]
    runs: int
    values: np.ndarray

    @property
    def b0(self) -> float:
        """Constant coefficient, the sampling fraction n / N."""
        return float(self.values[0])

    @property
    def space(self) -> TupleSpace:
        return tuple_space(self.level_counts)

    def coefficient(self, exponents) -> float:
        return float(self.values[self.space.index_of(exponents)])

    def as_dict(self) -> dict[tuple[int, ...], float]:
        space = self.space
        return {
            tuple(int(v) for v in space.tuples[i]): float(self.values[i])
            for i in range(space.size)
        }


def indicator_coefficients(design: Design) -> IndicatorCoefficients:
    """All N indicator coefficients b_t = (1/N) sum_{runs} C_t(x)."""
    sums = full_contrast_matrix(design).sum(axis=0)
    values = sums / design.lattice_size
    values.setflags(write=False)
    return IndicatorCoefficients(design.level_counts, design.runs, values)


def beta_pattern(design: Design) -> np.ndarray:
    """Wordlength pattern (beta_1, ..., beta_m'); entry k-1 holds beta_k."""
    space = tuple_space(design.level_counts)
    squares = _ratio_squares(design, space)
    return np.array(
        [float(np.sum(squares[space.degree_mask(k)])) for k in range(1, space.max_degree + 1)]
    )


def beta_split(design: Design) -> np.ndarray:
    """3-level grid with entry (i, j) = sum of (b_t/b_0)^2 over tuples with i ones, j twos.

    Shape is (m+1, m+1); entries with i + j > m are structurally zero and
    entry (0, 0) is 1 by definition.
    """
    space = _three_level_space(design)
    squares = _ratio_squares(design, space)
    m = design.factors
    grid = np.zeros((m + 1, m + 1))
    np.add.at(grid, (space.count_of(1), space.count_of(2)), squares)
    return grid


def xi_grid(design: Design) -> np.ndarray:
    """3-level cross-term grid xi_{i,j}.

    For every factor position l and every pattern of the other m-1 entries
    with i ones and j twos, the product of the two ratios obtained by
    completing the pattern with 0 and with 2 at position l is accumulated
    into entry (i, j). Each off-position pattern counts once per l. Entries
    may be negative. Shape is (m+1, m+1); only i + j <= m-1 can be nonzero.
    """
    space = _three_level_space(design)
    ratios = contrast_ratio_vector(design)
    m = design.factors
    grid = np.zeros((m + 1, m + 1))
    shaped = ratios.reshape((3,) * m)
    if m == 1:
        grid[0, 0] = float(shaped[0] * shaped[2])
        return grid
    sub = tuple_space((3,) * (m - 1))
    ones = sub.count_of(1)
    twos = sub.count_of(2)
    for axis in range(m):
        low = np.take(shaped, 0, axis=axis).ravel()
        high = np.take(shaped, 2, axis=axis).ravel()
        np.add.at(grid, (ones, twos), low * high)
    return grid


def _three_level_space(design: Design) -> TupleSpace:
    if not design.is_three_level:
        raise DesignError("split quantities are defined for 3-level designs only")
    return tuple_space(design.level_counts)


def _ratio_squares(design: Design, space: TupleSpace) -> np.ndarray:
    ratios = contrast_ratio_vector(design)
    return ratios * ratios

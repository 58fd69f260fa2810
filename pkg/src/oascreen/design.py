"""Integer-level experimental designs: validation, transforms, and text I/O.

A design is an n-run (rows) by m-factor (columns) integer array; factor j
takes levels 0..s_j-1. Instances are frozen after validation and every
operation here is a pure function returning a new object, so designs are
safe to share across threads.

Run order is never treated as meaningful: designs are compared as run
multisets (see :func:`same_run_multiset`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Design",
    "DesignError",
    "DesignFormatError",
    "LevelPermutation",
    "apply_permutation",
    "column_subset",
    "format_design",
    "is_mirror_symmetric",
    "load_design",
    "mirror_image",
    "parse_design",
    "same_run_multiset",
    "save_design",
    "strength",
    "validate",
]


class DesignError(ValueError):
    """Invalid design data or transform argument."""


class DesignFormatError(DesignError):
    """Malformed design text. Messages carry 1-based line numbers."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, eq=False)
class Design:
    """A validated design matrix plus its per-factor level counts."""

    matrix: np.ndarray
    level_counts: tuple[int, ...]

    def __post_init__(self) -> None:
        try:
            mat = np.asarray(self.matrix)
        except ValueError as exc:
            raise DesignError(f"design matrix is ragged: {exc}") from exc
        if mat.dtype == object:
            raise DesignError("design matrix is ragged or non-numeric")
        if mat.ndim != 2:
            raise DesignError(f"design matrix must be two-dimensional, got shape {mat.shape}")
        n, m = mat.shape
        if n < 1 or m < 1:
            raise DesignError("design must have at least one run and one factor")
        if not np.issubdtype(mat.dtype, np.integer):
            raise DesignError(f"design cells must be integers, got dtype {mat.dtype}")
        levels = tuple(int(s) for s in np.atleast_1d(np.asarray(self.level_counts)))
        if len(levels) != m:
            raise DesignError(f"matrix has {m} columns but {len(levels)} level counts were declared")
        if min(levels) < 2:
            raise DesignError("every factor needs at least two levels")
        for j, s in enumerate(levels):
            col = mat[:, j]
            bad = np.nonzero((col < 0) | (col >= s))[0]
            if bad.size:
                i = int(bad[0])
                raise DesignError(
                    f"cell (run {i + 1}, factor {j + 1}) = {int(col[i])} outside levels 0..{s - 1}"
                )
        frozen = np.ascontiguousarray(mat, dtype=np.int64)
        frozen.setflags(write=False)
        object.__setattr__(self, "matrix", frozen)
        object.__setattr__(self, "level_counts", levels)

    @property
    def runs(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def factors(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def lattice_size(self) -> int:
        """Size of the full factorial lattice the design lives in: prod(s_j)."""
        out = 1
        for s in self.level_counts:
            out *= s
        return out

    @property
    def is_three_level(self) -> bool:
        return all(s == 3 for s in self.level_counts)

    def __repr__(self) -> str:
        levels = "x".join(str(s) for s in self.level_counts)
        return f"Design({self.runs} runs, {self.factors} factors, levels {levels})"


def validate(cells, level_counts) -> Design:
    """Validate a raw integer matrix against declared level counts."""
    return Design(cells, tuple(int(s) for s in np.atleast_1d(np.asarray(level_counts))))


def strength(design: Design) -> int:
    """Largest r such that every r-column projection is equireplicated (0 if none)."""
    mat = design.matrix
    levels = design.level_counts
    r = 0
    for size in range(1, design.factors + 1):
        if all(
            _equireplicated(mat, levels, combo)
            for combo in itertools.combinations(range(design.factors), size)
        ):
            r = size
        else:
            break
    return r


def _equireplicated(mat: np.ndarray, levels: tuple[int, ...], cols: tuple[int, ...]) -> bool:
    full = 1
    for j in cols:
        full *= levels[j]
    n = mat.shape[0]
    if n % full:
        return False
    codes = np.ravel_multi_index(
        tuple(mat[:, j] for j in cols), tuple(levels[j] for j in cols)
    )
    counts = np.bincount(codes, minlength=full)
    return bool((counts == n // full).all())


@dataclass(frozen=True)
class LevelPermutation:
    """Per-factor relabelling of levels; ``images[j][x]`` is the new label of level x."""

    images: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        images = tuple(tuple(int(v) for v in img) for img in self.images)
        for j, img in enumerate(images):
            if sorted(img) != list(range(len(img))):
                raise DesignError(f"factor {j + 1}: {img} is not a permutation of 0..{len(img) - 1}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, level_counts) -> "LevelPermutation":
        return cls(tuple(tuple(range(int(s))) for s in level_counts))

    @classmethod
    def single(cls, level_counts, column: int, image) -> "LevelPermutation":
        """Identity everywhere except ``column`` (0-based), which gets ``image``."""
        images = [list(range(int(s))) for s in level_counts]
        images[column] = [int(v) for v in image]
        return cls(tuple(tuple(img) for img in images))


def apply_permutation(design: Design, perm: LevelPermutation) -> Design:
    """Relabel levels columnwise; run order is unchanged."""
    if len(perm.images) != design.factors:
        raise DesignError(
            f"permutation covers {len(perm.images)} factors, design has {design.factors}"
        )
    cols = []
    for j, (img, s) in enumerate(zip(perm.images, design.level_counts)):
        if len(img) != s:
            raise DesignError(f"factor {j + 1}: permutation of {len(img)} levels, factor has {s}")
        cols.append(np.asarray(img, dtype=np.int64)[design.matrix[:, j]])
    return Design(np.column_stack(cols), design.level_counts)


def mirror_image(design: Design) -> Design:
    """Reverse the level order of every factor: x -> (s_j - 1) - x."""
    tops = np.asarray(design.level_counts, dtype=np.int64) - 1
    return Design(tops[None, :] - design.matrix, design.level_counts)


def same_run_multiset(a: Design, b: Design) -> bool:
    """True when the two designs contain the same runs, ignoring run order."""
    if a.level_counts != b.level_counts or a.runs != b.runs:
        return False
    return bool(np.array_equal(_sorted_rows(a.matrix), _sorted_rows(b.matrix)))


def _sorted_rows(mat: np.ndarray) -> np.ndarray:
    order = np.lexsort(mat.T[::-1])
    return mat[order]


def is_mirror_symmetric(design: Design) -> bool:
    """True when the design equals its mirror image as a run multiset."""
    return same_run_multiset(design, mirror_image(design))


def column_subset(design: Design, indices) -> Design:
    """Project onto the given 0-based columns, preserving run order."""
    idx = tuple(int(i) for i in indices)
    if not idx:
        raise DesignError("need at least one column")
    if len(set(idx)) != len(idx):
        raise DesignError(f"duplicate column index in {idx}")
    for i in idx:
        if not 0 <= i < design.factors:
            raise DesignError(f"column index {i} out of range 0..{design.factors - 1}")
    return Design(design.matrix[:, idx], tuple(design.level_counts[i] for i in idx))


# ---------------------------------------------------------------------------
# Text format: header "n m s_1 ... s_m", then n rows of m integers.
# Lines starting with '#' and blank lines are ignored.

def parse_design(text: str, transpose: bool = False) -> Design:
    """Parse the design text format; ``transpose`` reads factors-as-rows layout."""
    header: tuple[int, int, list[int]] | None = None
    rows: list[tuple[int, list[int]]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        values = []
        for token in line.split():
            try:
                values.append(int(token))
            except ValueError:
                raise DesignFormatError(f"non-integer token {token!r}", lineno) from None
        if header is None:
            if len(values) < 3:
                raise DesignFormatError("header must be 'n m s_1 ... s_m'", lineno)
            n, m = values[0], values[1]
            svals = values[2:]
            if len(svals) != m:
                raise DesignFormatError(
                    f"header declares {m} factors but lists {len(svals)} level counts", lineno
                )
            header = (n, m, svals)
        else:
            rows.append((lineno, values))
    if header is None:
        raise DesignFormatError("no header line found")
    n, m, svals = header
    want_rows, want_cols = (m, n) if transpose else (n, m)
    if len(rows) != want_rows:
        raise DesignFormatError(
            f"expected {want_rows} data rows, found {len(rows)}", last_line
        )
    for lineno, values in rows:
        if len(values) != want_cols:
            raise DesignFormatError(
                f"expected {want_cols} entries, found {len(values)}", lineno
            )
    data = np.asarray([values for _, values in rows], dtype=np.int64)
    if transpose:
        data = data.T
    try:
        return Design(data, tuple(svals))
    except DesignError as exc:
        raise DesignFormatError(str(exc)) from exc


def format_design(design: Design) -> str:
    """Render a design in the text format accepted by :func:`parse_design`."""
    head = f"{design.runs} {design.factors} " + " ".join(str(s) for s in design.level_counts)
    body = "\n".join(" ".join(str(int(v)) for v in row) for row in design.matrix)
    return head + "\n" + body + "\n"


def load_design(path, transpose: bool = False) -> Design:
    return parse_design(Path(path).read_text(), transpose=transpose)


def save_design(design: Design, path) -> None:
    Path(path).write_text(format_design(design))

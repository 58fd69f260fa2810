"""Catalog enumeration, tolerance-aware ranking, and criterion consistency.

A catalog is built from a base design by taking every size-m column
subset and every per-column assignment of level permutations, evaluating
the wordlength (beta) and contamination (lambda) patterns of each derived
design. Designs are then ranked under each criterion by sequential
(lexicographic) minimization of the pattern, with entries whose patterns
agree within tolerance sharing a rank.

To keep ranking a total order despite the tolerance, patterns are first
snapped onto a tolerance grid and the snapped tuples are sorted exactly.

Deduplication rules:

* ``"both"`` (default): an entry is dropped only when some kept entry has
  both the same beta pattern and the same lambda pattern. Merging on a
  single pattern could fuse entries that differ under the other criterion
  and corrupt rank comparison.
* ``"either"``: drop when either pattern was already seen; greedy in
  canonical enumeration order (deterministic, order-dependent by nature).
* ``None`` / ``"none"``: keep every enumerated entry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .contamination import contamination_pattern
from .design import Design, DesignError, column_subset
from .wordlength import beta_pattern

__all__ = [
    "ALL_PERMS",
    "CYCLIC_PERMS",
    "Catalog",
    "CatalogEntry",
    "ConsistencyReport",
    "IDENTITY_PERMS",
    "PATTERN_TOLERANCE",
    "PERMUTATION_SETS",
    "best",
    "consistency_rate",
    "enumerate_designs",
    "lex_compare",
    "rank",
]

PATTERN_TOLERANCE = 1e-9

IDENTITY_PERMS = ((0, 1, 2),)
# The three cyclic relabellings; the other three are their mirror images
# and produce identical beta and lambda patterns.
CYCLIC_PERMS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
ALL_PERMS = CYCLIC_PERMS + ((0, 2, 1), (1, 0, 2), (2, 1, 0))
PERMUTATION_SETS = {"identity": IDENTITY_PERMS, "cyclic": CYCLIC_PERMS, "all": ALL_PERMS}

_CRITERIA = ("beta", "lambda")


def lex_compare(a, b, tol: float = PATTERN_TOLERANCE) -> int:
    """-1, 0, or +1: lexicographic order where entries within tol tie."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DesignError(f"patterns have different lengths: {a.shape} vs {b.shape}")
    for x, y in zip(a, b):
        if abs(x - y) > tol:
            return -1 if x < y else 1
    return 0


def _canonical(pattern: np.ndarray, tol: float = PATTERN_TOLERANCE) -> tuple[float, ...]:
    snapped = np.round(np.asarray(pattern, dtype=float) / tol) * tol
    return tuple(float(v) for v in snapped)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """One derived design with its patterns and (once assigned) ranks."""

    columns: tuple[int, ...]
    level_maps: tuple[tuple[int, ...], ...]
    design: Design
    beta: np.ndarray
    lam: np.ndarray
    beta_rank: int | None = None
    lambda_rank: int | None = None

    def label(self) -> str:
        """Columns as 1-based labels with the level map when not identity."""
        parts = []
        for col, img in zip(self.columns, self.level_maps):
            text = str(col + 1)
            if tuple(img) != tuple(range(len(img))):
                text += ":" + "".join(str(v) for v in img)
            parts.append(text)
        return " ".join(parts)


@dataclass(frozen=True, eq=False)
class Catalog:
    """Evaluated derived designs plus the enumeration settings that made them."""

    entries: tuple[CatalogEntry, ...]
    factors: int
    permutation_set: tuple[tuple[int, ...], ...]
    dedup: str | None

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ConsistencyReport:
    """How often the two criteria assign the same rank."""

    total: int
    consistent: int

    @property
    def rate(self) -> float:
        return self.consistent / self.total

    def __str__(self) -> str:
        return f"{self.consistent}/{self.total} ({100 * self.rate:.1f}%)"


def enumerate_designs(
    base: Design,
    m: int,
    permutation_set="cyclic",
    dedup: str | None = "both",
) -> Catalog:
    """Evaluate all size-m column subsets x per-column level permutations of ``base``.

    ``permutation_set`` is one of the named sets ("identity", "cyclic",
    "all") or an explicit sequence of level images applied to every
    selected column. Subsets and assignments are generated in a fixed
    canonical order, so catalogs are deterministic.
    """
    if isinstance(permutation_set, str):
        try:
            perms = PERMUTATION_SETS[permutation_set]
        except KeyError:
            raise DesignError(
                f"unknown permutation set {permutation_set!r}; "
                f"choose from {sorted(PERMUTATION_SETS)}"
            ) from None
    else:
        perms = tuple(tuple(int(v) for v in img) for img in permutation_set)
        if not perms:
            raise DesignError("permutation set is empty")
    if dedup not in ("both", "either", "none", None):
        raise DesignError(f"unknown dedup rule {dedup!r}; choose both, either, or none")
    rule = None if dedup in (None, "none") else dedup
    if not 1 <= m <= base.factors:
        raise DesignError(f"subset size {m} out of range 1..{base.factors}")

    entries: list[CatalogEntry] = []
    seen_pairs: set[tuple] = set()
    seen_beta: set[tuple] = set()
    seen_lambda: set[tuple] = set()
    for cols in itertools.combinations(range(base.factors), m):
        sub = column_subset(base, cols)
        for assignment in itertools.product(perms, repeat=m):
            design = _relabel(sub, assignment)
            beta = beta_pattern(design)
            lam = contamination_pattern(design)
            if rule is not None:
                bkey = _canonical(beta)
                lkey = _canonical(lam)
                if rule == "both":
                    if (bkey, lkey) in seen_pairs:
                        continue
                    seen_pairs.add((bkey, lkey))
                else:
                    if bkey in seen_beta or lkey in seen_lambda:
                        continue
                    seen_beta.add(bkey)
                    seen_lambda.add(lkey)
            entries.append(CatalogEntry(cols, assignment, design, beta, lam))
    return Catalog(tuple(entries), m, perms, rule)


def _relabel(design: Design, images: tuple[tuple[int, ...], ...]) -> Design:
    cols = []
    for j, (img, s) in enumerate(zip(images, design.level_counts)):
        if len(img) != s:
            raise DesignError(
                f"permutation {img} does not fit factor {j + 1} with {s} levels"
            )
        cols.append(np.asarray(img, dtype=np.int64)[design.matrix[:, j]])
    return Design(np.column_stack(cols), design.level_counts)


def rank(catalog: Catalog, criterion: str) -> Catalog:
    """Assign dense ranks (1, 2, ...) under one criterion; ties share a rank."""
    if criterion not in _CRITERIA:
        raise DesignError(f"unknown criterion {criterion!r}; choose beta or lambda")
    attr = "beta" if criterion == "beta" else "lam"
    rank_attr = "beta_rank" if criterion == "beta" else "lambda_rank"
    keys = [_canonical(getattr(e, attr)) for e in catalog.entries]
    rank_of = {key: i + 1 for i, key in enumerate(sorted(set(keys)))}
    entries = tuple(
        replace(e, **{rank_attr: rank_of[key]}) for e, key in zip(catalog.entries, keys)
    )
    return replace(catalog, entries=entries)


def rank_both(catalog: Catalog) -> Catalog:
    return rank(rank(catalog, "beta"), "lambda")


def consistency_rate(catalog: Catalog) -> ConsistencyReport:
    """Fraction of entries whose beta rank equals their lambda rank."""
    if not catalog.entries:
        raise DesignError("cannot compute a consistency rate for an empty catalog")
    if any(e.beta_rank is None or e.lambda_rank is None for e in catalog.entries):
        raise DesignError("rank the catalog under both criteria first")
    consistent = sum(1 for e in catalog.entries if e.beta_rank == e.lambda_rank)
    return ConsistencyReport(len(catalog.entries), consistent)


def best(catalog: Catalog, criterion: str) -> tuple[CatalogEntry, ...]:
    """All rank-1 entries under the chosen criterion."""
    if criterion not in _CRITERIA:
        raise DesignError(f"unknown criterion {criterion!r}; choose beta or lambda")
    if not catalog.entries:
        raise DesignError("catalog is empty")
    rank_attr = "beta_rank" if criterion == "beta" else "lambda_rank"
    ranked = catalog
    if any(getattr(e, rank_attr) is None for e in catalog.entries):
        ranked = rank(catalog, criterion)
    return tuple(e for e in ranked.entries if getattr(e, rank_attr) == 1)

"""Alias matrices and contamination patterns under screening models.

When the fitted model keeps only the linear effects (contrast columns Z_1)
but the true response contains higher-order terms, the least-squares
estimate of the linear effects picks up bias through the alias matrix

    A_k = (Z_1' Z_1)^{-1} Z_1' Z_k,

and the contamination of k-th order effects is lambda_k = ||A_k||_F^2.
Variants cover the intercept-only model (general-mean contamination,
identical to the wordlength pattern) and generalized least squares under a
non-identity error covariance.

Gram systems are always solved, never replaced by the n^{-1} Z_1' Z_k
shortcut valid for strength >= 2, so arbitrary matrices can be diagnosed;
the shortcut serves as a test oracle only. Solves use a symmetric pivoted
factorization and report near-singular systems by naming the dependent
linear-contrast columns.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .basis import contrast_matrix, full_contrast_matrix, tuple_space
from .design import Design, DesignError, strength

__all__ = [
    "SingularSystemError",
    "alias_matrix",
    "contamination_pattern",
    "gls_contamination",
    "lambda_split",
    "mean_contamination",
    "validate_covariance",
]

# A Gram pivot below this fraction of the largest pivot counts as singular.
PIVOT_RTOL = 1e-10

COVARIANCE_SYMMETRY_TOL = 1e-12


class SingularSystemError(DesignError):
    """The linear-contrast Gram system is numerically singular."""


def _linear_labels(design: Design) -> list[str]:
    # Z_1 columns follow lexicographic tuple order, so the last factor's
    # linear contrast comes first.
    m = design.factors
    return [f"factor {m - c}" for c in range(m)]


def _check_gram(G: np.ndarray, labels: list[str]) -> None:
    lu, d, perm = scipy.linalg.ldl(G)
    pivots: list[float] = []
    positions: list[int] = []
    i = 0
    nn = d.shape[0]
    while i < nn:
        if i + 1 < nn and d[i, i + 1] != 0.0:
            w = np.linalg.eigvalsh(d[i : i + 2, i : i + 2])
            pivots.extend([abs(float(w[0])), abs(float(w[1]))])
            positions.extend([int(perm[i]), int(perm[i + 1])])
            i += 2
        else:
            pivots.append(abs(float(d[i, i])))
            positions.append(int(perm[i]))
            i += 1
    largest = max(pivots)
    if largest == 0.0:
        raise SingularSystemError(
            "linear-contrast system is singular: all pivots vanish "
            f"(columns: {', '.join(labels)})"
        )
    bad = [labels[positions[i]] for i, p in enumerate(pivots) if p < PIVOT_RTOL * largest]
    if bad:
        raise SingularSystemError(
            "linear-contrast system is singular; dependent columns: " + ", ".join(sorted(bad))
        )


def _gram_solve(G: np.ndarray, rhs: np.ndarray, labels: list[str]) -> np.ndarray:
    _check_gram(G, labels)
    if rhs.shape[1] == 0:
        return np.zeros((G.shape[0], 0))
    return scipy.linalg.solve(G, rhs, assume_a="sym")


def alias_matrix(design: Design, selection) -> np.ndarray:
    """Alias matrix of the selected tuple class onto the linear effects.

    ``selection`` follows :func:`oascreen.basis.contrast_matrix`: an int k
    for the degree class or an (i, j) pair for a 3-level split class. Rows
    follow Z_1's lexicographic column order.
    """
    Z1 = contrast_matrix(design, 1)
    Zc = contrast_matrix(design, selection)
    G = Z1.T @ Z1
    return _gram_solve(G, Z1.T @ Zc, _linear_labels(design))


def contamination_pattern(design: Design) -> np.ndarray:
    """Contamination pattern (lambda_2, ..., lambda_m'); entry k-2 holds lambda_k."""
    space = tuple_space(design.level_counts)
    C = full_contrast_matrix(design)
    Z1 = C[:, space.degree_mask(1)]
    G = Z1.T @ Z1
    _check_gram(G, _linear_labels(design))
    out = np.empty(space.max_degree - 1)
    for k in range(2, space.max_degree + 1):
        Zk = C[:, space.degree_mask(k)]
        A = scipy.linalg.solve(G, Z1.T @ Zk, assume_a="sym")
        out[k - 2] = float(np.sum(A * A))
    return out


def lambda_split(design: Design) -> np.ndarray:
    """3-level grid with entry (i, j) = ||A_{i,j}||_F^2 for the (i ones, j twos) class.

    Defined for strength >= 2 designs; shape (m+1, m+1) with structural
    zeros where i + j > m.
    """
    if not design.is_three_level:
        raise DesignError("split contamination is defined for 3-level designs only")
    if strength(design) < 2:
        raise DesignError("split contamination requires a strength >= 2 design")
    space = tuple_space(design.level_counts)
    C = full_contrast_matrix(design)
    Z1 = C[:, space.degree_mask(1)]
    G = Z1.T @ Z1
    _check_gram(G, _linear_labels(design))
    m = design.factors
    grid = np.zeros((m + 1, m + 1))
    for i in range(m + 1):
        for j in range(m + 1 - i):
            Zc = C[:, space.split_mask(i, j)]
            if Zc.shape[1] == 0:
                continue
            A = scipy.linalg.solve(G, Z1.T @ Zc, assume_a="sym")
            grid[i, j] = float(np.sum(A * A))
    return grid


def mean_contamination(design: Design) -> np.ndarray:
    """Contamination of k-th order effects on the intercept-only model, k = 1..m'.

    The alias row is A'_k = n^{-1} Z_0' Z_k, whose entries are exactly the
    ratios b_t / b_0, so this reproduces the wordlength pattern through the
    same arithmetic.
    """
    space = tuple_space(design.level_counts)
    out = np.empty(space.max_degree)
    for k in range(1, space.max_degree + 1):
        Zk = contrast_matrix(design, k)
        row = Zk.sum(axis=0) / design.runs
        out[k - 1] = float(np.sum(row * row))
    return out


def validate_covariance(sigma, runs: int | None = None) -> np.ndarray:
    """Check an error covariance: square, symmetric to 1e-12, positive definite."""
    S = np.asarray(sigma, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DesignError(f"covariance must be square, got shape {S.shape}")
    if runs is not None and S.shape[0] != runs:
        raise DesignError(f"covariance is {S.shape[0]}x{S.shape[0]}, design has {runs} runs")
    if float(np.max(np.abs(S - S.T))) > COVARIANCE_SYMMETRY_TOL:
        raise DesignError(f"covariance is not symmetric to {COVARIANCE_SYMMETRY_TOL:g}")
    try:
        scipy.linalg.cholesky(S, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise DesignError("covariance is not positive definite") from exc
    return S


def gls_contamination(design: Design, sigma) -> np.ndarray:
    """Contamination pattern under generalized least squares with covariance sigma.

    Uses A*_k = (Z_1' S^{-1} Z_1)^{-1} Z_1' S^{-1} Z_k, computed through
    Cholesky solves with sigma -- the covariance is never inverted
    explicitly. Returns (lambda*_2, ..., lambda*_m').
    """
    S = validate_covariance(sigma, design.runs)
    chol = scipy.linalg.cho_factor(S, lower=True)
    space = tuple_space(design.level_counts)
    C = full_contrast_matrix(design)
    Z1 = C[:, space.degree_mask(1)]
    R1 = scipy.linalg.cho_solve(chol, Z1)
    G = Z1.T @ R1
    _check_gram(G, _linear_labels(design))
    out = np.empty(space.max_degree - 1)
    for k in range(2, space.max_degree + 1):
        Zk = C[:, space.degree_mask(k)]
        if Zk.shape[1] == 0:
            out[k - 2] = 0.0
            continue
        A = scipy.linalg.solve(G, Z1.T @ scipy.linalg.cho_solve(chol, Zk), assume_a="sym")
        out[k - 2] = float(np.sum(A * A))
    return out

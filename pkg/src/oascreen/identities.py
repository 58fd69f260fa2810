"""Numeric cross-checks tying contamination to wordlength quantities.

Each check evaluates both sides of a known identity for 3-level
orthogonal arrays of strength >= 2 through independent code paths: the
left side comes from alias matrices (Gram solves over contrast columns),
the right side from indicator ratios (split grids). A residual below the
tolerance confirms the identity on that design; a residual above it is
reported, never silenced.

Checks, by content:

* split contamination:    lambda_{p,q} as a combination of the beta and xi
                          split grids.
* contamination expansion: lambda_k from beta_{k+1}, beta_{k-1} and split
                          correction terms, for every k.
* strength-plus-one form: when m = r + 1, lambda_k collapses to a two-term
                          combination of beta_{k+1} and beta_{k-1}; this is
                          what makes the two ranking criteria agree there.
* decompositions:         beta_k and lambda_k recovered by summing their
                          split grids along anti-diagonals.
* strength zeros:         split entries with 0 < i + j <= r vanish.
* truncated model:        with effects above order r dropped, the pattern
                          reduces to (0, ..., 0, (r+1) beta_{r+1}).
* mirror/even link:       a design is mirror-symmetric exactly when all
                          even-k contaminations vanish (both directions).
* general mean:           intercept-only contamination equals the
                          wordlength pattern.

Residuals are reproducible bit for bit across runs: all sums use fixed
orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contamination import contamination_pattern, lambda_split, mean_contamination
from .design import Design, DesignError, is_mirror_symmetric, strength
from .wordlength import beta_pattern, beta_split, xi_grid

__all__ = [
    "DEFAULT_TOLERANCE",
    "MEAN_IDENTITY_TOLERANCE",
    "DesignProfile",
    "IdentityReport",
    "check_contamination_expansion",
    "check_decompositions",
    "check_mirror_even_contamination",
    "check_split_contamination",
    "check_strength_plus_one",
    "check_truncated_contamination",
    "profile",
    "verify_design",
]

DEFAULT_TOLERANCE = 1e-9
# The general-mean identity holds by shared arithmetic, so it is pinned
# far tighter than the analytic checks.
MEAN_IDENTITY_TOLERANCE = 1e-12

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity evaluation."""

    name: str
    params: dict
    lhs: float
    rhs: float
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance

    def __str__(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        verdict = "pass" if self.passed else "FAIL"
        return (
            f"{self.name}({args}): lhs={self.lhs:.12g} rhs={self.rhs:.12g} "
            f"residual={self.residual:.3e} [{verdict}]"
        )


@dataclass(frozen=True, eq=False)
class DesignProfile:
    """Everything the cross-checks consume, computed once per design."""

    design: Design
    factors: int
    strength: int
    max_degree: int
    beta: np.ndarray
    lam: np.ndarray
    beta_grid: np.ndarray
    xi: np.ndarray
    lambda_grid: np.ndarray
    mirror_symmetric: bool


def profile(design: Design) -> DesignProfile:
    """Precompute patterns, split grids, strength, and mirror symmetry."""
    if not design.is_three_level:
        raise DesignError("identity checks are defined for 3-level designs only")
    r = strength(design)
    if r < 2:
        raise DesignError(
            f"identity checks require a strength >= 2 orthogonal array (strength {r})"
        )
    return DesignProfile(
        design=design,
        factors=design.factors,
        strength=r,
        max_degree=2 * design.factors,
        beta=beta_pattern(design),
        lam=contamination_pattern(design),
        beta_grid=beta_split(design),
        xi=xi_grid(design),
        lambda_grid=lambda_split(design),
        mirror_symmetric=is_mirror_symmetric(design),
    )


def _beta_at(p: DesignProfile, k: int) -> float:
    return float(p.beta[k - 1]) if 1 <= k <= p.max_degree else 0.0


def _lam_at(p: DesignProfile, k: int) -> float:
    return float(p.lam[k - 2]) if 2 <= k <= p.max_degree else 0.0


def _grid_at(grid: np.ndarray, i: int, j: int) -> float:
    if 0 <= i < grid.shape[0] and 0 <= j < grid.shape[1]:
        return float(grid[i, j])
    return 0.0


def _as_profile(design_or_profile) -> DesignProfile:
    if isinstance(design_or_profile, DesignProfile):
        return design_or_profile
    return profile(design_or_profile)


def check_split_contamination(design, p: int, q: int, tol: float = DEFAULT_TOLERANCE) -> IdentityReport:
    """lambda_{p,q} against its expansion in the beta and xi split grids.

    Requires p + 2q >= 2. Out-of-range grid entries count as zero, so the
    check is valid on the boundary rows where both sides collapse to 0.
    """
    prof = _as_profile(design)
    if p < 0 or q < 0 or p + 2 * q < 2:
        raise DesignError(f"need p, q >= 0 with p + 2q >= 2, got ({p}, {q})")
    m = prof.factors
    rhs = (
        (p + 1) * _grid_at(prof.beta_grid, p + 1, q)
        + (p + 1) / 2 * _grid_at(prof.beta_grid, p + 1, q - 1)
        + (q + 1) / 2 * _grid_at(prof.beta_grid, p - 1, q + 1)
        + (m - p - q + 1) * _grid_at(prof.beta_grid, p - 1, q)
        + _SQRT2 * _grid_at(prof.xi, p - 1, q)
    )
    lhs = _grid_at(prof.lambda_grid, p, q)
    return IdentityReport("split-contamination", {"p": p, "q": q}, lhs, rhs, tol)


def check_contamination_expansion(design, k: int, tol: float = DEFAULT_TOLERANCE) -> IdentityReport:
    """lambda_k against its full expansion in beta values and split corrections."""
    prof = _as_profile(design)
    if not 2 <= k <= prof.max_degree:
        raise DesignError(f"need 2 <= k <= {prof.max_degree}, got {k}")
    m = prof.factors
    half = math.ceil(k / 2)
    correction = 0.0
    for j in range(half):
        correction += 1.5 * (half - j) * _grid_at(prof.beta_grid, k - 2 * j + 1, j)
    for j in range(half):
        correction += _SQRT2 * _grid_at(prof.xi, k - 2 * j - 1, j)
    rhs = (
        (1 + k - 1.5 * half) * _beta_at(prof, k + 1)
        + (m - (k - 1) / 2) * _beta_at(prof, k - 1)
        + correction
    )
    return IdentityReport("contamination-expansion", {"k": k}, _lam_at(prof, k), rhs, tol)


def check_strength_plus_one(design, k: int, tol: float = DEFAULT_TOLERANCE) -> IdentityReport:
    """Two-term form of lambda_k, valid only when factors = strength + 1."""
    prof = _as_profile(design)
    r = prof.strength
    if prof.factors != r + 1:
        raise DesignError(
            f"two-term form needs factors = strength + 1, got {prof.factors} factors "
            f"at strength {r}"
        )
    if not 2 <= k <= prof.max_degree:
        raise DesignError(f"need 2 <= k <= {prof.max_degree}, got {k}")
    if k <= r:
        rho = float(k + 1)
    elif k <= prof.max_degree - 1:
        rho = (3 * r + 2 - k) / 2
    else:
        rho = 0.0
    rhs = rho * _beta_at(prof, k + 1) + (r + 1 - (k - 1) / 2) * _beta_at(prof, k - 1)
    return IdentityReport("strength-plus-one-form", {"k": k}, _lam_at(prof, k), rhs, tol)


def check_decompositions(design, tol: float = DEFAULT_TOLERANCE) -> list[IdentityReport]:
    """beta_k and lambda_k recovered by summing split grids along anti-diagonals."""
    prof = _as_profile(design)
    reports = []
    for k in range(1, prof.max_degree + 1):
        rhs = sum(_grid_at(prof.beta_grid, k - 2 * j, j) for j in range(k // 2 + 1))
        reports.append(
            IdentityReport("beta-decomposition", {"k": k}, _beta_at(prof, k), rhs, tol)
        )
    for k in range(2, prof.max_degree + 1):
        rhs = sum(_grid_at(prof.lambda_grid, k - 2 * j, j) for j in range(k // 2 + 1))
        reports.append(
            IdentityReport("lambda-decomposition", {"k": k}, _lam_at(prof, k), rhs, tol)
        )
    return reports


def check_truncated_contamination(design, tol: float = DEFAULT_TOLERANCE) -> list[IdentityReport]:
    """Under truncation at order r the pattern is (0, ..., 0, (r+1) beta_{r+1})."""
    prof = _as_profile(design)
    r = prof.strength
    reports = []
    for k in range(2, r):
        reports.append(IdentityReport("truncated-model", {"k": k}, _lam_at(prof, k), 0.0, tol))
    reports.append(
        IdentityReport(
            "truncated-model",
            {"k": r},
            _lam_at(prof, r),
            (r + 1) * _beta_at(prof, r + 1),
            tol,
        )
    )
    return reports


def check_mirror_even_contamination(design, tol: float = DEFAULT_TOLERANCE) -> tuple[IdentityReport, IdentityReport]:
    """Both directions of: mirror-symmetric <=> every even-k contamination is 0.

    The forward report carries the largest even-k contamination of a
    mirror-symmetric design (must be ~0). The converse report flags the
    counterexample case where the even contaminations vanish but the design
    is not mirror-symmetric; lhs/rhs encode the two truth values.
    """
    prof = _as_profile(design)
    even = [_lam_at(prof, k) for k in range(2, prof.max_degree + 1, 2)]
    max_even = max(even) if even else 0.0
    params = {"mirror_symmetric": prof.mirror_symmetric, "max_even_lambda": max_even}
    if prof.mirror_symmetric:
        forward = IdentityReport("mirror-even-forward", params, max_even, 0.0, tol)
    else:
        forward = IdentityReport("mirror-even-forward", params, 0.0, 0.0, tol)
    even_zero = max_even < tol
    converse_holds = prof.mirror_symmetric or not even_zero
    converse = IdentityReport(
        "mirror-even-converse", params, 1.0 if converse_holds else 0.0, 1.0, tol
    )
    return forward, converse


def verify_design(design: Design, tol: float = DEFAULT_TOLERANCE) -> list[IdentityReport]:
    """Run every applicable cross-check on one design.

    Raises :class:`DesignError` when the design is not a 3-level strength
    >= 2 orthogonal array, since the identities are undefined there.
    """
    prof = profile(design)
    m = prof.factors
    r = prof.strength
    reports: list[IdentityReport] = []

    for p in range(0, m + 2):
        for q in range(0, m + 2):
            if p + 2 * q >= 2:
                reports.append(check_split_contamination(prof, p, q, tol))

    for k in range(2, prof.max_degree + 1):
        reports.append(check_contamination_expansion(prof, k, tol))

    if m == r + 1:
        for k in range(2, prof.max_degree + 1):
            reports.append(check_strength_plus_one(prof, k, tol))

    reports.extend(check_decompositions(prof, tol))

    for i in range(0, r + 1):
        for j in range(0, r + 1 - i):
            if i + j == 0:
                continue
            reports.append(
                IdentityReport(
                    "strength-zero-beta-split",
                    {"i": i, "j": j},
                    _grid_at(prof.beta_grid, i, j),
                    0.0,
                    tol,
                )
            )
            reports.append(
                IdentityReport(
                    "strength-zero-xi", {"i": i, "j": j}, _grid_at(prof.xi, i, j), 0.0, tol
                )
            )

    reports.extend(check_truncated_contamination(prof, tol))
    reports.extend(check_mirror_even_contamination(prof, tol))

    if prof.mirror_symmetric:
        for i in range(m + 1):
            for j in range(m + 1 - i):
                if (i + 2 * j) % 2 == 1:
                    reports.append(
                        IdentityReport(
                            "mirror-odd-beta-split",
                            {"i": i, "j": j},
                            _grid_at(prof.beta_grid, i, j),
                            0.0,
                            tol,
                        )
                    )

    mean = mean_contamination(design)
    for k in range(1, prof.max_degree + 1):
        reports.append(
            IdentityReport(
                "general-mean-contamination",
                {"k": k},
                float(mean[k - 1]),
                _beta_at(prof, k),
                MEAN_IDENTITY_TOLERANCE,
            )
        )

    return reports

"""Built-in reference designs, shipped as validated :class:`Design` objects.

``D1`` and ``D2`` are 18-run, 4-factor, 3-level strength-2 orthogonal
arrays used as worked references throughout the docs and tests; they
differ under the two ranking criteria, which makes them useful probes.
``L18`` is the three-level section of the standard Taguchi L18 array (the
seven 3-level columns of L18(2^1 x 3^7)), a strength-2 orthogonal array
tabulated in common design-of-experiments references; it is the stock
base for catalog enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

from .design import Design, DesignError

__all__ = ["D1", "D2", "L18", "EmbeddedDesign", "EMBEDDED", "builtin_design"]


@dataclass(frozen=True)
class EmbeddedDesign:
    name: str
    design: Design
    provenance: str


_D1_RUNS = (
    (2, 0, 0, 0),
    (0, 1, 1, 1),
    (1, 2, 2, 2),
    (2, 0, 1, 1),
    (0, 1, 2, 2),
    (1, 2, 0, 0),
    (2, 1, 0, 2),
    (0, 2, 1, 0),
    (1, 0, 2, 1),
    (2, 2, 2, 1),
    (0, 0, 0, 2),
    (1, 1, 1, 0),
    (2, 1, 2, 0),
    (0, 2, 0, 1),
    (1, 0, 1, 2),
    (2, 2, 1, 2),
    (0, 0, 2, 0),
    (1, 1, 0, 1),
)

_D2_RUNS = (
    (0, 2, 1, 0),
    (0, 0, 2, 1),
    (0, 1, 0, 2),
    (1, 2, 1, 2),
    (1, 0, 2, 0),
    (1, 1, 0, 1),
    (2, 2, 2, 1),
    (2, 0, 0, 2),
    (2, 1, 1, 0),
    (0, 2, 0, 1),
    (0, 0, 1, 2),
    (0, 1, 2, 0),
    (1, 2, 2, 2),
    (1, 0, 0, 0),
    (1, 1, 1, 1),
    (2, 2, 0, 0),
    (2, 0, 1, 1),
    (2, 1, 2, 2),
)

_L18_RUNS = (
    (0, 0, 0, 0, 0, 0, 0),
    (0, 1, 1, 1, 1, 1, 1),
    (0, 2, 2, 2, 2, 2, 2),
    (1, 0, 0, 1, 1, 2, 2),
    (1, 1, 1, 2, 2, 0, 0),
    (1, 2, 2, 0, 0, 1, 1),
    (2, 0, 1, 0, 2, 1, 2),
    (2, 1, 2, 1, 0, 2, 0),
    (2, 2, 0, 2, 1, 0, 1),
    (0, 0, 2, 2, 1, 1, 0),
    (0, 1, 0, 0, 2, 2, 1),
    (0, 2, 1, 1, 0, 0, 2),
    (1, 0, 1, 2, 0, 2, 1),
    (1, 1, 2, 0, 1, 0, 2),
    (1, 2, 0, 1, 2, 1, 0),
    (2, 0, 2, 1, 2, 0, 1),
    (2, 1, 0, 2, 0, 1, 2),
    (2, 2, 1, 0, 1, 2, 0),
)

D1 = Design(_D1_RUNS, (3, 3, 3, 3))
D2 = Design(_D2_RUNS, (3, 3, 3, 3))
L18 = Design(_L18_RUNS, (3,) * 7)

EMBEDDED = {
    "D1": EmbeddedDesign(
        "D1",
        D1,
        "18-run, 4-factor, 3-level strength-2 orthogonal array; reference design "
        "whose wordlength and contamination rankings disagree with D2's.",
    ),
    "D2": EmbeddedDesign(
        "D2",
        D2,
        "18-run, 4-factor, 3-level strength-2 orthogonal array; companion to D1.",
    ),
    "L18": EmbeddedDesign(
        "L18",
        L18,
        "Three-level section of the standard Taguchi L18 array (the seven 3-level "
        "columns of L18(2^1 x 3^7)); strength-2, used as the catalog enumeration base.",
    ),
}


def builtin_design(name: str) -> Design:
    """Look up an embedded design by name (case-insensitive)."""
    key = name.strip().upper()
    if key not in EMBEDDED:
        known = ", ".join(sorted(EMBEDDED))
        raise DesignError(f"unknown builtin design {name!r}; available: {known}")
    return EMBEDDED[key].design

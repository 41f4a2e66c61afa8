"""Diagonal exciton-phonon couplings of internal dot vibrations.

Each internal mode (n, l, m) shifts an exciton by a radial factor times the
angular element <state| Y_l^m(hole) + Y_l^m(electron) |state>.  The radial
factors are inputs; only the angular structure is computed here.  Two states
with identical columns cannot dephase relative to each other in the linear
approximation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import InvariantError
from .exciton import ExcitonState, diagonal_angular_element


@dataclass(frozen=True)
class CouplingTable:
    entries: Mapping[tuple[str, int, int], float]
    radial_scale: Mapping[int, float] = field(default_factory=dict)
    l_max: int = 4

    @property
    def labels(self) -> list[str]:
        return sorted({k[0] for k in self.entries})

    def entry(self, label: str, l: int, m: int) -> float:
        return self.entries[(label, l, m)]

    def rows(self) -> list[tuple[str, int, int, float]]:
        return [(s, l, m, v) for (s, l, m), v in sorted(self.entries.items())]


def coupling_table(states: Mapping[str, ExcitonState], l_max: int = 4,
                   radial_scale: Mapping[int, float] | None = None) -> CouplingTable:
    """Tabulate scaled angular couplings for |m| <= l <= l_max.

    ``radial_scale`` maps l to a positive factor (default 1) that stands in
    for the radial deformation-potential integral of that multipole.
    """
    if not 0 <= l_max <= 4:
        raise InvariantError("l_max must lie in 0..4")
    scale = dict(radial_scale or {})
    if any(not v > 0 for v in scale.values()):
        raise InvariantError("radial scales must be positive")
    entries = {}
    for label, st in states.items():
        for l in range(l_max + 1):
            s = scale.get(l, 1.0)
            for m in range(-l, l + 1):
                entries[(label, l, m)] = s * diagonal_angular_element(st, l, m)
    return CouplingTable(entries, scale, l_max)


def distinguishability(a: str, b: str, table: CouplingTable) -> float:
    """Sum over (l, m) of |gamma_a - gamma_b|^2, a proxy for the relative dephasing rate."""
    labels = set(table.labels)
    for lab in (a, b):
        if lab not in labels:
            raise KeyError(f"state {lab!r} not in coupling table")
    total = 0.0
    for l in range(table.l_max + 1):
        for m in range(-l, l + 1):
            total += abs(table.entry(a, l, m) - table.entry(b, l, m)) ** 2
    return total

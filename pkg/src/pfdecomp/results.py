"""Parameters and the two possible answers of the decomposer."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .density import threshold


@dataclass(frozen=True)
class Params:
    k: int
    d: int

    def __post_init__(self):
        if self.k < 1 or self.d < 1:
            raise ValueError(f"need k >= 1 and d >= 1, got k={self.k}, d={self.d}")

    @property
    def troublesome_threshold(self) -> Fraction:
        return Fraction(self.d, self.d + self.k + 1)

    @property
    def density_bound(self) -> Fraction:
        return threshold(self.k, self.d)

    @property
    def guaranteed(self) -> bool:
        """Whether the decomposition is guaranteed below the bound (``2 <= d <= 2k+2``)."""
        return 2 <= self.d <= 2 * self.k + 2


@dataclass(frozen=True)
class Decomposition:
    """``k+1`` edge-id sets; ``parts[special_index]`` is the small-component pseudoforest."""

    parts: tuple[tuple[int, ...], ...]
    special_index: int
    tails: tuple[int, ...] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class DensityCertificate:
    """A vertex set whose induced average degree exceeds ``claimed_bound``."""

    vertices: tuple[int, ...]
    edge_count: int
    density: Fraction
    claimed_bound: Fraction

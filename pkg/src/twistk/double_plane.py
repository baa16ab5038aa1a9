"""Numerical invariants of a double cover of the plane branched along a smooth curve of degree 2d.

Smoothness and genericity of the branch curve are assumed by the caller; the
functions here only evaluate closed-form expressions in ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cohomology import IntersectionData, SurfaceClass, sqrt_unit

__all__ = [
    "SurfaceGeometry",
    "HodgeDiamond",
    "geometry",
    "chern_character_tangent",
    "hodge_diamond",
    "todd_and_sqrt",
    "pushforward_structure_sheaf",
    "canonical_data",
    "chi_plane",
    "PAPER_D",
]

PAPER_D = 4


def _check_d(d: int) -> None:
    if not isinstance(d, int) or isinstance(d, bool):
        raise TypeError("d must be an integer")
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")


@dataclass(frozen=True)
class SurfaceGeometry:
    d: int
    c1_coeff: int
    c2: int
    chi_O: Fraction

    def noether_holds(self) -> bool:
        return Fraction(2 * self.c1_coeff**2 + self.c2, 12) == self.chi_O


@dataclass(frozen=True)
class HodgeDiamond:
    h00: int
    h01: int
    h02: int
    h11: int

    def rows(self) -> list[list[int]]:
        return [
            [self.h00],
            [self.h01, self.h01],
            [self.h02, self.h11, self.h02],
            [self.h01, self.h01],
            [self.h00],
        ]

    def summary(self) -> tuple[int, ...]:
        """One entry per row reading down the middle: (h00, h01, h02, h11, h02, h01, h00)."""
        return (self.h00, self.h01, self.h02, self.h11, self.h02, self.h01, self.h00)

    def euler(self) -> int:
        return 2 * self.h00 - 4 * self.h01 + 2 * self.h02 + self.h11

    def __str__(self) -> str:
        rows = [" ".join(str(x) for x in row) for row in self.rows()]
        width = max(len(r) for r in rows)
        return "\n".join(r.center(width).rstrip() for r in rows)


def geometry(d: int) -> SurfaceGeometry:
    _check_d(d)
    return SurfaceGeometry(d=d, c1_coeff=3 - d, c2=4 * d * d - 6 * d + 6, chi_O=Fraction(d * d - 3 * d + 4, 2))


def chern_character_tangent(d: int) -> SurfaceClass:
    _check_d(d)
    return SurfaceClass(r=2, a_h=3 - d, s=3 - 3 * d * d)


def c2_from_ch(ch: SurfaceClass, data: IntersectionData | None = None) -> Fraction:
    """Recover c2 from a Chern character via ch2 = (c1^2 - 2 c2)/2."""
    data = data or IntersectionData()
    c1_sq = data.pair(ch.a_h, ch.a_B, ch.a_h, ch.a_B)
    return (c1_sq - 2 * ch.s) / 2


def hodge_diamond(d: int) -> HodgeDiamond:
    _check_d(d)
    return HodgeDiamond(h00=1, h01=0, h02=(d - 1) * (d - 2) // 2, h11=3 * d * d - 3 * d + 2)


@lru_cache(maxsize=None)
def todd_and_sqrt(d: int) -> tuple[SurfaceClass, SurfaceClass]:
    g = geometry(d)
    td = SurfaceClass(r=1, a_h=Fraction(g.c1_coeff, 2), s=g.chi_O)
    # B never appears in td, so the twist data is irrelevant here.
    return td, sqrt_unit(td, IntersectionData())


def pushforward_structure_sheaf(d: int) -> list[int]:
    _check_d(d)
    return [0, -d]


def chi_plane(k: int) -> int:
    """Euler characteristic of O(k) on the plane."""
    return (k + 1) * (k + 2) // 2


def canonical_data(d: int) -> tuple[int, bool]:
    """Twist of the canonical bundle pulled back from the plane, and whether the canonical map is the cover.

    The flag is only asserted for the branch octic (d = 4).
    """
    _check_d(d)
    return d - 3, d == PAPER_D

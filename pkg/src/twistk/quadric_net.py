"""Integer bookkeeping for a family of quadrics over the plane and its hyperbolic reduction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

__all__ = [
    "QuadricFamily",
    "SplittingType",
    "discriminant_degree",
    "splitting_types",
    "h0_on_line",
    "hecke_degree_parity",
    "special_point_census",
    "NET_OF_QUADRICS",
    "RANK4_REDUCTION",
    "CONIC_FAMILY",
]

SplittingType = tuple[int, ...]


@dataclass(frozen=True)
class QuadricFamily:
    """A family of quadratic forms ``E -> E^dual(t)`` of the given rank over a base curve or surface."""

    rank: int
    det_degree: int
    twist_degree: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be positive, got {self.rank}")


# Quadrics in P^7 parametrized by the net, the rank-4 reduction E, and the conic family over a line.
NET_OF_QUADRICS = QuadricFamily(rank=8, det_degree=0, twist_degree=1)
RANK4_REDUCTION = QuadricFamily(rank=4, det_degree=-2, twist_degree=1)
CONIC_FAMILY = QuadricFamily(rank=3, det_degree=-1, twist_degree=1)


def discriminant_degree(f: QuadricFamily) -> int:
    """Degree of the discriminant, a section of det(E)^-2 (rank * t)."""
    return -2 * f.det_degree + f.rank * f.twist_degree


def h0_on_line(splitting: SplittingType) -> int:
    return sum(max(a + 1, 0) for a in splitting)


def _partitions(total: int, parts: int, hi: int, lo: int):
    # non-increasing tuples with entries in [lo, hi]
    if parts == 0:
        if total == 0:
            yield ()
        return
    top = min(hi, total - lo * (parts - 1))
    for first in range(top, lo - 1, -1):
        if first * parts < total:
            break
        for rest in _partitions(total - first, parts - 1, first, lo):
            yield (first,) + rest


def splitting_types(
    rank: int,
    degree: int,
    subbundle_of_trivial: bool,
    h0: Optional[int] = None,
) -> list[SplittingType]:
    """All ``a_1 >= ... >= a_rank`` summing to ``degree``, filtered as requested.

    A subbundle of a trivial bundle has ``a_i <= 0``.  Prescribing ``h0``
    keeps the types with ``sum(max(a_i + 1, 0)) == h0``.  At least one of the
    two filters must be active, otherwise the set is infinite.
    """
    if rank < 1:
        raise ValueError(f"rank must be positive, got {rank}")
    if subbundle_of_trivial:
        hi = 0
    elif h0 is not None:
        if h0 < 0:
            return []
        hi = h0 - 1
    else:
        raise ValueError("unbounded enumeration: set subbundle_of_trivial or give h0")
    lo = degree - (rank - 1) * hi
    found = list(_partitions(degree, rank, hi, lo))
    if h0 is not None:
        found = [t for t in found if h0_on_line(t) == h0]
    return found


def hecke_degree_parity(base_degree: int, modifications: int) -> tuple[int, Fraction]:
    """Degree after pulling back a rank-2 bundle of degree ``base_degree`` and applying elementary modifications.

    Returns the degree and the fractional part of half of it.
    """
    if modifications < 0:
        raise ValueError("modifications must be non-negative")
    deg = 2 * base_degree + modifications
    return deg, Fraction(deg % 2, 2)


def special_point_census(f: QuadricFamily, g: QuadricFamily) -> int:
    return discriminant_degree(f) + discriminant_degree(g)

"""Twisted Mukai lattice of the double plane and the Riemann-Roch derivation of the B-field self-intersection."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cohomology import (
    BaseClass,
    IntersectionData,
    SurfaceClass,
    as_rational,
    line_bundle_ch,
    mukai_closed_form,
    mukai_pairing,
    mul_base,
    mul_surface,
    pushforward_double_cover,
)
from .double_plane import PAPER_D, geometry, todd_and_sqrt

__all__ = [
    "TwistParams",
    "GramMatrix",
    "GrrLedger",
    "InconsistencyError",
    "BASIS_LABELS",
    "lattice_basis",
    "gram_matrix",
    "gram_closed_form",
    "in_HSBZ",
    "shift_B",
    "wedge2_ch",
    "grr_ledger",
    "TD_PLANE",
]

BASIS_LABELS = ("2+2B", "h", "pt")
TD_PLANE = BaseClass(1, Fraction(3, 2), 1)


class InconsistencyError(AssertionError):
    """Two independent routes to the same quantity disagreed."""


@dataclass(frozen=True)
class TwistParams:
    """B-field encoded by ``m = 2 B.h`` and ``n = 4 B.B``."""

    m: int
    n: int

    @property
    def frac_Bh(self) -> Fraction:
        return Fraction(self.m % 2, 2)

    @property
    def frac_Bsq(self) -> Fraction:
        return Fraction(self.n % 4, 4)

    def intersection_data(self) -> IntersectionData:
        return IntersectionData(two_Bh=self.m, four_Bsq=self.n)


@dataclass(frozen=True)
class GramMatrix:
    """3x3 integer Gram matrix; row index is the first argument of the pairing."""

    entries: tuple[tuple[int, ...], ...]
    m: int | None = None
    n: int | None = None
    basis: tuple[str, ...] = BASIS_LABELS

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if len(rows) != 3 or any(len(row) != 3 for row in rows):
            raise ValueError("a Gram matrix here must be 3x3")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "basis", tuple(self.basis))

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], **kw) -> GramMatrix:
        return cls(tuple(tuple(r) for r in rows), **kw)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        return sum(u[i] * self.entries[i][j] * v[j] for i in range(3) for j in range(3))

    def apply(self, v: Sequence[int]) -> tuple[int, int, int]:
        return tuple(sum(self.entries[i][j] * v[j] for j in range(3)) for i in range(3))

    def is_symmetric(self) -> bool:
        return all(self.entries[i][j] == self.entries[j][i] for i in range(3) for j in range(3))

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis),
            "m": self.m,
            "n": self.n,
            "entries": [list(row) for row in self.entries],
        }


def lattice_basis(twist: TwistParams) -> tuple[SurfaceClass, SurfaceClass, SurfaceClass]:
    """Images of ``2+2B``, ``h`` and ``pt`` under multiplication by the square root of td."""
    data = twist.intersection_data()
    _, root = todd_and_sqrt(PAPER_D)
    raw = (SurfaceClass(r=2, a_B=2), SurfaceClass.h(), SurfaceClass.pt())
    return tuple(mul_surface(root, x, data) for x in raw)


def gram_closed_form(twist: TwistParams) -> GramMatrix:
    m, n = twist.m, twist.n
    return GramMatrix.of([[16 - n, -2 - m, 2], [2 - m, -2, 0], [2, 0, 0]], m=m, n=n)


def gram_matrix(twist: TwistParams) -> GramMatrix:
    """Euler pairing on the lattice, computed by integration and cross-checked against two closed forms."""
    data = twist.intersection_data()
    c1 = geometry(PAPER_D).c1_coeff
    basis = lattice_basis(twist)
    expected = gram_closed_form(twist)
    rows = []
    for i, a in enumerate(basis):
        row = []
        for j, b in enumerate(basis):
            direct = mukai_pairing(a, b, c1, data)
            expanded = mukai_closed_form(a, b, data)
            if not (direct == expanded == expected[i, j]):
                raise InconsistencyError(
                    f"pairing ({i},{j}) at m={twist.m}, n={twist.n}: "
                    f"integral {direct}, expansion {expanded}, matrix {expected[i, j]}"
                )
            if direct.denominator != 1:
                raise InconsistencyError(f"non-integral pairing {direct} at ({i},{j})")
            row.append(direct.numerator)
        rows.append(row)
    return GramMatrix.of(rows, m=twist.m, n=twist.n)


def in_HSBZ(r, d_coeff, s, twist: TwistParams) -> bool:
    """Whether ``exp(B)(r + d h + s pt)`` satisfies the integrality conditions.

    These are: r even, d integral, and ``r B^2/2 + d B.h + s`` integral.
    """
    r, d_coeff, s = as_rational(r), as_rational(d_coeff), as_rational(s)
    if r.denominator != 1 or r.numerator % 2:
        return False
    if d_coeff.denominator != 1:
        return False
    top = r * Fraction(twist.n, 8) + d_coeff * Fraction(twist.m, 2) + s
    return top.denominator == 1


def shift_B(twist: TwistParams, c: int, add_half_h: bool) -> TwistParams:
    """Parameters of ``B + c h`` and, if requested, a further ``+ h/2``."""
    m = twist.m + 4 * c
    n = twist.n + 4 * c * twist.m + 8 * c * c
    if add_half_h:
        m, n = m + 2, n + 2 * m + 2
    return TwistParams(m, n)


def wedge2_ch(ch: BaseClass) -> BaseClass:
    """Chern character of the second exterior power of a rank-4 bundle on the plane."""
    if ch.r != 4:
        raise ValueError(f"wedge2_ch expects rank 4, got {ch.r}")
    c1, ch2 = ch.a_H, ch.s
    return BaseClass(6, 3 * c1, 2 * ch2 + c1 * c1 / 2)


@dataclass(frozen=True)
class GrrLedger:
    """Each step of the Riemann-Roch comparison on the plane.

    ``lhs`` is the a-independent part of the pushforward of ch(A)td(S); the
    unknown integer ``a`` enters only its pt coefficient, with slope
    ``lhs_a_slope``.
    """

    ch_E: BaseClass
    ch_wedge2E_twist: BaseClass
    ch_B0: BaseClass
    lhs: BaseClass
    lhs_a_slope: Fraction
    rhs: BaseClass
    a_solved: int
    b_squared_fraction: Fraction
    parity_range: tuple[int, int]

    def lhs_at(self, a: int) -> BaseClass:
        return self.lhs + BaseClass(s=self.lhs_a_slope * a)

    def to_json(self) -> dict:
        return {
            "ch_E": self.ch_E.to_json(),
            "ch_wedge2E_twist": self.ch_wedge2E_twist.to_json(),
            "ch_B0": self.ch_B0.to_json(),
            "lhs": self.lhs.to_json(),
            "lhs_a_slope": str(self.lhs_a_slope),
            "rhs": self.rhs.to_json(),
            "a_solved": self.a_solved,
            "b_squared_fraction": str(self.b_squared_fraction),
        }


def _cross_term_vanishes_mod4(m: int, d_range: range) -> bool:
    # (2B + d h)^2 = 4B^2 + 2d(d + m)
    return all((2 * d * (d + m)) % 4 == 0 for d in d_range)


def grr_ledger(d_range: range = range(-10, 11), odd_m_range: range = range(-9, 10, 2)) -> GrrLedger:
    """Replay the comparison for E = ker(O^6 -> O(1)^2) on the plane."""
    ch_E = line_bundle_ch(0).scale(6) - line_bundle_ch(1).scale(2)
    det_E = int(ch_E.a_H)
    ch_w2 = mul_base(wedge2_ch(ch_E), line_bundle_ch(-1))
    # wedge^4 E = det E, further twisted by O(-2)
    ch_w4 = line_bundle_ch(det_E - 2)
    ch_B0 = line_bundle_ch(0) + ch_w2 + ch_w4
    rhs = mul_base(ch_B0, TD_PLANE)

    td_S, _ = todd_and_sqrt(PAPER_D)
    data = IntersectionData()
    # ch(A) = 4 + a pt with a unknown; split into constant and slope
    lhs = pushforward_double_cover(mul_surface(SurfaceClass(r=4), td_S, data))
    slope = pushforward_double_cover(mul_surface(SurfaceClass.pt(), td_S, data))
    if (slope.r, slope.a_H) != (0, 0):
        raise InconsistencyError("unknown a leaked outside the pt coefficient")
    if (lhs.r, lhs.a_H) != (rhs.r, rhs.a_H):
        raise InconsistencyError(f"rank/degree mismatch: {lhs} vs {rhs}")
    a = (rhs.s - lhs.s) / slope.s
    if a.denominator != 1:
        raise InconsistencyError(f"non-integral solution a = {a}")
    a_solved = a.numerator

    if not all(_cross_term_vanishes_mod4(m, d_range) for m in odd_m_range):
        raise InconsistencyError("2d(d+m) not divisible by 4 for odd m")
    # n = 4B^2 = 4s - a - 2d(d+m) is congruent to -a mod 4
    frac = Fraction((-a_solved) % 4, 4)
    return GrrLedger(
        ch_E=ch_E,
        ch_wedge2E_twist=ch_w2,
        ch_B0=ch_B0,
        lhs=lhs,
        lhs_a_slope=slope.s,
        rhs=rhs,
        a_solved=a_solved,
        b_squared_fraction=frac,
        parity_range=(d_range.start, d_range.stop - 1),
    )

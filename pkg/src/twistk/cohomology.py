"""Truncated even cohomology rings of the double plane S and of the base plane.

Classes on S are written over the basis ``{1, h, B, pt}`` where ``h`` is the
pulled-back hyperplane class and ``B`` a formal degree-2 class whose products
are supplied through :class:`IntersectionData`.  Classes on the plane use
``{1, H, pt}``.  Every coefficient is a :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

__all__ = [
    "Rational",
    "as_rational",
    "format_rational",
    "parse_rational",
    "IntersectionData",
    "SurfaceClass",
    "BaseClass",
    "mul_surface",
    "dual",
    "exp_deg2",
    "sqrt_unit",
    "mukai_pairing",
    "mukai_closed_form",
    "integrate",
    "pushforward_double_cover",
    "pullback_double_cover",
    "mul_base",
    "line_bundle_ch",
]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction, refusing floats."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rational coefficients")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


@dataclass(frozen=True)
class IntersectionData:
    """Pairing on span{h, B}: h.h = h_squared, h.B = m/2, B.B = n/4."""

    two_Bh: int = 1
    four_Bsq: int = 3
    h_squared: int = 2

    @property
    def hB(self) -> Fraction:
        return Fraction(self.two_Bh, 2)

    @property
    def BB(self) -> Fraction:
        return Fraction(self.four_Bsq, 4)

    def pair(self, ah: Fraction, aB: Fraction, bh: Fraction, bB: Fraction) -> Fraction:
        return ah * bh * self.h_squared + (ah * bB + aB * bh) * self.hB + aB * bB * self.BB


def _frac_field():
    return field(default=Fraction(0))


@dataclass(frozen=True)
class SurfaceClass:
    """``r + a_h h + a_B B + s pt`` on S."""

    r: Fraction = _frac_field()
    a_h: Fraction = _frac_field()
    a_B: Fraction = _frac_field()
    s: Fraction = _frac_field()

    def __post_init__(self):
        for name in ("r", "a_h", "a_B", "s"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def one(cls) -> SurfaceClass:
        return cls(r=1)

    @classmethod
    def h(cls) -> SurfaceClass:
        return cls(a_h=1)

    @classmethod
    def B(cls) -> SurfaceClass:
        return cls(a_B=1)

    @classmethod
    def pt(cls) -> SurfaceClass:
        return cls(s=1)

    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.r, self.a_h, self.a_B, self.s)

    def degree2(self) -> SurfaceClass:
        return SurfaceClass(a_h=self.a_h, a_B=self.a_B)

    def __add__(self, other: SurfaceClass) -> SurfaceClass:
        if not isinstance(other, SurfaceClass):
            return NotImplemented
        return SurfaceClass(*(x + y for x, y in zip(self.coeffs(), other.coeffs())))

    def __sub__(self, other: SurfaceClass) -> SurfaceClass:
        if not isinstance(other, SurfaceClass):
            return NotImplemented
        return SurfaceClass(*(x - y for x, y in zip(self.coeffs(), other.coeffs())))

    def __neg__(self) -> SurfaceClass:
        return SurfaceClass(*(-x for x in self.coeffs()))

    def scale(self, c: RationalLike) -> SurfaceClass:
        c = as_rational(c)
        return SurfaceClass(*(c * x for x in self.coeffs()))

    def __str__(self) -> str:
        return _render(zip(self.coeffs(), ("", "h", "B", "pt")))


@dataclass(frozen=True)
class BaseClass:
    """``r + a_H H + s pt`` on the plane A."""

    r: Fraction = _frac_field()
    a_H: Fraction = _frac_field()
    s: Fraction = _frac_field()

    def __post_init__(self):
        for name in ("r", "a_H", "s"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.r, self.a_H, self.s)

    def __add__(self, other: BaseClass) -> BaseClass:
        if not isinstance(other, BaseClass):
            return NotImplemented
        return BaseClass(*(x + y for x, y in zip(self.coeffs(), other.coeffs())))

    def __sub__(self, other: BaseClass) -> BaseClass:
        if not isinstance(other, BaseClass):
            return NotImplemented
        return BaseClass(*(x - y for x, y in zip(self.coeffs(), other.coeffs())))

    def scale(self, c: RationalLike) -> BaseClass:
        c = as_rational(c)
        return BaseClass(*(c * x for x in self.coeffs()))

    def to_json(self) -> dict[str, str]:
        return {"r": format_rational(self.r), "H": format_rational(self.a_H), "pt": format_rational(self.s)}

    @classmethod
    def from_json(cls, obj: dict[str, str]) -> BaseClass:
        return cls(parse_rational(obj["r"]), parse_rational(obj["H"]), parse_rational(obj["pt"]))

    def __str__(self) -> str:
        return _render(zip(self.coeffs(), ("", "H", "pt")))


def _render(terms) -> str:
    parts = []
    for coeff, name in terms:
        if coeff == 0:
            continue
        mag = abs(coeff)
        body = format_rational(mag) if (not name or mag != 1) else ""
        parts.append(("-" if coeff < 0 else "+", body + name))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def mul_surface(a: SurfaceClass, b: SurfaceClass, data: IntersectionData) -> SurfaceClass:
    top = a.r * b.s + b.r * a.s + data.pair(a.a_h, a.a_B, b.a_h, b.a_B)
    return SurfaceClass(
        r=a.r * b.r,
        a_h=a.r * b.a_h + b.r * a.a_h,
        a_B=a.r * b.a_B + b.r * a.a_B,
        s=top,
    )


def dual(a: SurfaceClass) -> SurfaceClass:
    return SurfaceClass(a.r, -a.a_h, -a.a_B, a.s)


def exp_deg2(eta: SurfaceClass, data: IntersectionData) -> SurfaceClass:
    """``1 + eta + eta^2/2`` for a pure degree-2 class."""
    if eta.r != 0 or eta.s != 0:
        raise ValueError("exp_deg2 expects a class with only degree-2 components")
    sq = mul_surface(eta, eta, data)
    return SurfaceClass.one() + eta + sq.scale(Fraction(1, 2))


def sqrt_unit(a: SurfaceClass, data: IntersectionData) -> SurfaceClass:
    """Square root of ``1 + x`` as ``1 + x/2 - x^2/8``; exact because x^3 = 0."""
    if a.r != 1:
        raise ValueError(f"sqrt_unit needs a class with rank 1, got rank {a.r}")
    x = a - SurfaceClass.one()
    x2 = mul_surface(x, x, data)
    return SurfaceClass.one() + x.scale(Fraction(1, 2)) - x2.scale(Fraction(1, 8))


def integrate(a: SurfaceClass) -> Fraction:
    return a.s


def mukai_pairing(a: SurfaceClass, b: SurfaceClass, c1_coeff: RationalLike, data: IntersectionData) -> Fraction:
    """Degree-4 part of ``dual(a) * b * exp(c1/2)`` with ``c1 = c1_coeff * h``."""
    half_c1 = SurfaceClass(a_h=as_rational(c1_coeff) / 2)
    twist = exp_deg2(half_c1, data)
    return integrate(mul_surface(mul_surface(dual(a), b, data), twist, data))


def mukai_closed_form(a: SurfaceClass, b: SurfaceClass, data: IntersectionData) -> Fraction:
    """Expanded pairing for ``c1 = -h``.

    ``(h^2/8) r1 r2 + r1 d2 + r2 d1 - eta1.eta2 - (1/2) r1 eta2.h + (1/2) r2 eta1.h``;
    the leading coefficient is 1/4 when h^2 = 2.
    """
    eta12 = data.pair(a.a_h, a.a_B, b.a_h, b.a_B)
    eta2_h = data.pair(b.a_h, b.a_B, Fraction(1), Fraction(0))
    eta1_h = data.pair(a.a_h, a.a_B, Fraction(1), Fraction(0))
    return (
        Fraction(data.h_squared, 8) * a.r * b.r
        + a.r * b.s
        + b.r * a.s
        - eta12
        - Fraction(1, 2) * a.r * eta2_h
        + Fraction(1, 2) * b.r * eta1_h
    )


def pushforward_double_cover(a: SurfaceClass) -> BaseClass:
    if a.a_B != 0:
        raise ValueError("pushforward of the B component is not modelled")
    return BaseClass(2 * a.r, 2 * a.a_h, a.s)


def pullback_double_cover(b: BaseClass) -> SurfaceClass:
    return SurfaceClass(r=b.r, a_h=b.a_H, s=2 * b.s)


def mul_base(a: BaseClass, b: BaseClass) -> BaseClass:
    return BaseClass(
        a.r * b.r,
        a.r * b.a_H + b.r * a.a_H,
        a.r * b.s + b.r * a.s + a.a_H * b.a_H,
    )


def line_bundle_ch(k: int) -> BaseClass:
    """Chern character of O(k) on the plane."""
    return BaseClass(1, k, Fraction(k * k, 2))

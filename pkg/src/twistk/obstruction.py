"""Point-like pairs in rank-3 Euler lattices: bounded search for pairs, modular certificates against them.

A point-like pair is ``(v1, v2)`` with ``v1^T G v2 = 1`` and ``v2^T G v2 = 0``.
By Bezout such a ``v1`` exists iff the entries of ``G v2`` are coprime, so the
search runs over ``v2`` only.  A certificate ``(M, delta)`` says every
isotropic residue vector mod ``M`` has ``G u`` divisible by ``delta``, which
rules out a pair over the integers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from .cohomology import IntersectionData, SurfaceClass, mukai_pairing, mul_surface
from .double_plane import geometry, todd_and_sqrt
from .lattice import GramMatrix

__all__ = [
    "PointPair",
    "ModularCertificate",
    "Admits",
    "Obstructed",
    "Unknown",
    "Verdict",
    "ext_gcd",
    "solve_unit_dot",
    "point_pair_search",
    "modulus_ladder",
    "certificate_search",
    "verify_certificate",
    "decide",
    "control_lattice",
    "verdict_to_json",
    "verdict_from_json",
    "DEFAULT_SEARCH_BOUND",
    "DEFAULT_MAX_MODULUS",
]

DEFAULT_SEARCH_BOUND = 30
DEFAULT_MAX_MODULUS = 64

Vec3 = tuple[int, int, int]


@dataclass(frozen=True)
class PointPair:
    v1: Vec3
    v2: Vec3

    def holds_for(self, G: GramMatrix) -> bool:
        return G.pair(self.v1, self.v2) == 1 and G.pair(self.v2, self.v2) == 0


@dataclass(frozen=True)
class ModularCertificate:
    modulus: int
    divisor: int


@dataclass(frozen=True)
class Admits:
    pair: PointPair
    kind: str = field(default="admits", init=False)


@dataclass(frozen=True)
class Obstructed:
    certificate: ModularCertificate
    kind: str = field(default="obstructed", init=False)


@dataclass(frozen=True)
class Unknown:
    search_bound: int
    moduli_tried: tuple[int, ...]
    kind: str = field(default="unknown", init=False)


Verdict = Union[Admits, Obstructed, Unknown]


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a x + b y = g = gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def solve_unit_dot(w: Sequence[int]) -> Optional[Vec3]:
    """Integer ``v`` with ``v . w = 1``, or None when the entries of ``w`` are not coprime."""
    g, coeffs = 0, [0] * len(w)
    for i, wi in enumerate(w):
        g, s, t = ext_gcd(g, int(wi))
        coeffs = [s * c for c in coeffs]
        coeffs[i] = t
    if g != 1:
        return None
    return tuple(coeffs)


@lru_cache(maxsize=8)
def _box(bound: int) -> np.ndarray:
    """All nonzero vectors in [-bound, bound]^3 in search order.

    Order: ascending L1 norm, then descending (x, y, z) within a shell.
    """
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    x, y, z = np.meshgrid(r, r, r, indexing="ij")
    pts = np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1)
    norm = np.abs(pts).sum(axis=1)
    order = np.lexsort((-pts[:, 2], -pts[:, 1], -pts[:, 0], norm))
    pts = pts[order]
    pts = pts[1:]  # drop the origin, which sorts first
    pts.setflags(write=False)
    return pts


def _as_array(G: GramMatrix) -> np.ndarray:
    return np.array(G.entries, dtype=np.int64)


def point_pair_search(G: GramMatrix, bound: int) -> Optional[PointPair]:
    if bound < 1:
        raise ValueError("bound must be at least 1")
    biggest = max(abs(x) for row in G.entries for x in row)
    if 9 * biggest * bound * bound >= 2**62:
        return _point_pair_search_slow(G, bound)
    A = _as_array(G)
    pts = _box(bound)
    Gv = pts @ A.T
    iso = np.einsum("ij,ij->i", pts, Gv) == 0
    g = np.gcd.reduce(np.abs(Gv), axis=1)
    hits = np.flatnonzero(iso & (g == 1))
    if hits.size == 0:
        return None
    v2 = tuple(int(t) for t in pts[hits[0]])
    v1 = solve_unit_dot(G.apply(v2))
    pair = PointPair(v1, v2)
    assert pair.holds_for(G)
    return pair


def _point_pair_search_slow(G: GramMatrix, bound: int) -> Optional[PointPair]:
    # exact Python integers for entries too large for int64
    for row in _box(bound):
        v2 = tuple(int(t) for t in row)
        if G.pair(v2, v2) == 0:
            v1 = solve_unit_dot(G.apply(v2))
            if v1 is not None:
                return PointPair(v1, v2)
    return None


def _prime_powers(limit: int) -> list[int]:
    out = []
    for p in range(2, limit + 1):
        if all(p % q for q in range(2, math.isqrt(p) + 1)):
            q = p
            while q <= limit:
                out.append(q)
                q *= p
    return out


def modulus_ladder(max_modulus: int) -> list[int]:
    """Prime powers up to ``max_modulus``: 2, 4, 8, ..., 3, 9, ..., 5, 25, ..."""
    return _prime_powers(max_modulus)


@lru_cache(maxsize=16)
def _residues(M: int) -> np.ndarray:
    r = np.arange(M, dtype=np.int64)
    x, y, z = np.meshgrid(r, r, r, indexing="ij")
    return np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1)


def _isotropic_images(G: GramMatrix, M: int) -> np.ndarray:
    """``G u mod M`` for every residue vector ``u`` with ``u^T G u = 0 mod M``."""
    U = _residues(M)
    A = np.array([[x % M for x in row] for row in G.entries], dtype=np.int64)
    AU = U @ A.T
    iso = np.einsum("ij,ij->i", U, AU) % M == 0
    return AU[iso] % M


def certificate_search(G: GramMatrix, max_modulus: int) -> Optional[ModularCertificate]:
    if max_modulus < 2:
        raise ValueError("max_modulus must be at least 2")
    for M in modulus_ladder(max_modulus):
        images = _isotropic_images(G, M)
        for delta in range(2, M + 1):
            if M % delta == 0 and not np.any(images % delta):
                return ModularCertificate(M, delta)
    return None


def verify_certificate(G: GramMatrix, cert: ModularCertificate) -> bool:
    """Re-check a certificate by plain enumeration of all residue vectors."""
    M, delta = cert.modulus, cert.divisor
    if M < 2 or delta < 2 or M % delta:
        raise ValueError(f"divisor {delta} must be at least 2 and divide modulus {M}")
    for u in itertools.product(range(M), repeat=3):
        if G.pair(u, u) % M:
            continue
        if any(t % delta for t in G.apply(u)):
            return False
    return True


def decide(
    G: GramMatrix,
    search_bound: int = DEFAULT_SEARCH_BOUND,
    max_modulus: int = DEFAULT_MAX_MODULUS,
) -> Verdict:
    pair = point_pair_search(G, search_bound)
    if pair is not None:
        return Admits(pair)
    cert = certificate_search(G, max_modulus)
    if cert is not None:
        return Obstructed(cert)
    return Unknown(search_bound, tuple(modulus_ladder(max_modulus)))


def control_lattice(d: int) -> GramMatrix:
    """Euler pairing on sqrt(td) * {1, h, pt} for the untwisted double plane of branch degree 2d."""
    geo = geometry(d)
    _, root = todd_and_sqrt(d)
    data = IntersectionData(two_Bh=0, four_Bsq=0)
    basis = [mul_surface(root, x, data) for x in (SurfaceClass.one(), SurfaceClass.h(), SurfaceClass.pt())]
    rows = []
    for a in basis:
        row = []
        for b in basis:
            val = mukai_pairing(a, b, geo.c1_coeff, data)
            assert val.denominator == 1, val
            row.append(val.numerator)
        rows.append(row)
    return GramMatrix.of(rows, basis=("1", "h", "pt"))


def verdict_to_json(verdict: Verdict, search_bound: int, max_modulus: int) -> dict:
    out: dict = {"verdict": verdict.kind}
    if isinstance(verdict, Admits):
        out["pair"] = {"v1": list(verdict.pair.v1), "v2": list(verdict.pair.v2)}
    elif isinstance(verdict, Obstructed):
        out["certificate"] = {"modulus": verdict.certificate.modulus, "divisor": verdict.certificate.divisor}
    out["bounds"] = {"search_bound": search_bound, "max_modulus": max_modulus}
    return out


def verdict_from_json(obj: dict) -> Verdict:
    kind = obj["verdict"]
    if kind == "admits":
        return Admits(PointPair(tuple(obj["pair"]["v1"]), tuple(obj["pair"]["v2"])))
    if kind == "obstructed":
        c = obj["certificate"]
        return Obstructed(ModularCertificate(c["modulus"], c["divisor"]))
    if kind == "unknown":
        b = obj["bounds"]
        return Unknown(b["search_bound"], tuple(modulus_ladder(b["max_modulus"])))
    raise ValueError(f"unknown verdict kind {kind!r}")

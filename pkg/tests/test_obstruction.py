import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from twistk.cohomology import IntersectionData, SurfaceClass, mukai_closed_form, mul_surface
from twistk.double_plane import geometry, todd_and_sqrt
from twistk.lattice import GramMatrix, TwistParams, gram_matrix
from twistk.obstruction import (
    Admits,
    ModularCertificate,
    Obstructed,
    PointPair,
    Unknown,
    certificate_search,
    control_lattice,
    decide,
    ext_gcd,
    modulus_ladder,
    point_pair_search,
    solve_unit_dot,
    verdict_from_json,
    verdict_to_json,
    verify_certificate,
)

TWISTED = gram_matrix(TwistParams(1, 3))
HYPERBOLIC = GramMatrix.of([[0, 0, 1], [0, 0, 0], [1, 0, 0]])
ZERO = GramMatrix.of([[0, 0, 0], [0, 0, 0], [0, 0, 0]])


def random_gram(rng, lo=-6, hi=6):
    return GramMatrix.of([[rng.randint(lo, hi) for _ in range(3)] for _ in range(3)])


def random_unimodular(rng, steps=3):
    U = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for _ in range(steps):
        i, j = rng.sample(range(3), 2)
        c = rng.choice([-1, 1])
        U = [[U[r][k] + (c * U[j][k] if r == i else 0) for k in range(3)] for r in range(3)]
    perm = list(range(3))
    rng.shuffle(perm)
    signs = [rng.choice([-1, 1]) for _ in range(3)]
    return [[signs[r] * U[perm[r]][k] for k in range(3)] for r in range(3)]


def conjugate(G, U):
    A = G.entries
    return GramMatrix.of(
        [[sum(U[k][i] * A[k][l] * U[l][j] for k in range(3) for l in range(3)) for j in range(3)] for i in range(3)]
    )


def inverse_unimodular(U):
    (a, b, c), (d, e, f), (g, h, i) = U
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    assert det in (1, -1)
    adj = [
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ]
    return [[det * x for x in row] for row in adj]


def matvec(U, v):
    return tuple(sum(U[i][j] * v[j] for j in range(3)) for i in range(3))


def brute_force_pair(G, bound):
    """Search both vectors directly; independent of the Bezout reduction."""
    box = list(itertools.product(range(-bound, bound + 1), repeat=3))
    for v2 in box:
        if G.pair(v2, v2) != 0:
            continue
        for v1 in box:
            if G.pair(v1, v2) == 1:
                return PointPair(v1, v2)
    return None


# -- helpers ------------------------------------------------------------------


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_ext_gcd(a, b):
    g, x, y = ext_gcd(a, b)
    assert g >= 0 and a * x + b * y == g
    assert g == math.gcd(a, b)


@given(st.lists(st.integers(-50, 50), min_size=3, max_size=3))
def test_solve_unit_dot(w):
    v = solve_unit_dot(w)
    if math.gcd(*w) == 1:
        assert sum(a * b for a, b in zip(v, w)) == 1
    else:
        assert v is None


def test_modulus_ladder_order():
    assert modulus_ladder(64)[:12] == [2, 4, 8, 16, 32, 64, 3, 9, 27, 5, 25, 7]
    assert modulus_ladder(2) == [2]


# -- point_pair_search --------------------------------------------------------


def test_control_pair():
    pair = point_pair_search(control_lattice(4), 30)
    assert pair == PointPair((1, 0, 0), (0, 0, 1))
    assert control_lattice(4).pair(pair.v1, pair.v2) == 1


def test_hyperbolic_pair():
    assert point_pair_search(HYPERBOLIC, 5) == PointPair((0, 0, 1), (1, 0, 0))


def test_twisted_has_no_pair():
    assert point_pair_search(TWISTED, 30) is None


def test_bound_validated():
    with pytest.raises(ValueError):
        point_pair_search(TWISTED, 0)


def test_search_agrees_with_two_vector_brute_force():
    rng = random.Random(11)
    for _ in range(60):
        G = random_gram(rng, -3, 3)
        found = point_pair_search(G, 2)
        brute = brute_force_pair(G, 2)
        if found is not None:
            assert found.holds_for(G)
        if brute is not None:
            assert brute.holds_for(G)
            # any isotropic v2 with a partner is also a hit for the one-vector search
            assert found is not None


def test_search_is_deterministic():
    rng = random.Random(5)
    for _ in range(30):
        G = random_gram(rng)
        assert point_pair_search(G, 10) == point_pair_search(G, 10)


def test_search_order_prefers_small_l1_norm():
    rng = random.Random(9)
    for _ in range(40):
        G = random_gram(rng)
        pair = point_pair_search(G, 6)
        if pair is None:
            continue
        norm = sum(map(abs, pair.v2))
        for v in itertools.product(range(-norm, norm + 1), repeat=3):
            if 0 < sum(map(abs, v)) < norm and G.pair(v, v) == 0:
                assert solve_unit_dot(G.apply(v)) is None


def test_large_entries_use_exact_path():
    big = 10**15
    G = GramMatrix.of([[0, 0, 1], [0, big, 0], [1, 0, 0]])
    assert point_pair_search(G, 3) == PointPair((0, 0, 1), (1, 0, 0))


# -- certificates -------------------------------------------------------------


def test_twisted_certificate():
    assert certificate_search(TWISTED, 64) == ModularCertificate(4, 2)
    assert verify_certificate(TWISTED, ModularCertificate(4, 2))
    assert not verify_certificate(TWISTED, ModularCertificate(2, 2))


def test_mod2_failure_witnesses():
    # u = (0, 1, 0): u^T G u = -2 is even but G u = (-3, -2, 0) has an odd entry
    witnesses = [
        u for u in itertools.product(range(2), repeat=3)
        if TWISTED.pair(u, u) % 2 == 0 and any(t % 2 for t in TWISTED.apply(u))
    ]
    assert witnesses == [(0, 1, 0), (0, 1, 1)]


def test_even_matrix_certificate():
    rng = random.Random(3)
    for _ in range(20):
        G = GramMatrix.of([[2 * x for x in row] for row in random_gram(rng).entries])
        assert certificate_search(G, 8) == ModularCertificate(2, 2)


def test_zero_matrix():
    assert decide(ZERO) == Obstructed(ModularCertificate(2, 2))


def test_verify_rejects_bad_divisor():
    with pytest.raises(ValueError):
        verify_certificate(TWISTED, ModularCertificate(4, 3))
    with pytest.raises(ValueError):
        verify_certificate(TWISTED, ModularCertificate(4, 1))


def test_known_pair_defeats_every_certificate():
    for G in (control_lattice(4), control_lattice(3), HYPERBOLIC):
        assert certificate_search(G, 32) is None
        for M in modulus_ladder(16):
            for delta in range(2, M + 1):
                if M % delta == 0:
                    assert not verify_certificate(G, ModularCertificate(M, delta))


@pytest.mark.parametrize("m", range(-9, 10, 2))
def test_paper_family_obstructed(m):
    for n in range(-9, 20):
        if n % 4 != 3:
            continue
        G = gram_matrix(TwistParams(m, n))
        v = decide(G, 30, 64)
        assert v == Obstructed(ModularCertificate(4, 2))
        assert verify_certificate(G, v.certificate)


def test_found_certificates_pass_plain_verification():
    rng = random.Random(21)
    for _ in range(40):
        G = random_gram(rng)
        cert = certificate_search(G, 9)
        if cert is not None:
            assert verify_certificate(G, cert)


# -- decide -------------------------------------------------------------------


def test_decide_examples():
    assert decide(TWISTED) == Obstructed(ModularCertificate(4, 2))
    assert decide(control_lattice(4)) == Admits(PointPair((1, 0, 0), (0, 0, 1)))


def test_unknown_records_bounds():
    # the twisted lattice needs modulus 4; capping at 3 leaves both sides open
    assert decide(TWISTED, 30, 3) == Unknown(30, (2, 3))


def test_verdict_json_round_trip():
    for G in (TWISTED, control_lattice(4), ZERO):
        v = decide(G, 10, 16)
        assert verdict_from_json(verdict_to_json(v, 10, 16)) == v
    u = Unknown(5, tuple(modulus_ladder(8)))
    assert verdict_from_json(verdict_to_json(u, 5, 8)) == u


# -- controls -----------------------------------------------------------------


def test_control_lattice_entries():
    C = control_lattice(4)
    assert C[0, 0] == 4
    assert C[0, 2] == 1 and C[2, 2] == 0
    assert control_lattice(3).is_symmetric()
    assert not C.is_symmetric()


def test_control_matches_closed_form_at_octic():
    _, root = todd_and_sqrt(4)
    data = IntersectionData(two_Bh=0, four_Bsq=0)
    basis = [mul_surface(root, x, data) for x in (SurfaceClass.one(), SurfaceClass.h(), SurfaceClass.pt())]
    C = control_lattice(4)
    for i, j in itertools.product(range(3), repeat=2):
        assert C[i, j] == mukai_closed_form(basis[i], basis[j], data)


@pytest.mark.parametrize("d", range(1, 9))
def test_control_lattice_general(d):
    C = control_lattice(d)
    c = geometry(d).c1_coeff
    # <v(O), v(O)> = chi(O_S); <v(O), sqrt(td) h> = int h td = c h^2 / 2
    assert C[0, 0] == geometry(d).chi_O
    assert C[0, 1] == c and C[1, 0] == -c
    assert C[1, 1] == -2
    assert isinstance(decide(C, 5, 8), Admits)


# -- properties ---------------------------------------------------------------


def test_soundness_corpus():
    rng = random.Random(2024)
    for _ in range(1000):
        G = random_gram(rng)
        pair = point_pair_search(G, 8)
        cert = certificate_search(G, 16)
        assert pair is None or cert is None
        if cert is not None:
            assert verify_certificate(G, cert)
            assert point_pair_search(G, 15) is None


def _covering_bound(v, base):
    return max(base, max(map(abs, v)))


def test_gl3z_invariance():
    rng = random.Random(77)
    for _ in range(200):
        G = random_gram(rng)
        U = random_unimodular(rng)
        Uinv = inverse_unimodular(U)
        H = conjugate(G, U)
        vg, vh = decide(G, 15, 64), decide(H, 15, 64)
        # a bounded box is not GL-invariant: widen it to hold the transported witness
        if isinstance(vg, Admits):
            moved = PointPair(matvec(Uinv, vg.pair.v1), matvec(Uinv, vg.pair.v2))
            assert moved.holds_for(H)
            vh = decide(H, _covering_bound(moved.v2, 15), 64)
        if isinstance(vh, Admits):
            back = PointPair(matvec(U, vh.pair.v1), matvec(U, vh.pair.v2))
            assert back.holds_for(G)
            vg = decide(G, _covering_bound(back.v2, 15), 64)
        assert vg.kind == vh.kind
        if isinstance(vg, Obstructed):
            assert verify_certificate(H, vg.certificate)

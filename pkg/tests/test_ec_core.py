import math

import pytest
from cryptography.hazmat.primitives.asymmetric import ec as crypto_ec
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import isprime

from ecqvlab.ec_core import (
    CURVE_NAMES,
    INFINITY,
    NIST_CURVES,
    Point,
    base_mul,
    get_curve,
    is_on_curve,
    make_point,
    mod_inverse,
    mod_sqrt,
    point_add,
    point_negate,
    scalar_mul,
    scalar_to_hex,
)
from ecqvlab.errors import CurveMismatch, NonInvertible, NonResidue, NotOnCurve, ScalarOutOfRange, UnknownCurve, ZeroModulus

from conftest import brute_add, brute_inverse, brute_mul, brute_points

CRYPTO_CURVES = {
    "P-192": crypto_ec.SECP192R1(),
    "P-224": crypto_ec.SECP224R1(),
    "P-256": crypto_ec.SECP256R1(),
    "P-384": crypto_ec.SECP384R1(),
    "P-521": crypto_ec.SECP521R1(),
}


def to_xy(P):
    return None if P is INFINITY else (P.x, P.y)


# -- mod_inverse -------------------------------------------------------------

def test_mod_inverse_examples():
    assert mod_inverse(1, 7) == 1
    assert mod_inverse(3, 7) == 5
    with pytest.raises(NonInvertible):
        mod_inverse(0, 7)
    with pytest.raises(NonInvertible):
        mod_inverse(4, 28)
    with pytest.raises(ZeroModulus):
        mod_inverse(3, 0)


@pytest.mark.parametrize("m", [7, 23, 97])
def test_mod_inverse_matches_exhaustive_search(m):
    for x in range(1, m):
        assert mod_inverse(x, m) == brute_inverse(x, m)


# -- mod_sqrt ----------------------------------------------------------------

@pytest.mark.parametrize("p", [23, 97, 17, 41, 113])
def test_mod_sqrt_small_primes(p):
    squares = {y * y % p for y in range(p)}
    for a in range(p):
        if a in squares:
            y = mod_sqrt(a, p)
            assert y * y % p == a
        else:
            with pytest.raises(NonResidue):
                mod_sqrt(a, p)


@pytest.mark.parametrize("name", NIST_CURVES)
def test_mod_sqrt_nist_fields(name, rng):
    p = get_curve(name).p
    for _ in range(20):
        y = rng.randrange(1, p)
        root = mod_sqrt(y * y, p)
        assert root in (y, p - y)


# -- registry ----------------------------------------------------------------

def test_toy23_parameters_from_enumeration():
    curve = get_curve("TOY-23")
    points = brute_points(23, 1, 1)
    assert (curve.p, curve.a, curve.b, curve.G) == (23, 1, 1, Point("TOY-23", 0, 1))
    assert curve.n == len(points) + 1 == 28
    assert curve.cofactor == 1
    assert curve.coord_len == 1


def test_toy97_generator_has_maximal_order():
    curve = get_curve("TOY-97")
    points = brute_points(97, 2, 3)
    orders = {}
    for P in points:
        k, Q = 1, P
        while Q is not None:
            Q = brute_add(Q, P, 97, 2)
            k += 1
        orders[P] = k
    assert len(points) + 1 == 100
    assert max(orders.values()) == 50  # the group is not cyclic
    assert (curve.gx, curve.gy) == (0, 10)
    assert orders[(0, 10)] == curve.n == 50
    assert curve.cofactor == 2


@pytest.mark.parametrize("name", NIST_CURVES)
def test_nist_parameters_match_reference_library(name):
    """G, b (implied by G) and the order agree with an independent library."""
    curve = get_curve(name)
    numbers = crypto_ec.derive_private_key(1, CRYPTO_CURVES[name]).public_key().public_numbers()
    assert (curve.gx, curve.gy) == (numbers.x, numbers.y)
    assert curve.a == curve.p - 3
    assert isprime(curve.p) and isprime(curve.n)
    assert abs(curve.n - (curve.p + 1)) <= 2 * math.isqrt(curve.p) + 2  # Hasse bound, cofactor 1


@pytest.mark.parametrize("name", NIST_CURVES)
def test_public_keys_match_reference_library(name, rng):
    curve = get_curve(name)
    for _ in range(5):
        k = rng.randrange(1, curve.n)
        numbers = crypto_ec.derive_private_key(k, CRYPTO_CURVES[name]).public_key().public_numbers()
        P = base_mul(k, curve)
        assert (P.x, P.y) == (numbers.x, numbers.y)
        # the windowed generic path agrees with the base-point table
        Q = scalar_mul(k, point_add(curve.G, INFINITY))
        assert Q == P
        two_g = point_add(curve.G, curve.G)
        assert scalar_mul(k, two_g) == base_mul(2 * k % curve.n, curve)


def test_coord_len_p256():
    assert get_curve("P-256").coord_len == 32


def test_unknown_curve():
    with pytest.raises(UnknownCurve):
        get_curve("P-999")


# -- group operations --------------------------------------------------------

def test_is_on_curve_examples():
    assert is_on_curve(INFINITY)
    assert is_on_curve(get_curve("P-256").G)
    assert not is_on_curve(Point("TOY-23", 0, 5))
    with pytest.raises(NotOnCurve):
        make_point("TOY-23", 0, 5)


def test_point_add_identity_inverse_and_doubling():
    G = get_curve("TOY-23").G
    assert point_add(G, INFINITY) == G
    assert point_add(INFINITY, G) == G
    assert point_add(G, point_negate(G)) is INFINITY
    assert point_add(G, G) == Point("TOY-23", 6, 19)
    assert to_xy(point_add(G, G)) == brute_add((0, 1), (0, 1), 23, 1)


def test_point_add_rejects_mixed_curves():
    with pytest.raises(CurveMismatch):
        point_add(get_curve("TOY-23").G, get_curve("TOY-97").G)


def test_point_negate():
    assert point_negate(INFINITY) is INFINITY
    assert point_negate(Point("TOY-23", 0, 1)) == Point("TOY-23", 0, 22)
    P = base_mul(12345, "P-256")
    assert point_negate(point_negate(P)) == P


def test_scalar_mul_examples():
    curve = get_curve("TOY-23")
    G = curve.G
    assert scalar_mul(0, G) is INFINITY
    assert scalar_mul(1, G) == G
    # n*G = O, expressed inside the [0, n) range as (n-1)G + G
    assert point_add(scalar_mul(curve.n - 1, G), G) is INFINITY
    with pytest.raises(ScalarOutOfRange):
        scalar_mul(curve.n, G)
    with pytest.raises(ScalarOutOfRange):
        scalar_mul(-1, G)
    assert scalar_mul(5, INFINITY, curve) is INFINITY


@pytest.mark.parametrize("name", ["TOY-23", "TOY-97"])
def test_scalar_mul_matches_repeated_addition(name):
    curve = get_curve(name)
    for P in brute_points(curve.p, curve.a, curve.b):
        pt = Point(name, *P)
        for k in range(curve.n):
            assert to_xy(scalar_mul(k, pt)) == brute_mul(k, P, curve.p, curve.a)


def test_group_laws_toy97_sampled(rng):
    """Exhaustive triples on TOY-97 are ~10^6; the full TOY-23 check lives in the acceptance suite."""
    curve = get_curve("TOY-97")
    points = [Point("TOY-97", *P) for P in brute_points(97, 2, 3)] + [INFINITY]
    for P in points:
        for Q in points:
            S = point_add(P, Q)
            assert is_on_curve(S)
            assert S == point_add(Q, P)
    for _ in range(20000):
        P, Q, R = (rng.choice(points) for _ in range(3))
        assert point_add(point_add(P, Q), R) == point_add(P, point_add(Q, R))


@pytest.mark.parametrize("name", CURVE_NAMES)
def test_scalar_homomorphism(name, rng):
    curve = get_curve(name)
    for _ in range(100 if curve.p < 1000 else 20):
        k1, k2 = rng.randrange(curve.n), rng.randrange(curve.n)
        assert base_mul((k1 + k2) % curve.n, curve) == point_add(base_mul(k1, curve), base_mul(k2, curve))


@pytest.mark.parametrize("name", CURVE_NAMES)
def test_order_annihilates_base_point(name):
    curve = get_curve(name)
    assert point_add(base_mul(curve.n - 1, curve), curve.G) is INFINITY
    assert base_mul(curve.n - 1, curve) == point_negate(curve.G)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=1, max_value=get_curve("P-256").n - 1))
def test_double_equals_add_self(k):
    P = base_mul(k, "P-256")
    assert point_add(P, P) == scalar_mul(2, P)


def test_hex_conventions():
    assert str(INFINITY) == "infinity"
    assert scalar_to_hex(1, "P-256") == "0" * 63 + "1"
    assert str(Point("TOY-23", 0, 1)) == "(00, 01)"

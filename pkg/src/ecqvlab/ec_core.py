"""Prime-field and elliptic-curve group arithmetic.

Curves are short Weierstrass, ``y^2 = x^3 + a*x + b (mod p)``, in affine
coordinates. Field elements and scalars are plain Python ints; a point knows
the name of the curve it belongs to and looks the parameters up in the
registry. Nothing here is constant-time.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .errors import (
    CurveMismatch,
    NonInvertible,
    NonResidue,
    NotOnCurve,
    ScalarOutOfRange,
    UnknownCurve,
    ZeroModulus,
)

# Raw affine pair used on the hot path; None is the point at infinity.
_XY = Optional[Tuple[int, int]]


def mod_inverse(x: int, m: int) -> int:
    """Return u in (0, m) with u*x = 1 (mod m)."""
    if m < 2:
        raise ZeroModulus(f"modulus must be >= 2, got {m}")
    try:
        return pow(x, -1, m)
    except ValueError:
        raise NonInvertible(f"{x} has no inverse modulo {m}") from None


def is_quadratic_residue(a: int, p: int) -> bool:
    a %= p
    return a == 0 or pow(a, (p - 1) // 2, p) == 1


def mod_sqrt(a: int, p: int) -> int:
    """Square root of a modulo an odd prime p.

    Returns one of the two roots (which one is unspecified); raises
    NonResidue when none exists. Uses the direct exponent when p = 3 (mod 4)
    and Tonelli-Shanks otherwise (P-224 and TOY-97 need the latter).
    """
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise NonResidue(f"{a} is not a square modulo {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)

    # p - 1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m = s
    c = pow(z, q, p)
    t = pow(a, q, p)
    r = pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return r


class _Infinity:
    _instance: Optional["_Infinity"] = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "infinity"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


@dataclass(frozen=True)
class Point:
    """An affine point tagged with the name of its curve."""

    curve: str
    x: int
    y: int

    def __str__(self) -> str:
        width = 2 * get_curve(self.curve).coord_len
        return f"({self.x:0{width}x}, {self.y:0{width}x})"

    def __neg__(self) -> "Point":
        return point_negate(self)

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        return point_add(self, other)


CurvePoint = Union[Point, _Infinity]


@dataclass(frozen=True)
class Curve:
    name: str
    p: int
    a: int
    b: int
    gx: int
    gy: int
    n: int
    cofactor: int = 1
    strength: Optional[int] = None  # security strength in bits, NIST curves only

    @property
    def G(self) -> Point:
        return Point(self.name, self.gx, self.gy)

    @property
    def coord_len(self) -> int:
        return (self.p.bit_length() + 7) // 8

    def rhs(self, x: int) -> int:
        return (x * x * x + self.a * x + self.b) % self.p

    def contains(self, x: int, y: int) -> bool:
        return 0 <= x < self.p and 0 <= y < self.p and (y * y - self.rhs(x)) % self.p == 0

    def validate(self) -> None:
        p, a, b = self.p, self.a, self.b
        if (4 * a ** 3 + 27 * b ** 2) % p == 0:
            raise ValueError(f"{self.name}: singular curve")
        if not self.contains(self.gx, self.gy):
            raise NotOnCurve(f"{self.name}: base point is not on the curve")
        if _mul(self, self.n, (self.gx, self.gy)) is not None:
            raise ValueError(f"{self.name}: n*G is not the point at infinity")

    def __str__(self) -> str:
        return self.name


# -- raw affine arithmetic ---------------------------------------------------

def _add(curve: Curve, P: _XY, Q: _XY) -> _XY:
    if P is None:
        return Q
    if Q is None:
        return P
    p = curve.p
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + curve.a) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


_WINDOW = 4


def _mul(curve: Curve, k: int, P: _XY) -> _XY:
    """Fixed 4-bit window: one addition per nibble instead of per set bit."""
    if k == 0 or P is None:
        return None
    table: list = [None, P]
    for _ in range(2, 1 << _WINDOW):
        table.append(_add(curve, table[-1], P))
    result: _XY = None
    digits = (k.bit_length() + _WINDOW - 1) // _WINDOW
    for i in reversed(range(digits)):
        for _ in range(_WINDOW):
            result = _add(curve, result, result)
        d = (k >> (i * _WINDOW)) & ((1 << _WINDOW) - 1)
        if d:
            result = _add(curve, result, table[d])
    return result


@functools.lru_cache(maxsize=None)
def _base_table(curve: Curve) -> Tuple[Tuple[_XY, ...], ...]:
    """rows[i][d] = d * 16^i * G, for every nibble position of n."""
    rows = []
    base: _XY = (curve.gx, curve.gy)
    for _ in range((curve.n.bit_length() + _WINDOW - 1) // _WINDOW):
        row = [None, base]
        for _ in range(2, 1 << _WINDOW):
            row.append(_add(curve, row[-1], base))
        rows.append(tuple(row))
        base = _add(curve, row[-1], base)
    return tuple(rows)


def _base_mul(curve: Curve, k: int) -> _XY:
    """k*G from the precomputed table: additions only, no doublings."""
    result: _XY = None
    mask = (1 << _WINDOW) - 1
    for row in _base_table(curve):
        if k == 0:
            break
        d = k & mask
        if d:
            result = _add(curve, result, row[d])
        k >>= _WINDOW
    return result


def _xy(P: CurvePoint) -> _XY:
    return None if P is INFINITY else (P.x, P.y)


def _point(curve: Curve, xy: _XY) -> CurvePoint:
    return INFINITY if xy is None else Point(curve.name, xy[0], xy[1])


# -- public group operations -------------------------------------------------

def curve_of(P: Point) -> Curve:
    return get_curve(P.curve)


def is_on_curve(P: CurvePoint) -> bool:
    if P is INFINITY:
        return True
    return curve_of(P).contains(P.x, P.y)


def point_negate(P: CurvePoint) -> CurvePoint:
    if P is INFINITY:
        return INFINITY
    return Point(P.curve, P.x, (-P.y) % curve_of(P).p)


def point_add(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Group sum; covers the chord rule, doubling, identity and inverses."""
    if P is INFINITY:
        return Q
    if Q is INFINITY:
        return P
    if P.curve != Q.curve:
        raise CurveMismatch(f"cannot add a {P.curve} point to a {Q.curve} point")
    curve = curve_of(P)
    return _point(curve, _add(curve, (P.x, P.y), (Q.x, Q.y)))


def point_sub(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return point_add(P, point_negate(Q))


def scalar_mul(k: int, P: CurvePoint, curve: Optional[Curve] = None) -> CurvePoint:
    """k-fold sum of P, for 0 <= k < n.

    Multiples of the base point come from a cached table; other points use a
    windowed double-and-add.

    ``curve`` is only consulted when P is the point at infinity, to range-check k.
    """
    if P is not INFINITY:
        curve = curve_of(P)
    if k < 0 or (curve is not None and k >= curve.n):
        bound = curve.n if curve is not None else "n"
        raise ScalarOutOfRange(f"scalar {k} outside [0, {bound})")
    if P is INFINITY:
        return INFINITY
    if P.x == curve.gx and P.y == curve.gy:
        return _point(curve, _base_mul(curve, k))
    return _point(curve, _mul(curve, k, (P.x, P.y)))


def base_mul(k: int, curve: Union[str, Curve]) -> CurvePoint:
    """Shorthand for scalar_mul(k, G)."""
    curve = get_curve(curve) if isinstance(curve, str) else curve
    return scalar_mul(k, curve.G)


def make_point(curve: Union[str, Curve], x: int, y: int) -> Point:
    """Build a point, rejecting coordinates that do not satisfy the curve equation."""
    curve = get_curve(curve) if isinstance(curve, str) else curve
    if not curve.contains(x, y):
        raise NotOnCurve(f"({x}, {y}) is not on {curve.name}")
    return Point(curve.name, x, y)


def scalar_to_hex(k: int, curve: Union[str, Curve]) -> str:
    curve = get_curve(curve) if isinstance(curve, str) else curve
    return f"{k:0{2 * curve.coord_len}x}"


# -- curve registry ----------------------------------------------------------

_NIST = {
    "P-192": dict(
        strength=80,
        p=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFFFFFFFFFFFF,
        b=0x64210519E59C80E70FA7E9AB72243049FEB8DEECC146B9B1,
        gx=0x188DA80EB03090F67CBF20EB43A18800F4FF0AFD82FF1012,
        gy=0x07192B95FFC8DA78631011ED6B24CDD573F977A11E794811,
        n=0xFFFFFFFFFFFFFFFFFFFFFFFF99DEF836146BC9B1B4D22831,
    ),
    "P-224": dict(
        strength=112,
        p=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFF000000000000000000000001,
        b=0xB4050A850C04B3ABF54132565044B0B7D7BFD8BA270B39432355FFB4,
        gx=0xB70E0CBD6BB4BF7F321390B94A03C1D356C21122343280D6115C1D21,
        gy=0xBD376388B5F723FB4C22DFE6CD4375A05A07476444D5819985007E34,
        n=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFF16A2E0B8F03E13DD29455C5C2A3D,
    ),
    "P-256": dict(
        strength=128,
        p=0xFFFFFFFF00000001000000000000000000000000FFFFFFFFFFFFFFFFFFFFFFFF,
        b=0x5AC635D8AA3A93E7B3EBBD55769886BC651D06B0CC53B0F63BCE3C3E27D2604B,
        gx=0x6B17D1F2E12C4247F8BCE6E563A440F277037D812DEB33A0F4A13945D898C296,
        gy=0x4FE342E2FE1A7F9B8EE7EB4A7C0F9E162BCE33576B315ECECBB6406837BF51F5,
        n=0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551,
    ),
    "P-384": dict(
        strength=192,
        p=int(
            "FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFE"
            "FFFFFFFF0000000000000000FFFFFFFF", 16),
        b=int(
            "B3312FA7E23EE7E4988E056BE3F82D19181D9C6EFE8141120314088F5013875A"
            "C656398D8A2ED19D2A85C8EDD3EC2AEF", 16),
        gx=int(
            "AA87CA22BE8B05378EB1C71EF320AD746E1D3B628BA79B9859F741E082542A38"
            "5502F25DBF55296C3A545E3872760AB7", 16),
        gy=int(
            "3617DE4A96262C6F5D9E98BF9292DC29F8F41DBD289A147CE9DA3113B5F0B8C0"
            "0A60B1CE1D7E819D7A431D7C90EA0E5F", 16),
        n=int(
            "FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFC7634D81F4372DDF"
            "581A0DB248B0A77AECEC196ACCC52973", 16),
    ),
    "P-521": dict(
        strength=256,
        p=(1 << 521) - 1,
        b=int(
            "0051953EB9618E1C9A1F929A21A0B68540EEA2DA725B99B315F3B8B489918EF1"
            "09E156193951EC7E937B1652C0BD3BB1BF073573DF883D2C34F1EF451FD46B50"
            "3F00", 16),
        gx=int(
            "00C6858E06B70404E9CD9E3ECB662395B4429C648139053FB521F828AF606B4D"
            "3DBAA14B5E77EFE75928FE1DC127A2FFA8DE3348B3C1856A429BF97E7E31C2E5"
            "BD66", 16),
        gy=int(
            "011839296A789A3BC0045C8A5FB42C7D1BD998F54449579B446817AFBD17273E"
            "662C97EE72995EF42640C550B9013FAD0761353C7086A272C24088BE94769FD1"
            "6650", 16),
        n=int(
            "01FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFF"
            "FFFA51868783BF2F966B7FCC0148F709A5D03BB5C9B8899C47AEBB6FB71E9138"
            "6409", 16),
    ),
}

# name -> (p, a, b, explicit generator or None)
_TOY = {
    "TOY-23": (23, 1, 1, (0, 1)),
    "TOY-97": (97, 2, 3, None),
}

NIST_CURVES = tuple(_NIST)
TOY_CURVES = tuple(_TOY)
CURVE_NAMES = NIST_CURVES + TOY_CURVES


def _toy_curve(name: str, p: int, a: int, b: int, g: Optional[Tuple[int, int]]) -> Curve:
    """Build a small curve by brute force.

    Without an explicit generator, G is the first point (ordered by x, then y)
    of maximal order; n is always the order of G, not the point count.
    """
    probe = Curve(name, p, a, b, 0, 0, 1)
    points = [(x, y) for x in range(p) for y in range(p) if probe.contains(x, y)]
    count = len(points) + 1

    def order(P: _XY) -> int:
        k, Q = 1, P
        while Q is not None:
            Q = _add(probe, Q, P)
            k += 1
        return k

    if g is None:
        g = max(points, key=lambda P: (order(P), -points.index(P)))
    n = order(g)
    return Curve(name, p, a, b, g[0], g[1], n, cofactor=count // n)


@functools.lru_cache(maxsize=None)
def get_curve(name: str) -> Curve:
    if isinstance(name, Curve):
        return name
    if name in _NIST:
        params = _NIST[name]
        curve = Curve(
            name, params["p"], params["p"] - 3, params["b"], params["gx"], params["gy"],
            params["n"], strength=params["strength"],
        )
    elif name in _TOY:
        curve = _toy_curve(name, *_TOY[name])
    else:
        raise UnknownCurve(f"unknown curve {name!r}; choose from {', '.join(CURVE_NAMES)}")
    curve.validate()
    return curve

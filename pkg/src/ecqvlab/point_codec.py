"""Byte encoding of curve points with a one-byte CHOICE tag.

Layout, with L = coord_len of the curve:

    uncompressed     0x04 || x (L) || y (L)     1 + 2L bytes
    compressed-y-0   0x02 || x (L)              1 + L bytes
    compressed-y-1   0x03 || x (L)              1 + L bytes
    x-only           0x00 || x (L)              1 + L bytes

Tag 0x01 ("fill") is reserved and never produced or accepted.
"""

from __future__ import annotations

import enum
from typing import NamedTuple, Union

from .ec_core import INFINITY, Curve, CurvePoint, Point, get_curve, is_on_curve, mod_sqrt, point_negate
from .errors import InfinityNotEncodable, LengthMismatch, NotOnCurve

CHOICE_LEN = 1


class Tag(enum.IntEnum):
    X_ONLY = 0x00
    FILL = 0x01
    COMPRESSED_Y0 = 0x02
    COMPRESSED_Y1 = 0x03
    UNCOMPRESSED = 0x04


class Mode(str, enum.Enum):
    UNCOMPRESSED = "uncompressed"
    COMPRESSED = "compressed"
    X_ONLY = "x-only"


class CandidatePair(NamedTuple):
    """Both points sharing an x-coordinate, even y first."""

    even: Point
    odd: Point

    def __contains__(self, P: object) -> bool:
        return P == self.even or P == self.odd


def encoded_length(curve: Union[str, Curve], mode: Union[Mode, str]) -> int:
    """1 + 2L for uncompressed points, 1 + L for compressed and x-only ones."""
    size = get_curve(curve).coord_len
    return CHOICE_LEN + (2 * size if Mode(mode) is Mode.UNCOMPRESSED else size)


def encode_point(P: CurvePoint, mode: Union[Mode, str] = Mode.COMPRESSED) -> bytes:
    if P is INFINITY:
        raise InfinityNotEncodable("the point at infinity has no encoding")
    if not is_on_curve(P):
        raise NotOnCurve(f"{P!r} is not on {P.curve}")
    mode = Mode(mode)
    size = get_curve(P.curve).coord_len
    x = P.x.to_bytes(size, "big")
    if mode is Mode.UNCOMPRESSED:
        return bytes([Tag.UNCOMPRESSED]) + x + P.y.to_bytes(size, "big")
    if mode is Mode.COMPRESSED:
        return bytes([Tag.COMPRESSED_Y0 + (P.y & 1)]) + x
    return bytes([Tag.X_ONLY]) + x


def lift_x(curve: Union[str, Curve], x: int) -> CandidatePair:
    """Solve the curve equation for y; raises NonResidue when x is not on the curve."""
    curve = get_curve(curve)
    if not 0 <= x < curve.p:
        raise NotOnCurve(f"x-coordinate {x} is not a field element of {curve.name}")
    y = mod_sqrt(curve.rhs(x), curve.p)
    P = Point(curve.name, x, y)
    Q = point_negate(P)
    return CandidatePair(P, Q) if y & 1 == 0 else CandidatePair(Q, P)


def decode_point(data: bytes, curve: Union[str, Curve]) -> Union[Point, CandidatePair]:
    """Inverse of encode_point.

    x-only encodings cannot pin down y, so they decode to a CandidatePair;
    every other tag yields a single validated point.
    """
    curve = get_curve(curve)
    size = curve.coord_len
    if not data:
        raise LengthMismatch("empty point encoding")
    try:
        tag = Tag(data[0])
    except ValueError:
        raise NotOnCurve(f"unknown point tag 0x{data[0]:02x}") from None
    if tag is Tag.FILL:
        raise NotOnCurve("tag 0x01 (fill) is reserved")
    expected = CHOICE_LEN + (2 * size if tag is Tag.UNCOMPRESSED else size)
    if len(data) != expected:
        raise LengthMismatch(f"{tag.name} encoding must be {expected} bytes, got {len(data)}")
    x = int.from_bytes(data[1:1 + size], "big")

    if tag is Tag.UNCOMPRESSED:
        y = int.from_bytes(data[1 + size:], "big")
        if not curve.contains(x, y):
            raise NotOnCurve(f"decoded point is not on {curve.name}")
        return Point(curve.name, x, y)

    pair = lift_x(curve, x)
    if tag is Tag.X_ONLY:
        return pair
    if pair.even == pair.odd:
        # y = 0: the single root is even, so only compressed-y-0 names it
        if tag is Tag.COMPRESSED_Y1:
            raise NotOnCurve("no odd y exists for this x")
        return pair.even
    return pair.even if tag is Tag.COMPRESSED_Y0 else pair.odd

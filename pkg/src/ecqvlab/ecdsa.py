"""ECDSA signature generation and verification.

Signing computes s = (m + p*Rx) / k (mod n) for a fresh nonce k with R = kG.
Verification rebuilds T = (m/s)G + (Rx/s)P and accepts when T and R share
an x-coordinate modulo n; y is never needed, so the signature only keeps the
parity of Ry for round-tripping through the compressed-point tags.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .ec_core import INFINITY, Curve, CurvePoint, base_mul, get_curve, is_on_curve, mod_inverse, point_add, scalar_mul
from .errors import DegenerateNonce, LengthMismatch, MalformedSignature, NotOnCurve, RandomnessExhausted, UnsignableDigest
from .keymgmt import KeyPair
from .randomness import RandomSource, system_rng

MAX_NONCE_ATTEMPTS = 64
# composite-order toy groups can make every nonce degenerate; small enough to check exhaustively
_SCAN_LIMIT = 1 << 16


@dataclass(frozen=True)
class Signature:
    rx: int  # x-coordinate of R, not reduced mod n
    ry_parity: int
    s: int

    def to_bytes(self, curve: Union[str, Curve]) -> bytes:
        """Parity tag (0x02/0x03) followed by Rx and s, each coord_len bytes big-endian."""
        size = get_curve(curve).coord_len
        return bytes([2 + (self.ry_parity & 1)]) + self.rx.to_bytes(size, "big") + self.s.to_bytes(size, "big")

    @classmethod
    def from_bytes(cls, data: bytes, curve: Union[str, Curve]) -> "Signature":
        size = get_curve(curve).coord_len
        if len(data) != 1 + 2 * size:
            raise LengthMismatch(f"signature must be {1 + 2 * size} bytes, got {len(data)}")
        if data[0] not in (2, 3):
            raise MalformedSignature(f"bad signature tag 0x{data[0]:02x}")
        rx = int.from_bytes(data[1:1 + size], "big")
        s = int.from_bytes(data[1 + size:], "big")
        return cls(rx, data[0] - 2, s)


def hash_to_int(message: bytes, curve: Union[str, Curve]) -> int:
    """SHA-256 of the message as a big-endian integer, reduced mod n."""
    return int.from_bytes(hashlib.sha256(message).digest(), "big") % get_curve(curve).n


def sign(
    curve: Union[str, Curve],
    m: int,
    private: int,
    rng: Optional[RandomSource] = None,
    *,
    nonce: Optional[int] = None,
) -> Signature:
    """Sign digest m with the given private key.

    Degenerate nonces (Rx = 0 mod n, or a numerator or nonce that is not a
    unit mod n) are redrawn, up to MAX_NONCE_ATTEMPTS times. On small groups
    the last resort is a uniform pick among all usable nonces, or
    UnsignableDigest when there are none. An explicit ``nonce`` bypasses the
    rng and is never redrawn.
    """
    curve = get_curve(curve)
    n = curve.n
    m %= n
    if rng is None and nonce is None:
        rng = system_rng()
    for _ in range(MAX_NONCE_ATTEMPTS):
        k = nonce if nonce is not None else rng.randint(1, n - 1)
        R = base_mul(k, curve)
        numerator = (m + private * R.x) % n
        if R.x % n == 0 or math.gcd(numerator, n) != 1 or math.gcd(k, n) != 1:
            if nonce is not None:
                raise DegenerateNonce(f"nonce {k} yields a degenerate signature")
            continue
        s = numerator * mod_inverse(k, n) % n
        return Signature(R.x, R.y & 1, s)
    if nonce is None and n < _SCAN_LIMIT:
        usable = [k for k in range(1, n) if _usable(curve, m, private, k)]
        if not usable:
            raise UnsignableDigest(f"no nonce in [1, {n - 1}] signs this digest with this key")
        k = usable[rng.randint(0, len(usable) - 1)]
        R = base_mul(k, curve)
        return Signature(R.x, R.y & 1, (m + private * R.x) * mod_inverse(k, n) % n)
    raise RandomnessExhausted(f"no usable nonce after {MAX_NONCE_ATTEMPTS} draws")


def _usable(curve: Curve, m: int, private: int, k: int) -> bool:
    n = curve.n
    rx = base_mul(k, curve).x
    return rx % n != 0 and math.gcd(k, n) == 1 and math.gcd((m + private * rx) % n, n) == 1


def verification_scalars(curve: Union[str, Curve], m: int, sig: Signature) -> Tuple[int, int, int]:
    """Return (t1, t2, t3) = (1/s, m/s, Rx/s) mod n."""
    n = get_curve(curve).n
    if not 1 <= sig.s < n or sig.rx % n == 0:
        raise MalformedSignature("signature component out of range")
    if math.gcd(sig.s, n) != 1:
        raise MalformedSignature("s is not invertible modulo the group order")
    t1 = mod_inverse(sig.s, n)
    return t1, m % n * t1 % n, sig.rx % n * t1 % n


def verify(m: int, sig: Signature, public: CurvePoint, *, full_point: bool = False) -> bool:
    """Check sig against digest m and a public key.

    By default only the x-coordinates of T and R are compared (mod n). With
    ``full_point`` the y-parity carried in the signature must match as well,
    which rejects the (Rx, n - s) twin of a valid signature.
    """
    if public is INFINITY or not is_on_curve(public):
        raise NotOnCurve("public key must be a finite point on its curve")
    curve = get_curve(public.curve)
    _, t2, t3 = verification_scalars(curve, m, sig)
    T = point_add(base_mul(t2, curve), scalar_mul(t3, public))
    if T is INFINITY:
        return False
    if T.x % curve.n != sig.rx % curve.n:
        return False
    return not full_point or (T.x == sig.rx and T.y & 1 == sig.ry_parity)


def sign_message(keys: KeyPair, message: bytes, rng: Optional[RandomSource] = None) -> Signature:
    return sign(keys.curve, hash_to_int(message, keys.curve), keys.private, rng)


def verify_message(public: CurvePoint, message: bytes, sig: Signature) -> bool:
    return verify(hash_to_int(message, public.curve), sig, public)

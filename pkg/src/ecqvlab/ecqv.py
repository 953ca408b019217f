"""ECQV implicit certificates, with explicit certificates for comparison.

Issuance flow:

    device:  key pair (p, P), sends request (P, I)
    CA:      draws r, E = P + rG, cert = (..., I, E), h = H(cert),
             w = h*r + c (mod n), returns (cert, w)
    device:  z = h*p + w (mod n)
    anyone:  Z = h*E + C

and z*G == Z holds for honest runs. Wire layout shared by both kinds:

    version(1) || type(1) || signer_id(8) || len(I)(2, big-endian) || I ||
    verification key (compressed point) [|| signature, explicit only]

so the non-key overhead is q = 12 + len(I) bytes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import ClassVar, Optional, Union

from . import ecdsa
from .ec_core import INFINITY, Curve, CurvePoint, Point, base_mul, get_curve, is_on_curve, point_add, scalar_mul
from .errors import CurveMismatch, DegenerateE, InfoTooLong, LengthMismatch, NotOnCurve
from .keymgmt import KeyPair, generate_keypair, random_scalar
from .point_codec import Mode, decode_point, encode_point, encoded_length
from .randomness import RandomSource, system_rng

CERT_VERSION = 3
TYPE_EXPLICIT = 0
TYPE_IMPLICIT = 1
SIGNER_ID_LEN = 8
MAX_INFO_LEN = 0xFFFF
HEADER_LEN = 1 + 1 + SIGNER_ID_LEN + 2
MAX_ISSUE_ATTEMPTS = 64


def other_info_length(info_len: int) -> int:
    """q: every certificate byte that is neither a key nor a signature."""
    return HEADER_LEN + info_len


def cert_length(curve: Union[str, Curve], info_len: int, kind: str) -> int:
    """Closed-form size: q + 2*L2 + l2 for explicit, q + L2 for implicit."""
    curve = get_curve(curve)
    point_len = encoded_length(curve, Mode.COMPRESSED)
    q = other_info_length(info_len)
    if kind == "explicit":
        return q + 2 * point_len + curve.coord_len
    if kind == "implicit":
        return q + point_len
    raise ValueError(f"kind must be 'explicit' or 'implicit', not {kind!r}")


def _header(version: int, cert_type: int, signer_id: bytes, info: bytes) -> bytes:
    if len(info) > MAX_INFO_LEN:
        raise InfoTooLong(f"info is {len(info)} bytes; at most {MAX_INFO_LEN} fit")
    if len(signer_id) != SIGNER_ID_LEN:
        raise LengthMismatch(f"signer_id must be {SIGNER_ID_LEN} bytes")
    return bytes([version, cert_type]) + signer_id + len(info).to_bytes(2, "big") + info


@dataclass(frozen=True)
class CertRequest:
    public: Point
    info: bytes = b""

    def __post_init__(self):
        if self.public is INFINITY or not is_on_curve(self.public):
            raise NotOnCurve("request key must be a finite point on its curve")
        if len(self.info) > MAX_INFO_LEN:
            raise InfoTooLong(f"info is {len(self.info)} bytes; at most {MAX_INFO_LEN} fit")


@dataclass(frozen=True)
class ImplicitCert:
    curve: str
    signer_id: bytes
    info: bytes
    reconstruction: Point  # E
    version: int = CERT_VERSION

    cert_type: ClassVar[int] = TYPE_IMPLICIT

    def to_bytes(self) -> bytes:
        header = _header(self.version, self.cert_type, self.signer_id, self.info)
        return header + encode_point(self.reconstruction, Mode.COMPRESSED)


@dataclass(frozen=True)
class ExplicitCert:
    curve: str
    signer_id: bytes
    info: bytes
    public_key: Point
    signature: ecdsa.Signature
    version: int = CERT_VERSION

    cert_type: ClassVar[int] = TYPE_EXPLICIT

    def tbs_bytes(self) -> bytes:
        header = _header(self.version, self.cert_type, self.signer_id, self.info)
        return header + encode_point(self.public_key, Mode.COMPRESSED)

    def to_bytes(self) -> bytes:
        return self.tbs_bytes() + self.signature.to_bytes(self.curve)


Certificate = Union[ImplicitCert, ExplicitCert]


def encode_cert(cert: Certificate) -> bytes:
    return cert.to_bytes()


def decode_cert(data: bytes, curve: Union[str, Curve]) -> Certificate:
    curve = get_curve(curve)
    if len(data) < HEADER_LEN:
        raise LengthMismatch("certificate shorter than its fixed header")
    version, cert_type = data[0], data[1]
    signer_id = data[2:2 + SIGNER_ID_LEN]
    info_len = int.from_bytes(data[2 + SIGNER_ID_LEN:HEADER_LEN], "big")
    if cert_type not in (TYPE_EXPLICIT, TYPE_IMPLICIT):
        raise ValueError(f"unknown certificate type {cert_type}")
    kind = "implicit" if cert_type == TYPE_IMPLICIT else "explicit"
    if len(data) != cert_length(curve, info_len, kind):
        raise LengthMismatch(f"{kind} certificate length does not match its info length")
    info = data[HEADER_LEN:HEADER_LEN + info_len]
    point_len = encoded_length(curve, Mode.COMPRESSED)
    key_bytes = data[HEADER_LEN + info_len:HEADER_LEN + info_len + point_len]
    if key_bytes[0] not in (2, 3):
        raise NotOnCurve("certificate keys must use a compressed-y encoding")
    key = decode_point(key_bytes, curve)
    if cert_type == TYPE_IMPLICIT:
        return ImplicitCert(curve.name, signer_id, info, key, version)
    sig = ecdsa.Signature.from_bytes(data[HEADER_LEN + info_len + point_len:], curve)
    return ExplicitCert(curve.name, signer_id, info, key, sig, version)


@dataclass(frozen=True)
class CertificateAuthority:
    """A CA key pair. Immutable, so one instance can serve concurrent issuances."""

    keys: KeyPair

    @classmethod
    def generate(cls, curve: Union[str, Curve], rng: RandomSource) -> "CertificateAuthority":
        return cls(generate_keypair(curve, rng))

    @property
    def curve(self) -> str:
        return self.keys.curve

    @property
    def public(self) -> Point:
        return self.keys.public

    @property
    def signer_id(self) -> bytes:
        return hashlib.sha256(encode_point(self.public, Mode.COMPRESSED)).digest()[:SIGNER_ID_LEN]


@dataclass(frozen=True)
class IssuanceResponse:
    cert: ImplicitCert
    w: int


def cert_hash(cert: Certificate) -> int:
    """SHA-256 of the encoded certificate mod n; a zero reduction maps to 1."""
    n = get_curve(cert.curve).n
    h = int.from_bytes(hashlib.sha256(cert.to_bytes()).digest(), "big") % n
    return h or 1


def _check_same_curve(req: CertRequest, ca: CertificateAuthority) -> Curve:
    if req.public.curve != ca.curve:
        raise CurveMismatch(f"request is on {req.public.curve}, CA is on {ca.curve}")
    return get_curve(ca.curve)


def request_certificate(curve: Union[str, Curve], info: bytes, rng: RandomSource) -> tuple:
    """Device side: returns (key pair, request)."""
    keys = generate_keypair(curve, rng)
    return keys, CertRequest(keys.public, info)


def ca_issue(
    req: CertRequest,
    ca: CertificateAuthority,
    rng: Optional[RandomSource] = None,
    r_upper: Optional[int] = None,
    *,
    r: Optional[int] = None,
    h: Optional[int] = None,
) -> IssuanceResponse:
    """Issue an implicit certificate for ``req``.

    r is drawn uniformly from [1, r_upper] (default n - 1). ``r`` and ``h``
    pin the expansion integer and the certificate hash for experiments on
    toy curves; they are never needed for a real issuance.
    """
    curve = _check_same_curve(req, ca)
    if rng is None and r is None:
        rng = system_rng()
    for _ in range(MAX_ISSUE_ATTEMPTS):
        rr = r if r is not None else random_scalar(curve, rng, r_upper)
        E = point_add(req.public, base_mul(rr, curve))
        if E is INFINITY:
            if r is not None:
                raise DegenerateE(f"r = {rr} cancels the requester key")
            continue
        cert = ImplicitCert(curve.name, ca.signer_id, req.info, E)
        hh = cert_hash(cert) if h is None else h % curve.n
        return IssuanceResponse(cert, (hh * rr + ca.keys.private) % curve.n)
    raise DegenerateE(f"reconstruction value hit infinity {MAX_ISSUE_ATTEMPTS} times")


def derive_private(cert: ImplicitCert, w: int, p: int, *, h: Optional[int] = None) -> int:
    """z = h*p + w (mod n). A wrong p is not an error here; derive_public exposes it."""
    n = get_curve(cert.curve).n
    hh = cert_hash(cert) if h is None else h
    return (hh * p + w) % n


def derive_public(cert: ImplicitCert, ca_public: CurvePoint, *, h: Optional[int] = None) -> CurvePoint:
    """Z = h*E + C, computable by anyone holding the certificate and C."""
    if ca_public is INFINITY or not is_on_curve(ca_public):
        raise NotOnCurve("CA public key must be a finite point on its curve")
    if ca_public.curve != cert.curve:
        raise CurveMismatch(f"certificate is on {cert.curve}, CA key on {ca_public.curve}")
    E = cert.reconstruction
    if not is_on_curve(E):
        raise NotOnCurve("reconstruction value is not on the curve")
    n = get_curve(cert.curve).n
    hh = cert_hash(cert) if h is None else h % n
    return point_add(scalar_mul(hh, E), ca_public)


def issue_explicit(
    req: CertRequest, ca: CertificateAuthority, rng: Optional[RandomSource] = None
) -> ExplicitCert:
    """Conventional certificate: the request key itself, signed by the CA."""
    curve = _check_same_curve(req, ca)
    unsigned = ExplicitCert(curve.name, ca.signer_id, req.info, req.public, ecdsa.Signature(0, 0, 0))
    digest = ecdsa.hash_to_int(unsigned.tbs_bytes(), curve)
    sig = ecdsa.sign(curve, digest, ca.keys.private, rng)
    return ExplicitCert(curve.name, ca.signer_id, req.info, req.public, sig)


def verify_explicit(cert: ExplicitCert, ca_public: Point) -> bool:
    digest = ecdsa.hash_to_int(cert.tbs_bytes(), cert.curve)
    return ecdsa.verify(digest, cert.signature, ca_public)

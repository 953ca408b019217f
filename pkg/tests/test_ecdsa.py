import random

import pytest
from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec as crypto_ec
from cryptography.hazmat.primitives.asymmetric.utils import decode_dss_signature, encode_dss_signature

from ecqvlab import ecdsa
from ecqvlab.ec_core import CURVE_NAMES, base_mul, get_curve, mod_inverse
from ecqvlab.errors import DegenerateNonce, LengthMismatch, MalformedSignature, RandomnessExhausted, UnsignableDigest
from ecqvlab.keymgmt import KeyPair, generate_keypair
from ecqvlab.randomness import ScriptedRandom

from conftest import brute_mul

# Hashing rules agree with standard ECDSA whenever SHA-256 is not wider than n.
INTEROP = {
    "P-256": crypto_ec.SECP256R1(),
    "P-384": crypto_ec.SECP384R1(),
    "P-521": crypto_ec.SECP521R1(),
}


def test_toy97_forced_nonce_matches_hand_arithmetic():
    # independent: R = 7G by repeated addition; s solves 7s = m + p*Rx (mod 50)
    R = brute_mul(7, (0, 10), 97, 2)
    assert R == (10, 76)
    sig = ecdsa.sign("TOY-97", 7, 3, nonce=7)
    assert (sig.rx, sig.ry_parity, sig.s) == (10, 0, 41)
    assert ecdsa.verify(7, sig, base_mul(3, "TOY-97"))


def test_verification_scalars_recover_nonce(rng):
    for name in CURVE_NAMES:
        curve = get_curve(name)
        for _ in range(20):
            keys = generate_keypair(curve, rng)
            m = rng.randrange(curve.n)
            k = rng.randrange(1, curve.n)
            try:
                sig = ecdsa.sign(curve, m, keys.private, nonce=k)
            except (DegenerateNonce, UnsignableDigest):
                continue
            _, t2, t3 = ecdsa.verification_scalars(curve, m, sig)
            assert (t2 + t3 * keys.private) % curve.n == k


def test_degenerate_nonce_is_redrawn():
    import math

    curve = get_curve("TOY-23")
    k_bad = next(k for k in range(1, curve.n) if base_mul(k, curve).x == 0)
    k_good = next(
        k for k in range(1, curve.n)
        if base_mul(k, curve).x % curve.n and math.gcd(k, curve.n) == 1
        and math.gcd((5 + base_mul(k, curve).x) % curve.n, curve.n) == 1
    )
    scripted = ScriptedRandom([k_bad, k_good])
    sig = ecdsa.sign(curve, 5, 1, scripted)
    assert scripted.draws == [k_bad, k_good]
    assert sig.rx == base_mul(k_good, curve).x
    with pytest.raises(DegenerateNonce):
        ecdsa.sign(curve, 5, 1, nonce=k_bad)


def test_randomness_exhausted():
    curve = get_curve("P-256")
    k, p = 12345, 777
    m = -p * base_mul(k, curve).x % curve.n  # zero numerator for this nonce
    with pytest.raises(RandomnessExhausted):
        ecdsa.sign(curve, m, p, ScriptedRandom([k] * ecdsa.MAX_NONCE_ATTEMPTS))


def test_small_group_falls_back_to_scan():
    curve = get_curve("TOY-23")
    k_bad = next(k for k in range(1, curve.n) if base_mul(k, curve).x == 0)
    scripted = ScriptedRandom([k_bad] * ecdsa.MAX_NONCE_ATTEMPTS + [0])
    sig = ecdsa.sign(curve, 5, 1, scripted)
    keys = KeyPair.from_private(curve, 1)
    assert ecdsa.verify(5, sig, keys.public)


def test_verify_rejects_other_message(rng):
    keys = generate_keypair("P-256", rng)
    sig = ecdsa.sign("P-256", 1234, keys.private, rng)
    assert ecdsa.verify(1234, sig, keys.public)
    assert not ecdsa.verify(1235, sig, keys.public)


def test_malleable_twin_accepted_by_x_check_only():
    curve = get_curve("TOY-97")
    pub = base_mul(3, curve)
    sig = ecdsa.sign(curve, 7, 3, nonce=7)
    twin = ecdsa.Signature(sig.rx, sig.ry_parity, curve.n - sig.s)
    # direct computation: with s' = n - s, T = -R, which shares R's x-coordinate
    t1 = mod_inverse(twin.s, curve.n)
    T = brute_mul(7 * t1 % curve.n, (0, 10), 97, 2)
    T2 = brute_mul(10 * t1 % curve.n, (pub.x, pub.y), 97, 2)
    from conftest import brute_add
    assert brute_add(T, T2, 97, 2) == (10, 97 - 76)
    assert ecdsa.verify(7, twin, pub)
    assert not ecdsa.verify(7, twin, pub, full_point=True)
    assert ecdsa.verify(7, sig, pub, full_point=True)


def test_malformed_signatures():
    pub = base_mul(5, "P-256")
    n = get_curve("P-256").n
    for bad in (ecdsa.Signature(1, 0, 0), ecdsa.Signature(1, 0, n), ecdsa.Signature(n, 0, 1)):
        with pytest.raises(MalformedSignature):
            ecdsa.verify(1, bad, pub)
    with pytest.raises(MalformedSignature):  # s shares a factor with the toy order 28
        ecdsa.verify(1, ecdsa.Signature(3, 0, 14), base_mul(3, "TOY-23"))


def test_signature_serialization(rng):
    for name in CURVE_NAMES:
        curve = get_curve(name)
        keys = generate_keypair(curve, rng)
        sig = ecdsa.sign(curve, rng.randrange(curve.n), keys.private, rng)
        data = sig.to_bytes(curve)
        assert len(data) == 1 + 2 * curve.coord_len
        assert data[0] == 2 + sig.ry_parity
        assert ecdsa.Signature.from_bytes(data, curve) == sig
    with pytest.raises(LengthMismatch):
        ecdsa.Signature.from_bytes(b"\x02" + bytes(10), "P-256")
    with pytest.raises(MalformedSignature):
        ecdsa.Signature.from_bytes(b"\x05" + bytes(64), "P-256")


def test_hash_to_int():
    import hashlib

    n = get_curve("P-256").n
    assert ecdsa.hash_to_int(b"abc", "P-256") == int(hashlib.sha256(b"abc").hexdigest(), 16) % n


@pytest.mark.parametrize("name", sorted(INTEROP))
def test_interop_with_reference_library(name, rng):
    curve = get_curve(name)
    for _ in range(5):
        d = rng.randrange(1, curve.n)
        ref_key = crypto_ec.derive_private_key(d, INTEROP[name])
        keys = KeyPair.from_private(curve, d)
        message = rng.randbytes(40)

        ours = ecdsa.sign_message(keys, message, rng)
        der = encode_dss_signature(ours.rx % curve.n, ours.s)
        ref_key.public_key().verify(der, message, crypto_ec.ECDSA(hashes.SHA256()))

        r, s = decode_dss_signature(ref_key.sign(message, crypto_ec.ECDSA(hashes.SHA256())))
        # Rx and r agree mod n; Rx < n for these curves with overwhelming probability
        theirs = ecdsa.Signature(r, 0, s)
        assert ecdsa.verify_message(keys.public, message, theirs)
        assert not ecdsa.verify_message(keys.public, message + b"!", theirs)
        with pytest.raises(InvalidSignature):
            ref_key.public_key().verify(der, message + b"!", crypto_ec.ECDSA(hashes.SHA256()))


def test_unsignable_digest_on_composite_order():
    # n = 50: an even key and an even digest keep m + p*Rx even for every nonce
    with pytest.raises(UnsignableDigest):
        ecdsa.sign("TOY-97", 4, 6, random.Random(0))


@pytest.mark.parametrize("name", ["TOY-23", "TOY-97"])
def test_toy_round_trip_when_signable(name, rng):
    curve = get_curve(name)
    done = 0
    while done < 200:
        keys = generate_keypair(curve, rng)
        m = rng.randrange(curve.n)
        try:
            sig = ecdsa.sign(curve, m, keys.private, rng)
        except UnsignableDigest:
            assert not any(ecdsa._usable(curve, m, keys.private, k) for k in range(1, curve.n))
            continue
        assert ecdsa.verify(m, sig, keys.public)
        done += 1

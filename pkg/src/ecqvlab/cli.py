"""Command-line interface.

Exit status: 0 on success, 1 when an operation fails (signature rejected,
key not found, malformed input), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import bench as bench_mod
from . import crack, ecdsa, ecqv
from .ec_core import CURVE_NAMES, INFINITY, NIST_CURVES, base_mul, get_curve, make_point, scalar_to_hex
from .errors import EcqvLabError, NotFound
from .keymgmt import KeyPair, draw_expansion, expand_private, expand_public, generate_keypair
from .point_codec import CandidatePair, Mode, decode_point, encode_point, encoded_length
from .randomness import ScriptedRandom, make_rng


def _int(text: str) -> int:
    """Decimal, 0x-hex, 2^k / 2**k, or a curve name (meaning its group order)."""
    text = text.strip()
    if text in CURVE_NAMES:
        return get_curve(text).n
    try:
        for op in ("**", "^"):
            if op in text:
                base, exp = text.split(op)
                return int(base, 0) ** int(exp, 0)
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _hex_int(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex integer: {text!r}") from None


def _hex_bytes(text: str) -> bytes:
    try:
        return bytes.fromhex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex string: {text!r}") from None


def _csv_list(choices):
    def parse(text: str) -> List[str]:
        items = [s.strip() for s in text.split(",") if s.strip()]
        bad = [s for s in items if s not in choices]
        if bad or not items:
            raise argparse.ArgumentTypeError(f"choose from {', '.join(choices)}")
        return items
    return parse


def _emit(args, record: dict, lines: List[str]) -> None:
    if args.json:
        print(json.dumps(record))
    else:
        print("\n".join(lines))


def _digest(args, curve: str) -> int:
    if args.digest is not None:
        return args.digest
    if args.message_hex is not None:
        return ecdsa.hash_to_int(args.message_hex, curve)
    return ecdsa.hash_to_int(args.message.encode(), curve)


def _point_hex(P) -> str:
    return str(P) if P is INFINITY else encode_point(P, Mode.UNCOMPRESSED).hex()


# -- subcommands -------------------------------------------------------------

def cmd_keygen(args) -> int:
    keys = generate_keypair(args.curve, make_rng(args.seed))
    record = {
        "curve": keys.curve,
        "private": scalar_to_hex(keys.private, keys.curve),
        "public": _point_hex(keys.public),
        "public_compressed": encode_point(keys.public, Mode.COMPRESSED).hex(),
    }
    _emit(args, record, [f"{k:18} {v}" for k, v in record.items()])
    return 0


def cmd_expand(args) -> int:
    keys = KeyPair.from_private(args.curve, args.private)
    ex = draw_expansion(args.curve, make_rng(args.seed), args.r_upper)
    e = expand_private(args.curve, keys.private, ex.r)
    E = expand_public(keys.public, ex.R)
    record = {
        "curve": args.curve,
        "r": scalar_to_hex(ex.r, args.curve),
        "R": _point_hex(ex.R),
        "e": scalar_to_hex(e, args.curve),
        "E": _point_hex(E),
        "consistent": E == base_mul(e, args.curve) if e else False,
    }
    _emit(args, record, [f"{k:10} {v}" for k, v in record.items()])
    return 0 if record["consistent"] else 1


def cmd_sign(args) -> int:
    m = _digest(args, args.curve)
    sig = ecdsa.sign(args.curve, m, args.private, make_rng(args.seed))
    record = {"curve": args.curve, "digest": scalar_to_hex(m, args.curve), "signature": sig.to_bytes(args.curve).hex()}
    _emit(args, record, [record["signature"]])
    return 0


def cmd_verify(args) -> int:
    public = decode_point(args.public, args.curve)
    if isinstance(public, CandidatePair):
        raise EcqvLabError("an x-only point cannot serve as a public key")
    sig = ecdsa.Signature.from_bytes(args.signature, args.curve)
    ok = ecdsa.verify(_digest(args, args.curve), sig, public, full_point=args.full_point)
    _emit(args, {"curve": args.curve, "valid": ok}, ["valid" if ok else "invalid"])
    return 0 if ok else 1


def cmd_point_encode(args) -> int:
    P = make_point(args.curve, args.x, args.y)
    data = encode_point(P, args.mode)
    _emit(args, {"curve": args.curve, "mode": args.mode, "length": len(data), "hex": data.hex()}, [data.hex()])
    return 0


def cmd_point_decode(args) -> int:
    result = decode_point(args.data, args.curve)
    points = list(result) if isinstance(result, CandidatePair) else [result]
    record = {"curve": args.curve, "candidates": [_point_hex(P) for P in points]}
    _emit(args, record, record["candidates"])
    return 0


def cmd_lengths(args) -> int:
    curve = get_curve(args.curve)
    q = ecqv.other_info_length(args.info_len)
    unc = encoded_length(curve, Mode.UNCOMPRESSED)
    comp = encoded_length(curve, Mode.COMPRESSED)
    explicit = ecqv.cert_length(curve, args.info_len, "explicit") - q
    implicit = ecqv.cert_length(curve, args.info_len, "implicit") - q
    record = {
        "curve": curve.name,
        "strength": curve.strength,
        "uncompressed_point": unc,
        "compressed_point": comp,
        "point_saving": unc - comp,
        "q": q,
        "explicit_cert": f"q + {explicit}",
        "implicit_cert": f"q + {implicit}",
        "cert_saving": explicit - implicit,
    }
    lines = [
        f"curve               {curve.name} (strength {curve.strength})",
        f"uncompressed point  {unc} bytes",
        f"compressed point    {comp} bytes   (saves {unc - comp})",
        f"explicit cert       q + {explicit} bytes",
        f"implicit cert       q + {implicit} bytes   (saves {explicit - implicit})",
        f"q for this layout   {q} bytes (12 + {args.info_len} info)",
    ]
    _emit(args, record, lines)
    return 0


def cmd_ecqv_demo(args) -> int:
    rng = make_rng(args.seed)
    curve = get_curve(args.curve)
    ca = ecqv.CertificateAuthority.generate(curve, rng)
    keys, req = ecqv.request_certificate(curve, args.info.encode(), rng)
    # record the CA's draws so the trace can show r
    ca_rng = ScriptedRandom([], fallback=rng)
    resp = ecqv.ca_issue(req, ca, ca_rng, args.r_upper)
    r = ca_rng.draws[-1]
    h = ecqv.cert_hash(resp.cert)
    z = ecqv.derive_private(resp.cert, resp.w, keys.private)
    Z = ecqv.derive_public(resp.cert, ca.public)
    zG = base_mul(z, curve)
    hx = lambda k: scalar_to_hex(k, curve)
    record = {
        "curve": curve.name,
        "ca_private_c": hx(ca.keys.private),
        "ca_public_C": _point_hex(ca.public),
        "device_private_p": hx(keys.private),
        "device_public_P": _point_hex(keys.public),
        "info_I": args.info,
        "r": hx(r),
        "reconstruction_E": _point_hex(resp.cert.reconstruction),
        "cert": resp.cert.to_bytes().hex(),
        "cert_hash_h": hx(h),
        "w": hx(resp.w),
        "z": hx(z),
        "Z": _point_hex(Z),
        "zG": _point_hex(zG),
        "consistent": Z == zG,
    }
    lines = [f"{k:18} {v}" for k, v in record.items() if k != "consistent"]
    cert = resp.cert
    lines += [
        "certificate fields:",
        f"  version          {cert.version}",
        f"  type             {cert.cert_type} (implicit)",
        f"  signer_id        {cert.signer_id.hex()}",
        f"  info             {cert.info.hex() or '-'} ({len(cert.info)} bytes)",
        f"  verify key (E)   {encode_point(cert.reconstruction, Mode.COMPRESSED).hex()}",
        f"verdict            {'consistent: zG == Z' if Z == zG else 'MISMATCH: zG != Z'}",
    ]
    _emit(args, record, lines)
    return 0 if Z == zG else 1


def cmd_crack_prob(args) -> int:
    params = crack.CrackParams(args.H, args.R, args.n, args.c)
    if args.method == "mc":
        est = crack.crack_probability_montecarlo(params, args.trials, make_rng(args.seed))
        record = {"H": params.H, "R": params.R, "n": params.n, "c": params.c,
                  "exact": None, "float": est.estimate, "stderr": est.stderr,
                  "trials": est.trials, "method": "mc"}
        line = f"Pr ~= {est.estimate:.6g} +/- {est.stderr:.2g} ({est.trials} trials) [mc]"
    else:
        fn = crack.crack_probability_exact if args.method == "exact" else crack.crack_probability_enum
        prob = fn(params)
        record = {"H": params.H, "R": params.R, "n": params.n, "c": params.c,
                  "exact": str(prob.fraction), "float": float(prob), "method": args.method}
        line = f"Pr = {prob.fraction} = {prob} ({float(prob):.6g}) [{args.method}]"
    _emit(args, record, [line])
    return 0


def cmd_crack_attack(args) -> int:
    rng = make_rng(args.seed)
    curve = get_curve(args.curve)
    ca = ecqv.CertificateAuthority.generate(curve, rng)
    _, req = ecqv.request_certificate(curve, b"attacker device", rng)
    resp = ecqv.ca_issue(req, ca, rng, args.r_upper)
    h = ecqv.cert_hash(resp.cert)
    record = {"curve": curve.name, "r_upper": args.r_upper, "budget": args.budget}
    try:
        found = crack.attack_recover_ca_key(curve, resp.w, h, ca.public, args.budget,
                                            allow_wrap=not args.no_wrap)
    except NotFound:
        record.update(recovered=False)
        _emit(args, record, [f"not found: no r in [1, {args.budget}] explains w"])
        return 1
    record.update(recovered=True, r=found.r, wrapped=found.wrapped,
                  c=scalar_to_hex(found.c, curve), matches_ca_key=found.c == ca.keys.private)
    _emit(args, record, [
        f"recovered CA key  {record['c']}",
        f"at r              {found.r} ({'with' if found.wrapped else 'without'} modular wrap)",
        f"matches CA key    {record['matches_ca_key']}",
    ])
    return 0 if record["matches_ca_key"] else 1


def cmd_bench(args) -> int:
    results = bench_mod.run_bench(args.ops, args.curves, args.iterations, args.warmup, make_rng(args.seed))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(bench_mod.to_csv(results))
    if args.json:
        for r in results:
            print(r.to_json())
    else:
        print(f"{'op':11} {'curve':7} {'iters':>5} {'mean_ms':>9} {'median_ms':>9} {'stddev_ms':>9}")
        for r in results:
            print(f"{r.op:11} {r.curve:7} {r.iterations:5d} {r.mean_ms:9.3f} {r.median_ms:9.3f} {r.stddev_ms:9.3f}")
        print(f"clock: time.perf_counter, resolution {results[0].clock_resolution_s:g} s" if results else "")
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for a reproducible run")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    curve_arg = argparse.ArgumentParser(add_help=False)
    curve_arg.add_argument("--curve", choices=CURVE_NAMES, default="P-256")

    message = argparse.ArgumentParser(add_help=False)
    group = message.add_mutually_exclusive_group(required=True)
    group.add_argument("--message", help="message text (SHA-256 digest is signed)")
    group.add_argument("--message-hex", type=_hex_bytes, help="message bytes as hex")
    group.add_argument("--digest", type=_hex_int, help="digest integer m as hex, used directly")

    parser = argparse.ArgumentParser(prog="ecqvlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", parents=[common, curve_arg], help="generate a key pair")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("expand", parents=[common, curve_arg], help="expand a key pair by e = p + r")
    p.add_argument("--private", type=_hex_int, required=True)
    p.add_argument("--r-upper", type=_int, default=None)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("sign", parents=[common, curve_arg, message], help="ECDSA-sign a message")
    p.add_argument("--private", type=_hex_int, required=True)
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("verify", parents=[common, curve_arg, message], help="verify an ECDSA signature")
    p.add_argument("--public", type=_hex_bytes, required=True, help="encoded public key (hex)")
    p.add_argument("--signature", type=_hex_bytes, required=True)
    p.add_argument("--full-point", action="store_true", help="also require the R y-parity to match")
    p.set_defaults(func=cmd_verify)

    point = sub.add_parser("point", help="point encoding").add_subparsers(dest="point_command", required=True)
    p = point.add_parser("encode", parents=[common, curve_arg])
    p.add_argument("--x", type=_hex_int, required=True)
    p.add_argument("--y", type=_hex_int, required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.COMPRESSED.value)
    p.set_defaults(func=cmd_point_encode)
    p = point.add_parser("decode", parents=[common, curve_arg])
    p.add_argument("data", type=_hex_bytes)
    p.set_defaults(func=cmd_point_decode)

    p = sub.add_parser("lengths", parents=[common, curve_arg], help="point and certificate sizes")
    p.add_argument("--info-len", type=int, default=0)
    p.set_defaults(func=cmd_lengths)

    ecqv_sub = sub.add_parser("ecqv", help="implicit certificates").add_subparsers(dest="ecqv_command", required=True)
    p = ecqv_sub.add_parser("demo", parents=[common], help="trace one full issuance")
    p.add_argument("--curve", choices=CURVE_NAMES, default="TOY-97")
    p.add_argument("--info", default="OBU-0001")
    p.add_argument("--r-upper", type=_int, default=None)
    p.set_defaults(func=cmd_ecqv_demo)

    crack_sub = sub.add_parser("crack", help="CA key recovery").add_subparsers(dest="crack_command", required=True)
    p = crack_sub.add_parser("prob", parents=[common], help="probability that h*r + c < n")
    p.add_argument("--H", type=_int, required=True)
    p.add_argument("--R", type=_int, required=True)
    p.add_argument("--n", type=_int, required=True, help="group order (integer or curve name)")
    p.add_argument("--c", type=_int, required=True)
    p.add_argument("--method", choices=("exact", "enum", "mc"), default="exact")
    p.add_argument("--trials", type=int, default=100_000)
    p.set_defaults(func=cmd_crack_prob)
    p = crack_sub.add_parser("attack", parents=[common, curve_arg], help="issue weakly, then recover c")
    p.add_argument("--r-upper", type=_int, default=None, help="cap on r (default: full range)")
    p.add_argument("--budget", type=_int, required=True)
    p.add_argument("--no-wrap", action="store_true", help="only accept w - h*r = c without modular reduction")
    p.set_defaults(func=cmd_crack_attack)

    p = sub.add_parser("bench", parents=[common], help="time the core operations")
    p.add_argument("--ops", type=_csv_list(bench_mod.OPERATIONS), default=list(bench_mod.OPERATIONS))
    p.add_argument("--curves", type=_csv_list(CURVE_NAMES), default=list(NIST_CURVES))
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--warmup", type=int, default=10)
    p.add_argument("--csv", default=None, help="also write results to this CSV file")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EcqvLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

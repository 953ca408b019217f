"""Elliptic-curve toolkit for V2X credential experiments.

Affine short-Weierstrass arithmetic over the NIST P-curves and two toy
curves, ECDSA, compressed point encoding, ECQV implicit certificates, and an
analysis of when an ECQV issuance leaks the CA private key.
"""

from .ec_core import (
    CURVE_NAMES,
    INFINITY,
    NIST_CURVES,
    TOY_CURVES,
    Curve,
    Point,
    base_mul,
    get_curve,
    is_on_curve,
    mod_inverse,
    mod_sqrt,
    point_add,
    point_negate,
    scalar_mul,
)
from .errors import EcqvLabError

__version__ = "0.1.0"

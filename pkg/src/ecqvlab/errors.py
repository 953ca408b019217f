"""Exception hierarchy shared by every ecqvlab module."""


class EcqvLabError(Exception):
    """Base class for all errors raised by this package."""


class UnknownCurve(EcqvLabError, KeyError):
    pass


class CurveMismatch(EcqvLabError, ValueError):
    pass


class NonInvertible(EcqvLabError, ArithmeticError):
    pass


class ZeroModulus(EcqvLabError, ArithmeticError):
    pass


class ScalarOutOfRange(EcqvLabError, ValueError):
    pass


class NotOnCurve(EcqvLabError, ValueError):
    pass


class NonResidue(EcqvLabError, ValueError):
    """The curve equation has no solution for the given x-coordinate."""


class LengthMismatch(EcqvLabError, ValueError):
    pass


class InfinityNotEncodable(EcqvLabError, ValueError):
    pass


class RandomnessExhausted(EcqvLabError, RuntimeError):
    """Too many degenerate draws in a row; the randomness source is suspect."""


class DegenerateNonce(EcqvLabError, ValueError):
    pass


class MalformedSignature(EcqvLabError, ValueError):
    """Signature components are out of range (distinct from a clean reject)."""


class DegenerateE(EcqvLabError, RuntimeError):
    """The reconstruction value came out as the point at infinity."""


class InfoTooLong(EcqvLabError, ValueError):
    pass


class TooLarge(EcqvLabError, ValueError):
    """The requested enumeration exceeds the configured work budget."""


class NotFound(EcqvLabError, LookupError):
    pass


class UnsignableDigest(EcqvLabError, ValueError):
    """No nonce can work: the key and digest share a factor with a composite group order."""

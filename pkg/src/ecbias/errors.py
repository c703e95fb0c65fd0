"""Exceptions shared by every module, with the CLI exit code attached.

Exit-code convention: 2 = parse error, 3 = unsupported or out-of-domain
input, 4 = internal consistency failure (a successful parse whose numbers
cannot happen unless a computation is wrong).
"""


class EcbiasError(Exception):
    """Base class; ``exit_code`` drives the command-line wrapper."""

    exit_code = 3


class ParseError(EcbiasError):
    exit_code = 2


class NotPrime(EcbiasError):
    pass


class SmallCharacteristic(EcbiasError):
    pass


class ReducibleModulus(EcbiasError):
    pass


class ZeroPolynomial(EcbiasError):
    pass


class SingularCurve(EcbiasError):
    pass


class IsotrivialOrConstant(EcbiasError):
    pass


class SingularReduction(EcbiasError):
    pass


class DepthLimitExceeded(EcbiasError):
    pass


class LimitTooLarge(EcbiasError):
    pass


class NotCoprime(EcbiasError):
    pass


class NegativeExponent(EcbiasError):
    pass


class TruncationTooSmall(EcbiasError):
    pass


class DegenerateGrid(EcbiasError):
    pass


class HasseViolation(EcbiasError):
    exit_code = 4


class FunctionalEquationViolation(EcbiasError):
    exit_code = 4


class DeltaCrossCheckFailed(EcbiasError):
    exit_code = 4


class OrderMismatch(EcbiasError):
    exit_code = 4


class ZeroLocalFactor(EcbiasError):
    exit_code = 4


class PointCountAmbiguous(EcbiasError):
    exit_code = 4

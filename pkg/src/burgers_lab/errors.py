"""Exception hierarchy.  Every error carries the CLI exit code it maps to."""


class BurgersLabError(Exception):
    exit_code = 3


class ConfigError(BurgersLabError):
    exit_code = 2


class VerificationFailure(BurgersLabError):
    exit_code = 1


class NumericError(BurgersLabError):
    exit_code = 3


# fields
class StencilHitsSingularity(NumericError):
    pass


class StepTooSmall(NumericError):
    pass


# algebra / group
class DegreeOverflow(NumericError):
    pass


class ParameterOutOfDomain(ConfigError):
    pass


class DenominatorVanishes(NumericError):
    pass


# heat kit
class DegreeTooLarge(ConfigError):
    pass


class SingularAt(NumericError):
    pass


# special functions
class NearPole(NumericError):
    pass


class PoleInRange(NumericError):
    pass


class SingularPath(NumericError):
    pass


class ParameterPole(ConfigError):
    pass


class NoConvergence(NumericError):
    pass


class JacobianSingular(NumericError):
    pass


# catalog / reduce / verify / evolve
class ZeroDenominator(NumericError):
    pass


class InvalidCase(ConfigError):
    pass


class CaseBoundary(ConfigError):
    pass


class SingularTime(NumericError):
    pass


class SingularPoint(NumericError):
    pass


class QuadratureFailure(NumericError):
    pass


class NotACommonSolution(VerificationFailure):
    pass


class UnstableStep(NumericError):
    pass

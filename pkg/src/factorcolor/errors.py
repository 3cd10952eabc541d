"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI puts in
its reports.
"""


class FactorColorError(Exception):
    code = "error"


class InvalidArgument(FactorColorError, ValueError):
    code = "invalid-argument"


class InvalidRule(FactorColorError, ValueError):
    code = "invalid-rule"


class WindowTooSmall(FactorColorError):
    code = "window-too-small"


class NotAFactor(FactorColorError, KeyError):
    code = "not-a-factor"

    def __str__(self):
        return Exception.__str__(self)


class NotSturmianWindow(FactorColorError):
    code = "not-sturmian-window"


class NotApplicable(FactorColorError):
    code = "not-applicable"


class PrecisionError(FactorColorError):
    code = "precision-error"


class ProbeError(FactorColorError):
    """A classification needed data beyond the analysed window."""

    code = "advisory-probe"


class DesubstitutionError(FactorColorError, ValueError):
    code = "desubstitution-error"

    def __init__(self, message, position):
        super().__init__(message)
        self.position = position


class SpecParseError(FactorColorError, ValueError):
    code = "spec-parse-error"

    def __init__(self, message, spec, position):
        super().__init__(f"{message} at position {position} in {spec!r}")
        self.spec = spec
        self.position = position

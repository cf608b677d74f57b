class AnalysisError(Exception):
    """Base class for every numerical or configuration failure of the toolkit."""


class DomainError(AnalysisError, ValueError):
    """An argument lies outside the region where the operation is defined."""


class ConfigurationError(AnalysisError):
    pass


class UnsupportedRuleError(AnalysisError):
    pass


class ZeroOnContourError(AnalysisError):
    def __init__(self, radius, min_modulus, max_modulus):
        self.radius = radius
        self.min_modulus = min_modulus
        self.max_modulus = max_modulus
        super().__init__(
            f"Function (nearly) vanishes on the circle of radius {radius:.6g}: "
            f"min modulus {min_modulus:.3e} against max {max_modulus:.3e}",
        )


class NonConvergenceError(AnalysisError):
    pass


class TailDominationError(AnalysisError):
    pass


class CentralParameterError(AnalysisError):
    pass


class UnstableError(AnalysisError):
    def __init__(self, message, trace):
        self.trace = trace
        super().__init__(message)


class NoFiniteNError(AnalysisError):
    def __init__(self, message, trace):
        self.trace = trace
        super().__init__(message)


class RouteMismatchError(AnalysisError):
    def __init__(self, ineq, growth):
        self.ineq = ineq
        self.growth = growth
        super().__init__(f"Inequality route gives {ineq}, growth route gives {growth}")


class RootClusterError(AnalysisError):
    pass


class CertificateNotFoundError(AnalysisError):
    pass

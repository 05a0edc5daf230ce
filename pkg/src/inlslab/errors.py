"""Exception types raised by the inlslab package."""


class InlslabError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(InlslabError, ValueError):
    """A parameter or configuration value violates its documented constraints."""

    def __init__(self, key, reason):
        self.key = key
        self.reason = reason
        super().__init__(f"{key}: {reason}")


class ParseError(InlslabError, ValueError):
    """A config file line could not be parsed (bad syntax or unknown key)."""

    def __init__(self, line_no, reason):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class SingularQuadrature(InlslabError):
    """A quadrature sample sits exactly on the |x|^-b singularity."""


class AliasingError(InlslabError):
    """A rescale would push spectral content past the target grid's Nyquist limit."""


class ZeroDenominator(InlslabError):
    """A functional with I(u) in the denominator was evaluated at I(u) = 0."""


class DegenerateExponent(InlslabError):
    """The sharp-constant formula degenerates (2*sigma + 2 equals N*sigma + b)."""


class StepUnderflow(InlslabError):
    """The adaptive ODE step collapsed below the step floor."""


class NonFinite(InlslabError):
    """A computed state contains NaN or infinity."""


class BracketFailure(InlslabError):
    """No undershoot/overshoot sign change found in the shooting bracket."""


class NoConvergence(InlslabError):
    """Bisection exhausted its iteration budget before reaching tolerance."""


class DomainTooSmall(InlslabError):
    """The Cartesian domain cannot hold the field at the required decay level."""


class NotSupercritical(InlslabError):
    """An operation requiring mass-supercritical parameters got subcritical ones."""


class DegenerateBarrier(InlslabError):
    """The barrier coefficient is non-positive, so the barrier curve degenerates."""


class HypothesisViolated(InlslabError):
    """The positive-energy trapping bound was requested outside its hypothesis."""


class OutOfInterval(InlslabError):
    """An evaluation point lies outside the interval where the bound is asserted."""


class AliasDetected(InlslabError):
    """Spectral tail mass exceeded the under-resolution guard during evolution."""

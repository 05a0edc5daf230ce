"""Model parameters for i u_t + Lap(u) + |x|^-b |u|^(2 sigma) u = 0 and derived exponents."""

import math
from dataclasses import dataclass, field

from .errors import ValidationError

# Relative slack used when deciding whether sigma sits exactly on the
# mass-critical line sigma = (2 - b) / N.
CRITICAL_RTOL = 1e-12


def _gamma_half_integer(two_z: int) -> float:
    """Gamma(two_z / 2) for integer two_z >= 1, by the recurrence Gamma(z+1) = z Gamma(z)."""
    if two_z < 1:
        raise ValueError("argument must be a positive half-integer")
    if two_z == 1:
        return math.sqrt(math.pi)
    if two_z == 2:
        return 1.0
    z = (two_z - 2) / 2.0
    return z * _gamma_half_integer(two_z - 2)


def sphere_surface(ndim: int) -> float:
    """Surface measure of the unit sphere in `ndim` dimensions: 2 pi^(N/2) / Gamma(N/2)."""
    return 2.0 * math.pi ** (ndim / 2.0) / _gamma_half_integer(ndim)


@dataclass(frozen=True)
class ModelParams:
    """Dimension N, nonlinearity power sigma and inhomogeneity exponent b.

    Admissible ranges: N >= 1 integer, sigma > 0, 0 <= b < min(2, N) and
    sigma < (2 - b)/(N - 2) when N >= 3.  b = 0 is the classical-NLS oracle
    mode (closed-form solitons exist there).
    """

    ndim: int
    sigma: float
    b: float
    critical_index: float = field(init=False)
    supercritical: bool = field(init=False)

    def __post_init__(self):
        if not isinstance(self.ndim, int) or self.ndim < 1:
            raise ValidationError("N", "must be an integer >= 1")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValidationError("sigma", "must be a finite positive real")
        if not (0.0 <= self.b < min(2.0, float(self.ndim))):
            raise ValidationError("b", f"must satisfy 0 <= b < min(2, N) = {min(2, self.ndim)}")
        if self.ndim >= 3 and self.sigma >= (2.0 - self.b) / (self.ndim - 2):
            raise ValidationError("sigma", "must be H^1-subcritical: sigma < (2 - b)/(N - 2)")
        s = self.ndim / 2.0 - (2.0 - self.b) / (2.0 * self.sigma)
        object.__setattr__(self, "critical_index", s)
        object.__setattr__(self, "supercritical", s > 0.0 and not self.is_mass_critical)

    @property
    def is_mass_critical(self) -> bool:
        """True when sigma equals (2 - b)/N to within roundoff."""
        crit = (2.0 - self.b) / self.ndim
        return abs(self.sigma - crit) <= CRITICAL_RTOL * crit

    @property
    def grad_exponent(self) -> float:
        """Gradient-norm exponent N*sigma + b in the Gagliardo-Nirenberg product."""
        return self.ndim * self.sigma + self.b

    @property
    def mass_exponent(self) -> float:
        """Mass-norm exponent 2*sigma + 2 - (N*sigma + b) in the G-N product."""
        return 2.0 * self.sigma + 2.0 - self.grad_exponent

    @property
    def sigma_critical(self) -> float:
        """The mass-critical power (2 - b)/N."""
        return (2.0 - self.b) / self.ndim

    @property
    def sigma_max(self) -> float:
        """Upper end of the admissible sigma window (inf for N = 1, 2)."""
        if self.ndim <= 2:
            return math.inf
        return (2.0 - self.b) / (self.ndim - 2)


def critical_index(params: ModelParams) -> float:
    """Scaling-critical Sobolev index N/2 - (2 - b)/(2 sigma)."""
    return params.critical_index

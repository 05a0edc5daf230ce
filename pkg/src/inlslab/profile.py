"""Radial profiles Q(r) and quadrature of the associated norms."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from .errors import SingularQuadrature, ValidationError
from .params import ModelParams, sphere_surface


@dataclass(frozen=True)
class RadialProfile:
    """Samples q_j = Q(r_j) on strictly increasing abscissae r_j > 0.

    `alpha` is the shooting value Q(0); `qp` optionally stores Q'(r_j) from the
    integrator; `residual` is the convergence certificate (max Pohozaev
    relative residual) and is None for partial, non-converged profiles.
    """

    params: ModelParams
    r: np.ndarray
    q: np.ndarray
    alpha: float
    residual: Optional[float] = None
    qp: Optional[np.ndarray] = None

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        q = np.asarray(self.q, dtype=float)
        if r.ndim != 1 or r.shape != q.shape or r.size < 4:
            raise ValidationError("profile", "r and q must be matching 1-D arrays with >= 4 samples")
        if r[0] <= 0.0 or np.any(np.diff(r) <= 0.0):
            raise ValidationError("profile", "abscissae must be strictly increasing and start above 0")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "q", q)
        if self.qp is not None:
            qp = np.asarray(self.qp, dtype=float)
            if qp.shape != r.shape:
                raise ValidationError("profile", "qp must match r in shape")
            object.__setattr__(self, "qp", qp)

    def check_ground_state(self, tail_factor: float = 1e-8):
        """Assert the converged ground-state invariants: positive, non-increasing, decayed tail."""
        if np.any(self.q <= 0.0):
            raise ValidationError("profile", "converged profile must be strictly positive")
        if np.any(np.diff(self.q) > 1e-12 * self.alpha):
            raise ValidationError("profile", "converged profile must be non-increasing")
        if self.q[-1] >= tail_factor * self.alpha:
            raise ValidationError("profile", f"tail has not decayed below {tail_factor} * alpha")

    def derivative(self) -> np.ndarray:
        """Q'(r): the integrator samples when available, else centered differences."""
        if self.qp is not None:
            return self.qp
        return np.gradient(self.q, self.r)


def radial_mass(profile: RadialProfile) -> float:
    """omega_{N-1} * integral of q^2 r^(N-1) dr, closed at the left end by the
    leading [0, r_0] contribution q_0^2 r_0^N / N."""
    n = profile.params.ndim
    head = profile.q[0] ** 2 * profile.r[0] ** n / n
    return sphere_surface(n) * (head + float(trapezoid(profile.q**2 * profile.r ** (n - 1), profile.r)))


def radial_grad_sq(profile: RadialProfile) -> float:
    n = profile.params.ndim
    qp = profile.derivative()
    head = qp[0] ** 2 * profile.r[0] ** n / n
    return sphere_surface(n) * (head + float(trapezoid(qp**2 * profile.r ** (n - 1), profile.r)))


def radial_potential(profile: RadialProfile, params: ModelParams = None) -> float:
    """omega_{N-1} * integral of |q|^(2 sigma + 2) r^(N-1-b) dr."""
    p = params if params is not None else profile.params
    if np.any(profile.r == 0.0):
        raise SingularQuadrature("radial abscissa at r = 0")
    n = p.ndim
    integrand = np.abs(profile.q) ** (2.0 * p.sigma + 2.0) * profile.r ** (n - 1 - p.b)
    head = np.abs(profile.q[0]) ** (2.0 * p.sigma + 2.0) * profile.r[0] ** (n - p.b) / (n - p.b)
    return sphere_surface(n) * (head + float(trapezoid(integrand, profile.r)))

"""Numerical laboratory for the inhomogeneous nonlinear Schrodinger equation.

Computes and certifies ground states of Delta Q - Q + |x|^-b |Q|^(2 sigma) Q = 0,
evaluates the sharp Gagliardo-Nirenberg constant, classifies initial data into
global-existence and blow-up regimes, and evolves the PDE with a split-step
spectral integrator under conservation and virial diagnostics.
"""

__version__ = "0.1.0"

from .params import ModelParams, critical_index
from .grid import FieldState, GridSpec
from .profile import RadialProfile

__all__ = [
    "ModelParams",
    "critical_index",
    "FieldState",
    "GridSpec",
    "RadialProfile",
    "__version__",
]

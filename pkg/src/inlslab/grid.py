"""Cell-centered Cartesian grids, complex field states, and spectral helpers.

Grids cover the cube [-L, L)^N with M samples per axis placed at cell centers
x_k = -L + (k + 1/2) h, h = 2L/M, so no sample ever sits on the |x|^-b
singularity at the origin.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
from scipy.special import gamma as _gamma_fn
from scipy.special import zeta as _zeta_fn

from .errors import NonFinite, ValidationError
from .params import sphere_surface


@dataclass(frozen=True)
class GridSpec:
    """Cell-centered cube grid: `points` samples per axis on [-half_width, half_width)^ndim."""

    ndim: int
    half_width: float
    points: int

    def __post_init__(self):
        if not isinstance(self.ndim, int) or self.ndim < 1:
            raise ValidationError("N", "grid dimension must be an integer >= 1")
        if not (self.half_width > 0.0 and math.isfinite(self.half_width)):
            raise ValidationError("L", "half-width must be finite and positive")
        if not isinstance(self.points, int) or self.points < 8 or self.points % 2:
            raise ValidationError("M", "points per axis must be an even integer >= 8")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.ndim

    @property
    def shape(self) -> tuple:
        return (self.points,) * self.ndim

    def axis(self) -> np.ndarray:
        """1-D cell-center coordinates, identical along every axis."""
        h = self.spacing
        return -self.half_width + (np.arange(self.points) + 0.5) * h

    def coords(self) -> list:
        """Per-axis coordinate arrays broadcastable to the full grid shape."""
        ax = self.axis()
        out = []
        for d in range(self.ndim):
            shape = [1] * self.ndim
            shape[d] = self.points
            out.append(ax.reshape(shape))
        return out

    def radius_sq(self) -> np.ndarray:
        r2 = np.zeros(self.shape)
        for c in self.coords():
            r2 = r2 + c**2
        return r2

    def radius(self) -> np.ndarray:
        return np.sqrt(self.radius_sq())

    def wavenumbers(self) -> list:
        """Per-axis angular frequencies (FFT layout), broadcastable to the grid shape."""
        k1 = 2.0 * math.pi * np.fft.fftfreq(self.points, d=self.spacing)
        out = []
        for d in range(self.ndim):
            shape = [1] * self.ndim
            shape[d] = self.points
            out.append(k1.reshape(shape))
        return out

    def ksq(self) -> np.ndarray:
        k2 = np.zeros(self.shape)
        for k in self.wavenumbers():
            k2 = k2 + k**2
        return k2

    def nyquist(self) -> float:
        return math.pi / self.spacing


@dataclass(frozen=True)
class FieldState:
    """Complex field sampled on a grid at time t."""

    grid: GridSpec
    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            raise ValidationError("values", f"shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v.view(np.float64))):
            raise NonFinite("field contains non-finite values")
        object.__setattr__(self, "values", v)


def zero_state(grid: GridSpec, t: float = 0.0) -> FieldState:
    return FieldState(grid, np.zeros(grid.shape, dtype=np.complex128), t)


# ----------------------------------------------------------------------------
# Spectral functionals
# ----------------------------------------------------------------------------

def fftn(values: np.ndarray) -> np.ndarray:
    return scipy.fft.fftn(values)


def ifftn(values: np.ndarray) -> np.ndarray:
    return scipy.fft.ifftn(values)


def l2_norm_sq(state: FieldState) -> float:
    return float(np.sum(np.abs(state.values) ** 2)) * state.grid.cell_volume


def grad_norm_sq(state: FieldState) -> float:
    """Squared L2 norm of the gradient via Parseval on the FFT coefficients."""
    hat = fftn(state.values)
    k2 = state.grid.ksq()
    npts = state.values.size
    return float(np.sum(k2 * np.abs(hat) ** 2)) * state.grid.cell_volume / npts


def _zeta_negative(x: float) -> float:
    """zeta(-x) for x > 0 through the functional equation (scipy's zeta needs arg > 1)."""
    z = 1.0 + x
    return 2.0 * (2.0 * math.pi) ** (-z) * math.cos(math.pi * z / 2.0) * _gamma_fn(z) * _zeta_fn(z)


def sobolev_norm_sq(state: FieldState, s: float) -> float:
    """Squared homogeneous Sobolev norm with Fourier symbol |xi|^s, s >= 0.

    The zero mode carries weight |0|^(2s): 0 for s > 0 (it contributes nothing
    to a homogeneous norm) and 1 for s = 0 (plain L2).  In one dimension the
    |xi|^(2s) cusp at the origin makes the plain spectral sum only
    O(dxi^(1+2s)) accurate, so the two leading singular Euler-Maclaurin terms
    (coefficients zeta(-2s), zeta(-2s-2), which vanish at integer s) are
    subtracted; the result is then accurate to O(dxi^(5+2s)).
    """
    if s < 0:
        raise ValidationError("s", "only non-negative Sobolev exponents are supported")
    hat = fftn(state.values)
    weight = state.grid.ksq() ** s
    npts = state.values.size
    out = float(np.sum(weight * np.abs(hat) ** 2)) * state.grid.cell_volume / npts
    if s > 0.0 and state.grid.ndim == 1:
        power = np.abs(hat) ** 2 * state.grid.spacing**2
        dk = 2.0 * math.pi / (state.grid.points * state.grid.spacing)
        curv = (power[1] + power[-1] - 2.0 * power[0]) / dk**2
        corr = 2.0 * _zeta_negative(2.0 * s) * dk ** (1.0 + 2.0 * s) * power[0]
        corr += _zeta_negative(2.0 * s + 2.0) * dk ** (3.0 + 2.0 * s) * curv
        out -= corr / (2.0 * math.pi)
    return out


def spectral_gradient(state: FieldState) -> list:
    """Per-axis spatial derivatives computed by Fourier multiplication."""
    hat = fftn(state.values)
    return [ifftn(1j * k * hat) for k in state.grid.wavenumbers()]


def spectral_tail_fraction(values: np.ndarray) -> float:
    """Fraction of spectral mass carried by modes beyond 2/3 of Nyquist on any axis."""
    hat = np.abs(fftn(values)) ** 2
    total = float(hat.sum())
    if total == 0.0:
        return 0.0
    m = values.shape[0]
    freq_idx = np.abs(np.fft.fftfreq(m) * m)  # 0 .. m/2
    tail_1d = freq_idx >= (2.0 / 3.0) * (m // 2)
    mask = np.zeros(values.shape, dtype=bool)
    for d in range(values.ndim):
        shape = [1] * values.ndim
        shape[d] = m
        mask |= tail_1d.reshape(shape)
    return float(hat[mask].sum()) / total


def boundary_max(values: np.ndarray) -> float:
    """Largest |u| over the outermost cell layer of the grid."""
    out = 0.0
    for d in range(values.ndim):
        sl0 = [slice(None)] * values.ndim
        sl0[d] = 0
        sl1 = [slice(None)] * values.ndim
        sl1[d] = -1
        out = max(out, float(np.abs(values[tuple(sl0)]).max()), float(np.abs(values[tuple(sl1)]).max()))
    return out


# ----------------------------------------------------------------------------
# Singular quadrature weights for |x|^-b
# ----------------------------------------------------------------------------
#
# Plain midpoint sampling of |x|^-b loses O(h^(N-b)) accuracy in the cells next
# to the origin.  The weights below replace the sampled value by the exact cell
# average there: closed form per cell in 1-D, and a divergence-theorem face
# integral (smooth integrands, fixed Gauss rule) for the 2^N cells touching the
# origin when N >= 2.

_WEIGHT_CACHE: dict = {}

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(48)


def _cell_averages_1d(grid: GridSpec, b: float) -> np.ndarray:
    """Exact cell averages of |x|^-b on every 1-D cell (no cell contains 0 interiorly)."""
    h = grid.spacing
    edges = -grid.half_width + np.arange(grid.points + 1) * h
    lo = np.abs(edges[:-1])
    hi = np.abs(edges[1:])
    a = np.minimum(lo, hi)
    c = np.maximum(lo, hi)
    # antiderivative of x^-b on [a, c], a >= 0; b < 1 in one dimension
    integral = (c ** (1.0 - b) - a ** (1.0 - b)) / (1.0 - b)
    return integral / h


def _origin_cell_average(ndim: int, h: float, b: float) -> float:
    """Average of |x|^-b over the cell [0, h]^ndim via the identity
    div(x |x|^-b) = (N - b) |x|^-b; only the outer faces x_d = h contribute."""
    t = 0.5 * (_GAUSS_NODES + 1.0) * h  # nodes on [0, h]
    w = 0.5 * h * _GAUSS_WEIGHTS
    if ndim == 2:
        face = np.sum(w * (h**2 + t**2) ** (-b / 2.0))
    elif ndim == 3:
        yy, zz = np.meshgrid(t, t, indexing="ij")
        ww = np.outer(w, w)
        face = np.sum(ww * (h**2 + yy**2 + zz**2) ** (-b / 2.0))
    else:
        raise ValidationError("N", "origin cell average implemented for N in {1, 2, 3}")
    integral = ndim * h * face / (ndim - b)
    return integral / h**ndim


def singular_weight(grid: GridSpec, b: float) -> np.ndarray:
    """Quadrature/evolution weights for |x|^-b on the grid.

    Equal to |x_k|^-b away from the origin; the cells adjacent to the origin
    (all cells in 1-D) carry the exact cell average instead.
    """
    key = (grid.ndim, grid.half_width, grid.points, b)
    cached = _WEIGHT_CACHE.get(key)
    if cached is not None:
        return cached
    if b == 0.0:
        w = np.ones(grid.shape)
    elif grid.ndim == 1:
        w = _cell_averages_1d(grid, b)
    else:
        r = grid.radius()
        if np.any(r == 0.0):
            raise NonFinite("grid sample at the origin")
        w = r ** (-b)
        center = _origin_cell_average(grid.ndim, grid.spacing, b)
        half = grid.points // 2
        sl = tuple(slice(half - 1, half + 1) for _ in range(grid.ndim))
        w[sl] = center
    w.setflags(write=False)
    _WEIGHT_CACHE[key] = w
    return w


def radial_weight(ndim: int) -> float:
    """Sphere-surface factor for radial integrals, 2 pi^(N/2) / Gamma(N/2)."""
    return sphere_surface(ndim)

import numpy as np
import pytest

from inlslab.grid import FieldState, GridSpec


def gaussian_state(grid: GridSpec, amp=1.0, width=1.0, center=0.0, chirp=0.0, t=0.0) -> FieldState:
    """amp * exp(-|x - center|^2 / (2 width^2)) * exp(i chirp |x|^2) on the grid."""
    r2 = np.zeros(grid.shape)
    for c in grid.coords():
        r2 = r2 + (c - center) ** 2
    vals = amp * np.exp(-r2 / (2.0 * width**2)).astype(np.complex128)
    if chirp:
        r2c = grid.radius_sq()
        vals = vals * np.exp(1j * chirp * r2c)
    return FieldState(grid, vals, t)


@pytest.fixture
def grid_1d():
    return GridSpec(1, 20.0, 1024)

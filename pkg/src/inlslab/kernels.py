"""Hot numerical kernels: adaptive RK45 radial shooting and pointwise phase rotation.

Kernels are compiled with numba's @njit by default.  Setting the environment
variable INLSLAB_NO_NUMBA=1 (or numba being unavailable) selects the pure
Python/numpy fallback implementations of the same functions; results agree to
roundoff.  benchmarks/bench_kernels.py compares the two paths.
"""

import math
import os

import numpy as np

# status codes returned by the shooting kernel
CONVERGED = 0
OVERSHOOT = 1
UNDERSHOOT = 2
REACHED_RMAX = 3
STEP_UNDERFLOW = 4
NON_FINITE = 5
STORAGE_FULL = 6


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


def thread_count() -> int:
    """Worker cap from INLSLAB_THREADS (default 1)."""
    raw = os.environ.get("INLSLAB_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


USING_NUMBA = False
if not _env_flag("INLSLAB_NO_NUMBA"):
    try:
        from numba import njit as _njit

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass

if not USING_NUMBA:

    def _njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


def _rhs_py(r, q, qp, ndim, b, sigma):
    """Radial system Q'' + (N-1)/r Q' - Q + r^-b |Q|^(2 sigma) Q = 0 plus the
    accumulated norm integrands (mass, gradient, potential)."""
    rb = r ** (-b) if b != 0.0 else 1.0
    if ndim == 1:
        rn = 1.0
    elif ndim == 2:
        rn = r
    else:
        rn = r ** (ndim - 1)
    aq2 = q * q
    s = aq2**sigma  # |q|^(2 sigma)
    f_qp = q - rb * s * q - (ndim - 1.0) * qp / r
    return (qp, f_qp, aq2 * rn, qp * qp * rn, s * aq2 * rn * rb)


def _shoot_loop_py(ndim, b, sigma, r0, q0, qp0, m0, g0, p0,
                   r_max, h_max, rtol, tail_q, tail_qp, deep_tail,
                   out_r, out_q, out_qp, store):
    """Dormand-Prince 5(4) integration of the radial shooting system.

    Returns (status, n_stored, r_end, q_end, qp_end, crossing_r, l2, grad, pot).
    Event classification happens at accepted step ends: q crossing zero gives
    OVERSHOOT (with the crossing radius interpolated), q' > 0 while q > 0 gives
    UNDERSHOOT, and decay of (q, q') below the tail thresholds gives CONVERGED.
    Either event occurring below `deep_tail` is also CONVERGED: at that level
    the trajectory has tracked the decaying solution to within roundoff of the
    shooting value and the turn/crossing is double-precision noise.
    """
    r = r0
    q = q0
    qp = qp0
    yl = m0
    yg = g0
    yp = p0

    n = 0
    if store:
        out_r[0] = r
        out_q[0] = q
        out_qp[0] = qp
        n = 1

    atol = 1e-12 * abs(q0) + 1e-300
    atol_quad = 1e-14

    h = min(h_max, 0.5 * r0)
    k1 = _rhs(r, q, qp, ndim, b, sigma)
    crossing = -1.0
    status = REACHED_RMAX

    while True:
        if r >= r_max:
            status = REACHED_RMAX
            break
        if h > r_max - r:
            h = r_max - r
        if h < 1e-12 * r:
            status = STEP_UNDERFLOW
            break

        # Dormand-Prince stages (FSAL: k1 is reused from the last accepted step)
        r2 = r + 0.2 * h
        q2 = q + h * 0.2 * k1[0]
        qp2 = qp + h * 0.2 * k1[1]
        k2 = _rhs(r2, q2, qp2, ndim, b, sigma)

        r3 = r + 0.3 * h
        q3 = q + h * (3.0 / 40.0 * k1[0] + 9.0 / 40.0 * k2[0])
        qp3 = qp + h * (3.0 / 40.0 * k1[1] + 9.0 / 40.0 * k2[1])
        k3 = _rhs(r3, q3, qp3, ndim, b, sigma)

        r4 = r + 0.8 * h
        q4 = q + h * (44.0 / 45.0 * k1[0] - 56.0 / 15.0 * k2[0] + 32.0 / 9.0 * k3[0])
        qp4 = qp + h * (44.0 / 45.0 * k1[1] - 56.0 / 15.0 * k2[1] + 32.0 / 9.0 * k3[1])
        k4 = _rhs(r4, q4, qp4, ndim, b, sigma)

        r5 = r + 8.0 / 9.0 * h
        q5 = q + h * (19372.0 / 6561.0 * k1[0] - 25360.0 / 2187.0 * k2[0]
                      + 64448.0 / 6561.0 * k3[0] - 212.0 / 729.0 * k4[0])
        qp5 = qp + h * (19372.0 / 6561.0 * k1[1] - 25360.0 / 2187.0 * k2[1]
                        + 64448.0 / 6561.0 * k3[1] - 212.0 / 729.0 * k4[1])
        k5 = _rhs(r5, q5, qp5, ndim, b, sigma)

        r6 = r + h
        q6 = q + h * (9017.0 / 3168.0 * k1[0] - 355.0 / 33.0 * k2[0] + 46732.0 / 5247.0 * k3[0]
                      + 49.0 / 176.0 * k4[0] - 5103.0 / 18656.0 * k5[0])
        qp6 = qp + h * (9017.0 / 3168.0 * k1[1] - 355.0 / 33.0 * k2[1] + 46732.0 / 5247.0 * k3[1]
                        + 49.0 / 176.0 * k4[1] - 5103.0 / 18656.0 * k5[1])
        k6 = _rhs(r6, q6, qp6, ndim, b, sigma)

        # 5th order solution (also stage 7 location)
        qn = q + h * (35.0 / 384.0 * k1[0] + 500.0 / 1113.0 * k3[0] + 125.0 / 192.0 * k4[0]
                      - 2187.0 / 6784.0 * k5[0] + 11.0 / 84.0 * k6[0])
        qpn = qp + h * (35.0 / 384.0 * k1[1] + 500.0 / 1113.0 * k3[1] + 125.0 / 192.0 * k4[1]
                        - 2187.0 / 6784.0 * k5[1] + 11.0 / 84.0 * k6[1])
        yln = yl + h * (35.0 / 384.0 * k1[2] + 500.0 / 1113.0 * k3[2] + 125.0 / 192.0 * k4[2]
                        - 2187.0 / 6784.0 * k5[2] + 11.0 / 84.0 * k6[2])
        ygn = yg + h * (35.0 / 384.0 * k1[3] + 500.0 / 1113.0 * k3[3] + 125.0 / 192.0 * k4[3]
                        - 2187.0 / 6784.0 * k5[3] + 11.0 / 84.0 * k6[3])
        ypn = yp + h * (35.0 / 384.0 * k1[4] + 500.0 / 1113.0 * k3[4] + 125.0 / 192.0 * k4[4]
                        - 2187.0 / 6784.0 * k5[4] + 11.0 / 84.0 * k6[4])

        k7 = _rhs(r6, qn, qpn, ndim, b, sigma)

        # embedded 4th order error estimate
        e0 = h * (71.0 / 57600.0 * k1[0] - 71.0 / 16695.0 * k3[0] + 71.0 / 1920.0 * k4[0]
                  - 17253.0 / 339200.0 * k5[0] + 22.0 / 525.0 * k6[0] - 1.0 / 40.0 * k7[0])
        e1 = h * (71.0 / 57600.0 * k1[1] - 71.0 / 16695.0 * k3[1] + 71.0 / 1920.0 * k4[1]
                  - 17253.0 / 339200.0 * k5[1] + 22.0 / 525.0 * k6[1] - 1.0 / 40.0 * k7[1])
        e2 = h * (71.0 / 57600.0 * k1[2] - 71.0 / 16695.0 * k3[2] + 71.0 / 1920.0 * k4[2]
                  - 17253.0 / 339200.0 * k5[2] + 22.0 / 525.0 * k6[2] - 1.0 / 40.0 * k7[2])
        e3 = h * (71.0 / 57600.0 * k1[3] - 71.0 / 16695.0 * k3[3] + 71.0 / 1920.0 * k4[3]
                  - 17253.0 / 339200.0 * k5[3] + 22.0 / 525.0 * k6[3] - 1.0 / 40.0 * k7[3])
        e4 = h * (71.0 / 57600.0 * k1[4] - 71.0 / 16695.0 * k3[4] + 71.0 / 1920.0 * k4[4]
                  - 17253.0 / 339200.0 * k5[4] + 22.0 / 525.0 * k6[4] - 1.0 / 40.0 * k7[4])

        s0 = atol + rtol * max(abs(q), abs(qn))
        s1 = atol + rtol * max(abs(qp), abs(qpn))
        s2 = atol_quad + rtol * max(abs(yl), abs(yln))
        s3 = atol_quad + rtol * max(abs(yg), abs(ygn))
        s4 = atol_quad + rtol * max(abs(yp), abs(ypn))
        err = math.sqrt(((e0 / s0) ** 2 + (e1 / s1) ** 2 + (e2 / s2) ** 2
                         + (e3 / s3) ** 2 + (e4 / s4) ** 2) / 5.0)

        if not (math.isfinite(err) and math.isfinite(qn) and math.isfinite(qpn)):
            status = NON_FINITE
            break

        if err > 1.0:
            h = h * max(0.2, 0.9 * err ** (-0.2))
            continue

        r_prev = r
        q_prev = q
        r = r6
        q = qn
        qp = qpn
        yl = yln
        yg = ygn
        yp = ypn
        k1 = k7

        if store:
            if n >= out_r.shape[0]:
                status = STORAGE_FULL
                break
            out_r[n] = r
            out_q[n] = q
            out_qp[n] = qp
            n += 1

        if q <= 0.0:
            # slope guard: the decaying branch has |q'| ~ q, while a genuine
            # overshoot crosses zero with |q'| set by the perturbation scale
            if q_prev < deep_tail and abs(qp) < 10.0 * deep_tail:
                status = CONVERGED
                break
            status = OVERSHOOT
            crossing = r_prev + (r - r_prev) * q_prev / (q_prev - q)
            break
        if q < tail_q and abs(qp) < tail_qp:
            status = CONVERGED
            break
        if qp > 0.0:
            status = CONVERGED if q < deep_tail else UNDERSHOOT
            break

        h = min(h_max, h * min(5.0, 0.9 * (err + 1e-16) ** (-0.2)))

    return (status, n, r, q, qp, crossing, yl, yg, yp)


if USING_NUMBA:
    _rhs = _njit(cache=True, nogil=True, inline="always")(_rhs_py)
    shoot_loop = _njit(cache=True, nogil=True)(_shoot_loop_py)
else:
    _rhs = _rhs_py
    shoot_loop = _shoot_loop_py


def shoot_loop_python(*args):
    """Pure-Python shooting loop regardless of the numba flag (benchmark/cross-check)."""
    global _rhs
    saved = _rhs
    _rhs = _rhs_py
    try:
        return _shoot_loop_py(*args)
    finally:
        _rhs = saved


def _phase_loop_py(values, weight, coef, sigma):
    for k in range(values.shape[0]):
        z = values[k]
        a = z.real * z.real + z.imag * z.imag
        if a == 0.0:
            continue
        ph = coef * weight[k] * a**sigma
        c = math.cos(ph)
        s = math.sin(ph)
        values[k] = complex(z.real * c - z.imag * s, z.real * s + z.imag * c)


_phase_loop = _njit(cache=True, nogil=True)(_phase_loop_py) if USING_NUMBA else None


def phase_rotate(values: np.ndarray, weight: np.ndarray, coef: float, sigma: float) -> None:
    """In-place u <- u * exp(i coef w |u|^(2 sigma)), elementwise over the grid."""
    if USING_NUMBA:
        _phase_loop(values.ravel(), weight.ravel(), coef, sigma)
    else:
        phase_rotate_numpy(values, weight, coef, sigma)


def phase_rotate_numpy(values: np.ndarray, weight: np.ndarray, coef: float, sigma: float) -> None:
    """Vectorized numpy implementation of phase_rotate (fallback/benchmark path)."""
    a = values.real**2 + values.imag**2
    values *= np.exp((1j * coef) * weight * a**sigma)

"""Compiled scalar kernels shared by the payoff API and the integrator.

Everything here is nopython-jitted so that the adaptive stepper can run the
full time loop without touching the interpreter.  The public modules wrap
these kernels with validation and dataclasses; keep all game arithmetic in
one place so the CLI, the sweep workers and the test oracles see bitwise
identical numbers.
"""

from numba import njit

# Participant mass below which a focal player cannot find a co-player and the
# whole-population abstention convention (alpha, alpha, alpha) applies.
LONE_PARTICIPANT_EPS = 1e-15


@njit(cache=True)
def gap_kernel(m, r, z):
    """Defector-minus-cooperator expected payoff as a function of z.

    Uses the explicit geometric sum for (1 - z**m) / (1 - z) so the z = 1
    limit is exact.
    """
    geo = 1.0
    zpow = 1.0
    for _ in range(m - 1):
        zpow *= z
        geo += zpow
    # geo = 1 + z + ... + z**(m-1), zpow = z**(m-1)
    return 1.0 + (r - 1.0) * zpow - (r / m) * geo


@njit(cache=True)
def payoffs_kernel(m, r, alpha, beta, x, y, z):
    """Expected payoffs (cooperator, defector, non-participant).

    The guard uses |x + y| so that finite-difference probes slightly outside
    the positive cone still evaluate the smooth extension of the formulas.
    """
    participants = x + y
    if abs(participants) < LONE_PARTICIPANT_EPS:
        return alpha, alpha, alpha
    f = x / participants
    geo = 1.0
    zpow = 1.0
    for _ in range(m - 1):
        zpow *= z
        geo += zpow
    pi_d = alpha * zpow + r * f * (1.0 - geo / m) + beta * (geo - 1.0)
    gap = 1.0 + (r - 1.0) * zpow - (r / m) * geo
    return pi_d - gap, pi_d, alpha


@njit(cache=True)
def field_kernel(m, r, alpha, beta, mu, x, y, z):
    """Replicator-mutator rates (dx/dt, dy/dt, dz/dt)."""
    pi_c, pi_d, pi_n = payoffs_kernel(m, r, alpha, beta, x, y, z)
    mean = x * pi_c + y * pi_d + z * pi_n
    half_mu = 0.5 * mu
    dx = x * (pi_c - mean) - mu * x + half_mu * (1.0 - x)
    dy = y * (pi_d - mean) - mu * y + half_mu * (1.0 - y)
    dz = z * (pi_n - mean) - mu * z + half_mu * (1.0 - z)
    return dx, dy, dz


# Dormand-Prince 5(4) tableau.  The fifth-order solution is propagated; the
# last row of coefficients is the embedded error estimate (5th minus 4th).
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

STATUS_DONE = 0
STATUS_BUFFER_FULL = 1
STATUS_STEP_UNDERFLOW = 2
STATUS_STEP_BUDGET = 3


@njit(cache=True)
def rk45_kernel(m, r, alpha, beta, mu,
                t, x, y, z, t_end, h,
                rtol, atol, max_step,
                record_from, record_every, step_count,
                out, out_pos,
                steps_left, min_component):
    """Adaptive embedded Runge-Kutta loop with simplex projection.

    Steps from t toward t_end, clamping negative components to zero and
    renormalizing after every accepted step, and appends accepted samples
    with time >= record_from to ``out``.  Returns when t_end is reached,
    the output buffer fills, the step size underflows or the step budget
    runs out; the caller may resume from the returned state.
    """
    safety = 0.9
    min_factor = 0.2
    max_factor = 10.0
    last_rejected = False

    while t < t_end:
        if steps_left <= 0:
            return STATUS_STEP_BUDGET, t, x, y, z, h, out_pos, step_count, steps_left, min_component
        if h < 1e-12 * max(1.0, abs(t)):
            return STATUS_STEP_UNDERFLOW, t, x, y, z, h, out_pos, step_count, steps_left, min_component

        clipped_end = False
        h_try = h
        if t + h_try >= t_end:
            h_try = t_end - t
            clipped_end = True

        k1x, k1y, k1z = field_kernel(m, r, alpha, beta, mu, x, y, z)

        ax = x + h_try * _A21 * k1x
        ay = y + h_try * _A21 * k1y
        az = z + h_try * _A21 * k1z
        k2x, k2y, k2z = field_kernel(m, r, alpha, beta, mu, ax, ay, az)

        ax = x + h_try * (_A31 * k1x + _A32 * k2x)
        ay = y + h_try * (_A31 * k1y + _A32 * k2y)
        az = z + h_try * (_A31 * k1z + _A32 * k2z)
        k3x, k3y, k3z = field_kernel(m, r, alpha, beta, mu, ax, ay, az)

        ax = x + h_try * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
        ay = y + h_try * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        az = z + h_try * (_A41 * k1z + _A42 * k2z + _A43 * k3z)
        k4x, k4y, k4z = field_kernel(m, r, alpha, beta, mu, ax, ay, az)

        ax = x + h_try * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
        ay = y + h_try * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        az = z + h_try * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z)
        k5x, k5y, k5z = field_kernel(m, r, alpha, beta, mu, ax, ay, az)

        ax = x + h_try * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x)
        ay = y + h_try * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y + _A65 * k5y)
        az = z + h_try * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z + _A65 * k5z)
        k6x, k6y, k6z = field_kernel(m, r, alpha, beta, mu, ax, ay, az)

        nx = x + h_try * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
        ny = y + h_try * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y + _B6 * k6y)
        nz = z + h_try * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
        k7x, k7y, k7z = field_kernel(m, r, alpha, beta, mu, nx, ny, nz)

        ex = h_try * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
        ey = h_try * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y + _E7 * k7y)
        ez = h_try * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z + _E7 * k7z)

        scx = atol + rtol * max(abs(x), abs(nx))
        scy = atol + rtol * max(abs(y), abs(ny))
        scz = atol + rtol * max(abs(z), abs(nz))
        err = ((ex / scx) ** 2 + (ey / scy) ** 2 + (ez / scz) ** 2) / 3.0
        err = err ** 0.5

        steps_left -= 1

        if err > 1.0:
            h = h_try * max(min_factor, safety * err ** -0.2)
            last_rejected = True
            continue

        if err > 0.0:
            factor = safety * err ** -0.2
            if factor > max_factor:
                factor = max_factor
            elif factor < min_factor:
                factor = min_factor
        else:
            factor = max_factor
        if last_rejected and factor > 1.0:
            factor = 1.0
        last_rejected = False
        h = h_try * factor
        if h > max_step:
            h = max_step

        t = t_end if clipped_end else t + h_try

        if nx < min_component:
            min_component = nx
        if ny < min_component:
            min_component = ny
        if nz < min_component:
            min_component = nz
        if nx < 0.0:
            nx = 0.0
        if ny < 0.0:
            ny = 0.0
        if nz < 0.0:
            nz = 0.0
        total = nx + ny + nz
        x = nx / total
        y = ny / total
        z = nz / total

        step_count += 1
        if t >= record_from and (step_count % record_every == 0 or t >= t_end):
            if out_pos >= out.shape[0]:
                return STATUS_BUFFER_FULL, t, x, y, z, h, out_pos, step_count, steps_left, min_component
            out[out_pos, 0] = t
            out[out_pos, 1] = x
            out[out_pos, 2] = y
            out[out_pos, 3] = z
            out_pos += 1

    return STATUS_DONE, t, x, y, z, h, out_pos, step_count, steps_left, min_component

"""Coaxial counter-rotating rotor model at equal rotor power, plus quad-rotor
thrust/torque maps and the induced-power-factor study.

Momentum-theory picture: the lower rotor sits in the fully developed
slipstream (vena contracta) of the upper one, so half its disk sees the
accelerated inner flow and half sees fresh air.  The pair is trimmed so both
rotors absorb the same power.  In hover this pins three constants used all
over the controller:

    v_l / v_u = HOVER_RATIO            (root of 2r^3 + 5r^2 + 2r - 2 = 0)
    w_l / v_u = HOVER_SLIPSTREAM
    F_cl      = HOVER_LOWER_COEF * rho * A * v_u^2

and the total hover thrust F_c = COAX_THRUST_COEF * rho * A * v_u^2 with
COAX_THRUST_COEF = 2 + HOVER_LOWER_COEF (~3.3913).

Energy bookkeeping convention: the kinetic-energy flux subtracted for the
inner stream uses the upstream slipstream mass flow (velocity V_b cos(a) +
2 v_u, before the lower rotor's own induction), while the momentum balance
uses the at-disk mass flows.  This is the one grouping of the model's terms
that reproduces the hover constants above; it is applied unchanged away
from hover.

All functions are pure; the solver keeps no shared mutable state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoConvergenceError
from .wrench import BODY, Wrench

# Solver envelope (momentum theory is meaningless in descent / vortex-ring
# regimes): angle of attack in rad, airspeed in m/s.
ALPHA_ENVELOPE = (-0.5, 1.6)
VB_ENVELOPE = (0.0, 80.0)

# Isolated-rotor power coefficient P_ce = 2 rho A v_e^3 with
# v_e = sqrt(COAX_THRUST_COEF/4) v_u; paper rounds it to 1.5614.  The
# power-factor formula below keeps the rounded constants it was published
# with; the coax-only factor is computed from first principles.
_KAPPA_DENOM = 1.5614
_KAPPA_QUAD = 4.4164


def solve_hover_ratio(tol: float = 1e-12) -> float:
    """Unique root in (0, 1) of 2 r^3 + 5 r^2 + 2 r - 2 = 0.

    This is the hover induced-velocity ratio v_l / v_u of the equal-power
    coaxial pair.  Newton from 0.45 with a bisection fallback; converges in
    a handful of iterations (well under a millisecond).
    """
    r = 0.45
    for _ in range(60):
        f = ((2.0 * r + 5.0) * r + 2.0) * r - 2.0
        if abs(f) < tol:
            break
        df = (6.0 * r + 10.0) * r + 2.0
        step = f / df
        r -= step
        if not 0.0 < r < 1.0:
            break
    else:
        r = None
    if r is None or not 0.0 < r < 1.0:
        lo, hi = 0.0, 1.0
        for _ in range(200):
            r = 0.5 * (lo + hi)
            f = ((2.0 * r + 5.0) * r + 2.0) * r - 2.0
            if abs(f) < tol:
                break
            if f > 0.0:
                hi = r
            else:
                lo = r
    return r


HOVER_RATIO = solve_hover_ratio()
HOVER_SLIPSTREAM = 2.0 * (2.0 + HOVER_RATIO) / (1.0 + HOVER_RATIO) ** 2
HOVER_LOWER_COEF = (1.0 + HOVER_RATIO) * HOVER_SLIPSTREAM - 2.0
COAX_THRUST_COEF = 2.0 + HOVER_LOWER_COEF


@dataclass(frozen=True)
class CoaxGeometry:
    """Geometry and air data of the coaxial pair.

    blade_radius/root_cutout are in meters (the root cutout is the inner,
    non-lifting portion of the blade).  lambda_c is the induced inflow
    ratio: v = lambda_c * disk_radius * omega.
    """

    blade_radius: float = 0.5
    root_cutout: float = 0.08
    disk_radius: float = 0.5
    lambda_c: float = 0.2673
    rho: float = 1.225

    def __post_init__(self):
        if self.area <= 0.0:
            raise DomainError("effective rotor area must be positive")
        if self.lambda_c <= 0.0:
            raise DomainError("inflow ratio lambda_c must be positive")

    @property
    def area(self) -> float:
        """Effective disk area: pi (R_r^2 - l_a^2)."""
        return math.pi * (self.blade_radius**2 - self.root_cutout**2)

    @property
    def k_u_bar(self) -> float:
        """Nominal hover thrust coefficient: F_c0 = k_u_bar * omega_u^2."""
        return COAX_THRUST_COEF * self.rho * self.area * self.lambda_c**2 * self.disk_radius**2


@dataclass
class CoaxFlowState:
    """Converged induced-flow solution of the coaxial pair.

    clamped marks the fast-inflow regime (advance ratio beyond the point
    where the equal-power family reaches v_l = 0): there the lower induced
    velocity is held at zero and both rotors carry equal thrust.
    """

    v_u: float  # upper induced velocity, m/s
    v_l: float  # lower induced velocity, m/s
    w_u: float  # upper slipstream (vena contracta) velocity, m/s
    w_l: float  # lower slipstream velocity, m/s
    F_cu: float  # upper thrust, N
    F_cl: float  # lower thrust, N
    P_cu: float  # upper power, W
    P_cl: float  # lower power, W
    clamped: bool = False


def _zero_flow() -> CoaxFlowState:
    return CoaxFlowState(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def solve_coax_induced_flow(
    v_u: float,
    alpha: float,
    V_b: float,
    geom: CoaxGeometry,
    tol: float = 1e-12,
    max_iter: int = 80,
) -> CoaxFlowState:
    """Solve the lower-rotor flow (v_l, w_l) at equal rotor power.

    The two-equation system is the momentum thrust balance of the lower
    rotor together with its energy equation, constrained to P_cl = P_cu.
    The equal-power condition eliminates w_l in closed form, leaving a 1-D
    energy residual in v_l solved by damped Newton with a bisection
    fallback from the hover starting point HOVER_RATIO * v_u.

    The solution family reaches v_l = 0 at a fast-inflow boundary (advance
    ratio roughly 1.6 at zero angle of attack).  Beyond it the energy
    residual has no root; v_l is clamped at zero, which makes both rotors
    carry equal thrust.  The continuation is continuous across the seam.

    Raises:
        NoConvergenceError: input outside the model envelope or the root
            search exhausted its budget.
    """
    if not ALPHA_ENVELOPE[0] <= alpha <= ALPHA_ENVELOPE[1]:
        raise NoConvergenceError(f"alpha = {alpha:.4f} rad outside envelope {ALPHA_ENVELOPE}")
    if not VB_ENVELOPE[0] <= V_b <= VB_ENVELOPE[1]:
        raise NoConvergenceError(f"V_b = {V_b:.2f} m/s outside envelope {VB_ENVELOPE}")
    if v_u <= 0.0:
        raise DomainError("upper induced velocity must be positive")

    rho_a = geom.rho * geom.area
    half = 0.5 * rho_a
    uc = V_b * math.cos(alpha)
    us = V_b * math.sin(alpha)
    us2 = us * us
    if uc + v_u <= 1e-12:
        raise NoConvergenceError("non-positive axial inflow at the upper rotor")

    m_u = rho_a * math.sqrt(us2 + (uc + v_u) ** 2)
    P_cu = 2.0 * m_u * v_u * (uc + v_u)
    mom_in = 2.0 * m_u * v_u  # momentum flux arriving from the upper slipstream
    # Upstream inner-tube mass flow for the energy equation (no v_l).
    m_energy = half * math.sqrt((uc + 2.0 * v_u) ** 2 + us2)
    e_in = 0.5 * m_energy * (uc + 2.0 * v_u) ** 2

    def pieces(v_l):
        m_m = half * math.sqrt((uc + 2.0 * v_u + v_l) ** 2 + us2)
        m_out = half * math.sqrt((uc + v_l) ** 2 + us2)
        m_l = m_m + m_out
        x = uc + v_u + v_l
        F_cl = P_cu / x
        # Momentum balance solved for the slipstream velocity.
        w_l = (F_cl + mom_in + m_out * uc) / m_l - uc
        return m_l, m_out, x, F_cl, w_l

    def energy_residual(v_l):
        m_l, m_out, x, F_cl, w_l = pieces(v_l)
        rhs = 0.5 * m_l * (uc + w_l) ** 2 - e_in - 0.5 * m_out * uc * uc
        return F_cl * x - rhs

    scale = max(abs(P_cu), 1e-9)
    clamped = energy_residual(1e-12 * v_u) >= 0.0
    if clamped:
        v_l = 0.0
    else:
        v_l = HOVER_RATIO * v_u
        converged = False
        h = 1e-7 * v_u
        for _ in range(max_iter):
            f = energy_residual(v_l)
            if abs(f) < tol * scale:
                converged = True
                break
            df = (energy_residual(v_l + h) - f) / h
            if df == 0.0:
                break
            step = f / df
            # Damped update: keep v_l positive and do not let the residual grow.
            trial = v_l - step
            damp = 0
            while (trial <= 0.0 or abs(energy_residual(trial)) > abs(f)) and damp < 30:
                step *= 0.5
                trial = v_l - step
                damp += 1
            if damp >= 30:
                break
            v_l = trial

        if not converged:
            v_l = _bisect_energy(energy_residual, v_u, tol * scale)

    m_l, m_out, x, F_cl_power, w_l = pieces(v_l)
    F_cl = m_l * (uc + w_l) - mom_in - m_out * uc  # momentum form, Eq. (116) shape
    F_cu = 2.0 * m_u * v_u
    return CoaxFlowState(
        v_u=v_u,
        v_l=v_l,
        w_u=2.0 * v_u,
        w_l=w_l,
        F_cu=F_cu,
        F_cl=F_cl,
        P_cu=P_cu,
        P_cl=F_cl * x,
        clamped=clamped,
    )


def _bisect_energy(residual, v_u: float, tol_abs: float) -> float:
    """Bracket-scan + bisection fallback for the 1-D energy residual."""
    lo, hi = 1e-9 * v_u, 3.0 * v_u
    n_scan = 128
    grid = [lo + (hi - lo) * i / n_scan for i in range(n_scan + 1)]
    vals = [residual(g) for g in grid]
    bracket = None
    for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
        if fa == 0.0:
            return a
        if fa * fb < 0.0:
            bracket = (a, b, fa)
            break
    if bracket is None:
        raise NoConvergenceError("no sign change in coax energy residual (out of envelope?)")
    a, b, fa = bracket
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = residual(m)
        if abs(fm) < tol_abs or (b - a) < 1e-15 * v_u:
            return m
        if fa * fm < 0.0:
            b = m
        else:
            a, fa = m, fm
    raise NoConvergenceError("coax bisection fallback exhausted its budget")


def coax_thrust_truth(
    omega_u: float, alpha: float, V_b: float, geom: CoaxGeometry
) -> tuple[float, float, CoaxFlowState]:
    """Truth-model coax thrust for an upper-rotor speed command.

    Returns (total thrust F_c, implied lower speed omega_l, flow state).
    The lower rotor speed follows from the equal-power trim, not from a
    separate command.
    """
    if omega_u < 0.0:
        raise DomainError("rotor speed must be non-negative")
    lam_r = geom.lambda_c * geom.disk_radius
    v_u = lam_r * omega_u
    if v_u < 1e-12:
        return 0.0, 0.0, _zero_flow()
    flow = solve_coax_induced_flow(v_u, alpha, V_b, geom)
    return flow.F_cu + flow.F_cl, flow.v_l / lam_r, flow


def coax_thrust_nominal(omega_u: float, geom: CoaxGeometry) -> float:
    """Hover-calibrated nominal thrust map F_c0 = k_u_bar * omega_u^2."""
    if omega_u < 0.0:
        raise DomainError("rotor speed must be non-negative")
    return geom.k_u_bar * omega_u * omega_u


def induced_power_factor_coax() -> float:
    """Interference power factor of the equal-power coaxial pair in hover.

    Ratio of the pair's induced power to that of the same two rotors
    operating in isolation at the same total thrust (~1.281).
    """
    v_e = math.sqrt(COAX_THRUST_COEF / 4.0)
    return 2.0 / (2.0 * v_e**3)


def induced_power_factor_total(zeta: float, eta: float) -> float:
    """Induced power factor of the coax pair plus four quad rotors.

    zeta is the quad-rotor thrust fraction F_ri = zeta * F_c; eta is the
    area ratio A / A_q.  Strictly below the coax-only factor for zeta > 0:
    the quad rotors improve overall thrust efficiency.
    """
    if not 0.0 < zeta < 1.0:
        raise DomainError("zeta must lie in (0, 1)")
    if eta <= 0.0:
        raise DomainError("eta must be positive")
    x = 2.0 * _KAPPA_QUAD * zeta**1.5 * math.sqrt(eta)
    return (2.0 + x) / (_KAPPA_DENOM + x)


@dataclass(frozen=True)
class QuadRotorParams:
    """Quad-rotor thrust/torque coefficients and the vane torque amplifier."""

    b: float = 5e-4  # thrust coefficient, N s^2
    k: float = 3e-5  # free-air reactive torque coefficient, N m s^2
    k_f: float = 2.6583  # vane amplifier force coefficient
    l_3: float = 0.8  # rotor pair separation, m
    J_r: float = 0.01  # rotor inertia, kg m^2
    delta_a: float = 0.13686  # vane deflection in transition mode, rad

    def __post_init__(self):
        for name in ("b", "k", "k_f", "l_3", "J_r"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be positive")

    def roll_lever(self, mode: str) -> float:
        """Reactive-torque coefficient per omega^2 for the roll channel."""
        if mode == "transition":
            return self.k + math.sqrt(2.0) * self.l_3 * self.k_f / 2.0
        # Forward flight: vanes are driven to zero deflection.
        return self.k


def quad_rotor_wrench(omegas, params: QuadRotorParams, mode: str = "transition") -> Wrench:
    """Body wrench of the four attitude rotors.

    Thrust acts along body x.  Roll torque alternates sign rotor-to-rotor
    and is amplified by the downwash vanes in transition mode; pitch/yaw
    come from thrust differentials across the rotor pairs.
    """
    w1, w2, w3, w4 = (float(w) for w in omegas)
    if min(w1, w2, w3, w4) < 0.0:
        raise DomainError("rotor speeds must be non-negative")
    s1, s2, s3, s4 = w1 * w1, w2 * w2, w3 * w3, w4 * w4
    lever = params.roll_lever(mode)
    half_bl = 0.5 * params.b * params.l_3
    force = np.array([params.b * (s1 + s2 + s3 + s4), 0.0, 0.0])
    torque = np.array([
        lever * (s1 - s2 + s3 - s4),
        half_bl * (s1 + s2 - s3 - s4),
        half_bl * (-s1 + s2 + s3 - s4),
    ])
    return Wrench(force, torque, BODY)


def gyroscopic_torque(omega_body: np.ndarray, omegas, J_r: float) -> np.ndarray:
    """Net gyroscopic torque of the four counter-rotating attitude rotors."""
    w1, w2, w3, w4 = (float(w) for w in omegas)
    net = -w1 + w2 - w3 + w4
    cross = np.cross(np.asarray(omega_body, dtype=float), np.array([0.0, 0.0, 1.0]))
    return J_r * net * cross

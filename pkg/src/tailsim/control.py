"""Quaternion attitude control, position control, and control allocation.

The attitude law feedback-linearizes the error-quaternion dynamics so the
closed loop obeys e_ddot = -k_a1 e - k_a2 e_dot once the disturbance
estimate has converged; the position law does the same for the inertial
translation error.  Allocation inverts the rotor force/torque maps in
closed form with a fixed thrust split K between the coaxial pair and the
four attitude rotors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, LowAirspeedError, NearSingularAttitudeError
from .mathcore import quat_error, skew
from .airframe_aero import WingParams
from .rotor_aero import HOVER_RATIO

TRANSITION = "transition"
FORWARD = "forward"

E0_MIN_DEFAULT = 0.05  # error-quaternion scalar floor (~174 deg error)


@dataclass(frozen=True)
class AttitudeGains:
    k_a1: float = 0.8
    k_a2: float = 0.5

    def __post_init__(self):
        if self.k_a1 <= 0.0 or self.k_a2 <= 0.0:
            raise DomainError("attitude gains must be positive")


@dataclass(frozen=True)
class PositionGains:
    k_p1: float = 0.2
    k_p2: float = 0.6

    def __post_init__(self):
        if self.k_p1 <= 0.0 or self.k_p2 <= 0.0:
            raise DomainError("position gains must be positive")


@dataclass
class ActuatorCommand:
    """Rotor speeds and surface deflections commanded for one control period.

    omega_l is the commanded lower coax speed (the hover-trim ratio of
    omega_u); the plant's equal-power trim determines the speed actually
    flown.  saturated marks any radicand clamp or speed/deflection limit.
    """

    omega_u: float = 0.0
    omega_l: float = 0.0
    omegas: np.ndarray = field(default_factory=lambda: np.zeros(4))
    delta_a: float = 0.0
    delta_12: float = 0.0
    mode: str = TRANSITION
    saturated: bool = False


@dataclass(frozen=True)
class AllocationParams:
    """Constants of the closed-form allocation maps."""

    K: float = 6.0  # coax-to-quad thrust split, > 1
    b: float = 5e-4
    k: float = 3e-5
    k_f: float = 2.6583
    l_3: float = 0.8
    k_u_bar: float = 0.0568
    k_uv: float = HOVER_RATIO
    omega_max: float = 1200.0
    delta_max: float = 0.35
    q_min: float = 50.0  # rho * V^2 floor for aileron effectiveness, Pa
    delta_a: float = 0.13686  # vane bias in transition mode, rad

    def __post_init__(self):
        if self.K <= 1.0:
            raise DomainError("thrust split K must exceed 1")
        if self.roll_lever_transition <= 0.0:
            raise DomainError("roll lever must be positive")

    @property
    def roll_lever_transition(self) -> float:
        return self.k + math.sqrt(2.0) * self.l_3 * self.k_f / 2.0


def attitude_controller(
    q: np.ndarray,
    omega: np.ndarray,
    q_d: np.ndarray,
    omega_d: np.ndarray,
    omega_d_dot: np.ndarray,
    tau_d_hat: np.ndarray,
    aux_torque: np.ndarray,
    J: np.ndarray,
    gains: AttitudeGains,
    e0_min: float = E0_MIN_DEFAULT,
) -> np.ndarray:
    """Body torque command tracking the desired attitude quaternion.

    aux_torque collects the modeled torques already acting on the body
    (wing + gyroscopic in transition mode; gyroscopic only in forward
    mode, where the wing torque is part of the lumped disturbance).

    Raises:
        NearSingularAttitudeError: attitude error within e0_min of 180 deg,
            where the M_q inverse is ill-conditioned.
    """
    e0, e = quat_error(q, q_d)
    if e0 < e0_min:
        raise NearSingularAttitudeError(f"error quaternion scalar {e0:.4f} < {e0_min}")
    om_err = omega - omega_d
    e_dot = 0.5 * (np.cross(e, om_err) + e0 * om_err)
    e0_dot = -0.5 * float(e @ om_err)
    M_q = skew(e) + e0 * np.eye(3)
    M_q_dot = skew(e_dot) + e0_dot * np.eye(3)
    feedback = np.linalg.solve(M_q, 2.0 * (gains.k_a1 * e + gains.k_a2 * e_dot)
                               + M_q_dot @ om_err)
    return (
        np.cross(omega, J * omega)
        - aux_torque
        - tau_d_hat
        + J * omega_d_dot
        - J * feedback
    )


def position_controller(
    p: np.ndarray,
    v: np.ndarray,
    p_d: np.ndarray,
    v_d: np.ndarray,
    a_d: np.ndarray,
    F_d_bar_hat: np.ndarray,
    F_aero_body: np.ndarray,
    R: np.ndarray,
    m: float,
    g: float,
    gains: PositionGains,
) -> np.ndarray:
    """Inertial force command for the translational loop.

    Cancels the estimated lumped disturbance and the modeled aero force,
    feeds gravity and the reference acceleration forward, and closes a PD
    loop on the position/velocity error.  Its norm is the thrust-magnitude
    command handed to allocation.
    """
    return (
        -R @ (F_d_bar_hat + F_aero_body)
        + np.array([0.0, 0.0, m * g])
        + m * a_d
        - gains.k_p1 * m * (p - p_d)
        - gains.k_p2 * m * (v - v_d)
    )


def _sqrt_clamped(radicand: float) -> tuple[float, bool]:
    if radicand < 0.0:
        return 0.0, True
    return math.sqrt(radicand), False


def allocate_transition(F_p_norm: float, tau_r: np.ndarray, ap: AllocationParams) -> ActuatorCommand:
    """Rotor speeds realizing (|F_p|, tau_r) in transition mode.

    Vanes sit at their bias deflection, amplifying the roll channel.
    Negative radicands clamp to zero and flag saturation; commanded torque
    then degrades gracefully instead of producing NaNs.
    """
    S = F_p_norm / (ap.b * (1.0 + ap.K))
    T1 = float(tau_r[0]) / ap.roll_lever_transition
    T2 = 2.0 * float(tau_r[1]) / (ap.b * ap.l_3)
    T3 = 2.0 * float(tau_r[2]) / (ap.b * ap.l_3)
    radicands = (
        0.25 * (S + T1 + T2 - T3),
        0.25 * (S - T1 + T2 + T3),
        0.25 * (S + T1 - T2 + T3),
        0.25 * (S - T1 - T2 - T3),
    )
    omegas = np.zeros(4)
    saturated = False
    for i, r in enumerate(radicands):
        w, clamped = _sqrt_clamped(r)
        saturated |= clamped
        if w > ap.omega_max:
            w, saturated = ap.omega_max, True
        omegas[i] = w
    omega_u, sat_u = _coax_speed(F_p_norm, ap)
    return ActuatorCommand(
        omega_u=omega_u,
        omega_l=ap.k_uv * omega_u,
        omegas=omegas,
        delta_a=ap.delta_a,
        delta_12=0.0,
        mode=TRANSITION,
        saturated=saturated or sat_u,
    )


def allocate_forward(
    F_p_norm: float, tau_r2: float, tau_r3: float, ap: AllocationParams
) -> ActuatorCommand:
    """Rotor speeds in forward flight: vanes centered, ailerons own roll.

    The alternating-sign speed pattern keeps the free-air reactive roll
    torque identically zero.
    """
    S = F_p_norm / (ap.b * (1.0 + ap.K))
    T2 = 2.0 * tau_r2 / (ap.b * ap.l_3)
    T3 = 2.0 * tau_r3 / (ap.b * ap.l_3)
    radicands = (
        0.25 * (S + T2 - T3),
        0.25 * (S + T2 + T3),
        0.25 * (S - T2 + T3),
        0.25 * (S - T2 - T3),
    )
    omegas = np.zeros(4)
    saturated = False
    for i, r in enumerate(radicands):
        w, clamped = _sqrt_clamped(r)
        saturated |= clamped
        if w > ap.omega_max:
            w, saturated = ap.omega_max, True
        omegas[i] = w
    omega_u, sat_u = _coax_speed(F_p_norm, ap)
    return ActuatorCommand(
        omega_u=omega_u,
        omega_l=ap.k_uv * omega_u,
        omegas=omegas,
        delta_a=0.0,
        delta_12=0.0,
        mode=FORWARD,
        saturated=saturated or sat_u,
    )


def _coax_speed(F_p_norm: float, ap: AllocationParams) -> tuple[float, bool]:
    omega_u = math.sqrt(max(0.0, ap.K * F_p_norm / (ap.k_u_bar * (1.0 + ap.K))))
    if omega_u > ap.omega_max:
        return ap.omega_max, True
    return omega_u, False


def aileron_law(
    tau_r1: float,
    alpha: float,
    v_body: np.ndarray,
    wing: WingParams,
    rho: float,
    q_min: float = 50.0,
    delta_max: float = 0.35,
) -> tuple[float, bool]:
    """Antisymmetric aileron deflection realizing a roll torque command.

    Returns (delta_12, saturated).  The deflections deploy as
    delta_1 = -delta_12, delta_2 = +delta_12.

    Raises:
        LowAirspeedError: dynamic-pressure term below q_min; the caller
            must fall back to transition-mode roll authority.
    """
    q_term = rho * (float(v_body[0]) ** 2 + float(v_body[2]) ** 2)
    if q_term < q_min:
        raise LowAirspeedError(f"rho V^2 = {q_term:.1f} Pa below {q_min} Pa")
    if abs(alpha) >= 0.5 * math.pi - 0.1:
        raise DomainError("angle of attack too close to 90 deg for aileron authority")
    delta = tau_r1 / (wing.l_w * wing.C_Ldelta * wing.S * q_term * math.cos(alpha))
    if abs(delta) > delta_max:
        return math.copysign(delta_max, delta), True
    return delta, False

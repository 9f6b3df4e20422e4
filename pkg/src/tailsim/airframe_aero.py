"""Fixed-wing and fuselage aerodynamics.

Lift acts along body +z (out of the canopy) and drag along body -x; see
mathcore for the frame conventions.  The dynamic pressure uses the in-plane
body velocity components (x, z), matching the planar transition scenario.
Coefficients extrapolate linearly at high angle of attack: there is no
stall model, and in flight the disturbance observer absorbs the error.

Two published coefficient sets exist for the wing; they disagree.  Both
ship as presets (``table1``, the simulation default, and ``cfd``); pick
explicitly via WingParams.preset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .wrench import BODY, Wrench


@dataclass(frozen=True)
class WingParams:
    """Half-wing aerodynamic coefficients and moment arms.

    l_w is the spanwise arm of each half-wing's aerodynamic center
    (roll/yaw torque from left-right asymmetry); l_c the longitudinal
    offset of the wing center from the CG (static pitch moment), positive
    per the printed moment rows.  Default l_c = 0: the wing is mounted at
    the CG, the only placement the rotor-borne pitch trim can carry at
    cruise.
    """

    S: float = 0.45  # half-wing area, m^2
    C_L0: float = 0.32
    C_Lalpha: float = 0.5  # 1/rad
    C_Ldelta: float = 0.05  # 1/rad
    C_D0: float = 0.008
    A_w: float = 6.0  # aspect ratio
    l_w: float = 1.0  # m
    l_c: float = 0.0  # m

    def __post_init__(self):
        if self.S <= 0.0:
            raise DomainError("wing area must be positive")
        if self.e_w <= 0.0:
            raise DomainError("Oswald factor must be positive")

    @property
    def e_w(self) -> float:
        """Oswald efficiency factor 1.78 (1 - 0.045 A_w^0.68) - 0.46."""
        return 1.78 * (1.0 - 0.045 * self.A_w**0.68) - 0.46

    @classmethod
    def preset(cls, name: str) -> "WingParams":
        if name == "table1":
            return cls()
        if name == "cfd":
            return cls(C_L0=0.3137, C_Lalpha=0.7025, C_Ldelta=0.1634, C_D0=0.00182)
        raise DomainError(f"unknown wing preset {name!r}")

    def with_arms(self, l_w: float, l_c: float) -> "WingParams":
        return replace(self, l_w=l_w, l_c=l_c)


@dataclass(frozen=True)
class FuselageParams:
    S_f: float = 0.04  # reference area, m^2
    C_lf_alpha: float = 0.0802
    C_df0: float = 0.0063
    C_df_alpha: float = 0.0094

    def __post_init__(self):
        if self.S_f <= 0.0:
            raise DomainError("fuselage reference area must be positive")


@dataclass(frozen=True)
class FlowAngles:
    alpha: float  # angle of attack, rad
    beta: float  # sideslip, rad
    gamma: float  # flightpath angle, rad
    V_b: float  # airspeed magnitude, m/s


def flow_angles(
    theta: float,
    v_inertial: np.ndarray,
    v_body: np.ndarray,
    prev_alpha: float = 0.0,
    min_speed: float = 0.1,
) -> FlowAngles:
    """Angle of attack, sideslip, and flightpath angle.

    gamma = atan2(z_dot, x_dot) on the inertial velocity and alpha =
    theta - gamma, so alpha + gamma = theta holds identically.  Below
    min_speed of horizontal velocity the angle of attack is held at
    prev_alpha (the flow direction is undefined at rest) and gamma keeps
    the identity.
    """
    vx, vy, vz = float(v_inertial[0]), float(v_inertial[1]), float(v_inertial[2])
    V_b = float(np.linalg.norm(v_body))
    if math.hypot(vx, vy) < min_speed:
        alpha = prev_alpha
        gamma = theta - alpha
    else:
        gamma = math.atan2(vz, vx)
        alpha = theta - gamma
    beta = math.asin(min(1.0, max(-1.0, float(v_body[1]) / V_b))) if V_b > 1e-9 else 0.0
    return FlowAngles(alpha=alpha, beta=beta, gamma=gamma, V_b=V_b)


def wing_forces(
    alpha: float,
    v_body: np.ndarray,
    delta1: float,
    delta2: float,
    p: WingParams,
    rho: float,
) -> tuple[float, float, float, float]:
    """Per-half-wing lift and drag (L1, L2, D1, D2) in newtons.

    Induced drag grows with the square of the lift coefficient over
    pi A_w e_w.
    """
    q_dyn = 0.5 * rho * (float(v_body[0]) ** 2 + float(v_body[2]) ** 2)
    denom = math.pi * p.A_w * p.e_w
    out = []
    for delta in (delta1, delta2):
        c_l = p.C_L0 + p.C_Lalpha * alpha + p.C_Ldelta * delta
        out.append(c_l * p.S * q_dyn)
        out.append((p.C_D0 + c_l * c_l / denom) * p.S * q_dyn)
    L1, D1, L2, D2 = out
    return L1, L2, D1, D2


def wing_wrench(L1: float, L2: float, D1: float, D2: float, alpha: float, p: WingParams) -> Wrench:
    """Body-frame wrench of the two half-wings.

    Force: lift perpendicular to the flow (mostly +z), drag along the flow
    (mostly -x).  Torque rows: roll and yaw from left/right asymmetry with
    arm l_w, pitch from the total lift with arm l_c.
    """
    ca, sa = math.cos(alpha), math.sin(alpha)
    lift, drag = L1 + L2, D1 + D2
    force = np.array([lift * sa - drag * ca, 0.0, lift * ca + drag * sa])
    torque = np.array([
        p.l_w * ((L2 - L1) * ca + (D2 - D1) * sa),
        p.l_c * ((L2 + L1) * ca + (D2 + D1) * sa),
        p.l_w * ((D2 - D1) * ca + (L1 - L2) * sa),
    ])
    return Wrench(force, torque, BODY)


def fuselage_wrench(alpha: float, v_body: np.ndarray, p: FuselageParams, rho: float) -> Wrench:
    """Body-frame fuselage force; the fuselage contributes no torque."""
    q_dyn = 0.5 * rho * (float(v_body[0]) ** 2 + float(v_body[2]) ** 2)
    L_f = p.C_lf_alpha * alpha * p.S_f * q_dyn
    D_f = (p.C_df0 + p.C_df_alpha * alpha) * p.S_f * q_dyn
    ca, sa = math.cos(alpha), math.sin(alpha)
    return Wrench(np.array([L_f * sa - D_f * ca, 0.0, L_f * ca + D_f * sa]), np.zeros(3), BODY)

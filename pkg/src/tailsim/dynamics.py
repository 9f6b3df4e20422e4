"""Rigid-body plant: force composition, equations of motion, RK4 stepping.

State: inertial position and velocity, body-to-inertial attitude
quaternion, body angular rate.  Forces compose in the body frame and
rotate to inertial; gravity (-g along inertial z) enters the equations of
motion directly, not the wrench.  The coax thrust is the truth model
(equal-power momentum solve), so the plant carries the full nominal-vs-
truth mismatch the observer is designed to absorb.

A simulation instance is single-threaded; independent instances may run
in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import airframe_aero as aa
from . import rotor_aero as ra
from .control import ActuatorCommand
from .errors import DomainError
from .mathcore import quat_pitch, quat_to_rotmat

GRAVITY_AXIS = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class InertiaParams:
    m: float = 50.0
    g: float = 10.0
    J: np.ndarray = field(default_factory=lambda: np.array([0.2, 0.2, 0.4]))

    def __post_init__(self):
        if self.m <= 0.0:
            raise DomainError("mass must be positive")
        if np.any(np.asarray(self.J) <= 0.0):
            raise DomainError("inertia diagonal must be positive")


@dataclass(frozen=True)
class AircraftParams:
    inertia: InertiaParams = field(default_factory=InertiaParams)
    coax: ra.CoaxGeometry = field(default_factory=ra.CoaxGeometry)
    quad: ra.QuadRotorParams = field(default_factory=ra.QuadRotorParams)
    wing: aa.WingParams = field(default_factory=aa.WingParams)
    fuselage: aa.FuselageParams = field(default_factory=aa.FuselageParams)

    @property
    def rho(self) -> float:
        return self.coax.rho


@dataclass
class State:
    p: np.ndarray = field(default_factory=lambda: np.zeros(3))
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))
    q: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))
    omega: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.p, self.v, self.q, self.omega])

    @classmethod
    def from_vector(cls, y: np.ndarray) -> "State":
        return cls(p=y[0:3].copy(), v=y[3:6].copy(), q=y[6:10].copy(), omega=y[10:13].copy())


@dataclass
class Disturbance:
    """Body-frame disturbance force/torque as functions of time.

    The per-channel bounds describe the signal family (sup of the value
    and of its time derivative); they feed the observer gain validation.
    """

    force: Callable[[float], np.ndarray]
    torque: Callable[[float], np.ndarray]
    force_bound: np.ndarray = field(default_factory=lambda: np.zeros(3))
    torque_bound: np.ndarray = field(default_factory=lambda: np.zeros(3))
    force_rate_bound: np.ndarray = field(default_factory=lambda: np.zeros(3))
    torque_rate_bound: np.ndarray = field(default_factory=lambda: np.zeros(3))


def zero_disturbance() -> Disturbance:
    z = np.zeros(3)
    return Disturbance(force=lambda t: z, torque=lambda t: z)


def paper_disturbance() -> Disturbance:
    """Sinusoidal disturbance mix used by the standard transition scenario."""

    def force(t: float) -> np.ndarray:
        s3, c1 = math.sin(3.0 * t), math.cos(t)
        return 5.0 * np.array([2.0 * s3 + c1, s3 + 2.0 * c1, 0.5 * s3 + 3.0 * c1])

    def torque(t: float) -> np.ndarray:
        s3, c1 = math.sin(3.0 * t), math.cos(t)
        return 2.0 * np.array([0.5 * s3 + 0.8 * c1, 0.5 * s3 + 0.5 * c1, 2.0 * s3 + 0.5 * c1])

    return Disturbance(
        force=force,
        torque=torque,
        force_bound=5.0 * np.array([3.0, 3.0, 3.5]),
        torque_bound=2.0 * np.array([1.3, 1.0, 2.5]),
        force_rate_bound=5.0 * np.array([7.0, 5.0, 4.5]),
        torque_rate_bound=2.0 * np.array([2.3, 2.0, 6.5]),
    )


@dataclass
class TotalWrench:
    """Composed plant loads: inertial force, body torque, and diagnostics."""

    force_inertial: np.ndarray
    torque_body: np.ndarray
    thrust_coax: float
    gamma_fc: float  # truth-minus-nominal coax thrust residual
    flow: aa.FlowAngles
    coax_flow: ra.CoaxFlowState


def total_wrench(
    state: State,
    command: ActuatorCommand,
    disturbance: Disturbance,
    t: float,
    params: AircraftParams,
    prev_alpha: float = 0.0,
) -> TotalWrench:
    """Compose all body loads and rotate the force to the inertial frame.

    Gravity is not included here (it lives in the equations of motion).
    The ailerons deploy antisymmetrically: delta_1 = -delta_12,
    delta_2 = +delta_12, so positive delta_12 rolls positively.
    """
    q = state.q / math.sqrt(float(state.q @ state.q))
    R = quat_to_rotmat(q)
    v_body = R.T @ state.v
    flow = aa.flow_angles(quat_pitch(q), state.v, v_body, prev_alpha=prev_alpha)

    F_c, _, coax_flow = ra.coax_thrust_truth(command.omega_u, flow.alpha, flow.V_b, params.coax)
    gamma_fc = F_c - ra.coax_thrust_nominal(command.omega_u, params.coax)

    quad = ra.quad_rotor_wrench(command.omegas, params.quad, command.mode)
    L1, L2, D1, D2 = aa.wing_forces(
        flow.alpha, v_body, -command.delta_12, command.delta_12, params.wing, params.rho
    )
    wing = aa.wing_wrench(L1, L2, D1, D2, flow.alpha, params.wing)
    fuse = aa.fuselage_wrench(flow.alpha, v_body, params.fuselage, params.rho)
    gyro = ra.gyroscopic_torque(state.omega, command.omegas, params.quad.J_r)

    force_body = (
        np.array([F_c, 0.0, 0.0]) + quad.force + wing.force + fuse.force + disturbance.force(t)
    )
    torque_body = quad.torque + wing.torque + gyro + disturbance.torque(t)
    return TotalWrench(
        force_inertial=R @ force_body,
        torque_body=torque_body,
        thrust_coax=F_c,
        gamma_fc=gamma_fc,
        flow=flow,
        coax_flow=coax_flow,
    )


def state_derivative(state: State, wrench: TotalWrench, params: AircraftParams) -> np.ndarray:
    """Time derivative of the packed 13-state under the composed wrench."""
    m = params.inertia.m
    J = params.inertia.J
    v_dot = wrench.force_inertial / m - params.inertia.g * GRAVITY_AXIS
    om = state.omega
    om_dot = (wrench.torque_body - np.cross(om, J * om)) / J
    q0, qv = state.q[0], state.q[1:]
    qv_dot = 0.5 * (np.cross(qv, om) + q0 * om)
    q0_dot = -0.5 * float(qv @ om)
    return np.concatenate([state.v, v_dot, [q0_dot], qv_dot, om_dot])


def step(
    state: State,
    command: ActuatorCommand,
    disturbance: Disturbance,
    t: float,
    dt: float,
    params: AircraftParams,
    prev_alpha: float = 0.0,
) -> State:
    """One classical RK4 step with quaternion renormalization.

    dt must lie in (0, 0.02] s; commands are held constant over the step.
    Deterministic for identical inputs.
    """
    if not 0.0 < dt <= 0.02:
        raise DomainError("physics step must lie in (0, 0.02] s")

    def f(ti: float, y: np.ndarray) -> np.ndarray:
        s = State.from_vector(y)
        w = total_wrench(s, command, disturbance, ti, params, prev_alpha)
        return state_derivative(s, w, params)

    y0 = state.as_vector()
    k1 = f(t, y0)
    k2 = f(t + 0.5 * dt, y0 + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y0 + 0.5 * dt * k2)
    k4 = f(t + dt, y0 + dt * k3)
    y1 = y0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    out = State.from_vector(y1)
    out.q = out.q / math.sqrt(float(out.q @ out.q))
    return out

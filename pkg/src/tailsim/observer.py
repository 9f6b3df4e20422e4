"""Finite-time convergent disturbance observers and their frequency tools.

Six independent two-state observers reconstruct the lumped disturbances:
channels 0-2 track the inertial velocity components (their second states
estimate (1/m) R F_d_bar), channels 3-5 track the body angular rates
(second states estimate J^-1 tau_d).  Each observer runs the
sqrt-of-error correction law

    z1_hat' = z2_hat + Xi - k1 |z1_hat - z1|^(1/2) sign(z1_hat - z1)
    z2_hat' = -k2 sign(z1_hat - z1)

discretized with explicit Euler: the right-hand side is non-smooth, so a
higher-order scheme buys nothing.  sign(0) is taken as 0 to avoid a bias
at exact zero error.  The steady-state estimate chatters with amplitude
about k2 * dt; pick the control period accordingly.

The describing-function tools linearize the two nonlinearities under a
sinusoidal error of amplitude A0, giving the equivalent second-order
transfer functions used for noise-rejection analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import airframe_aero as aa
from . import rotor_aero as ra
from .control import FORWARD, ActuatorCommand
from .dynamics import GRAVITY_AXIS, AircraftParams, State
from .errors import DomainError
from .mathcore import quat_pitch, quat_to_rotmat

# Describing-function constant of |e|^(1/2) sign(e): (2/pi) Int |sin|^(3/2).
DELTA1 = 1.1128

# Diagnostics-only convergence detector: |z1 error| below this for
# CONVERGENCE_STREAK consecutive steps.
CONVERGENCE_BAND = 1e-4
CONVERGENCE_STREAK = 50


def _sign(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


@dataclass(frozen=True)
class FtcObserverState:
    """One scalar finite-time observer: state estimate and disturbance estimate."""

    z1_hat: float = 0.0
    z2_hat: float = 0.0
    k1: float = 1.0
    k2: float = 1.0

    def __post_init__(self):
        if self.k1 <= 0.0 or self.k2 <= 0.0:
            raise DomainError("observer gains must be positive")


def observer_step(obs: FtcObserverState, measured_z1: float, Xi: float, dt: float) -> FtcObserverState:
    """One explicit-Euler step of the finite-time observer."""
    if not 0.0 < dt <= 0.01:
        raise DomainError("observer step must lie in (0, 0.01] s")
    err = obs.z1_hat - measured_z1
    s = _sign(err)
    z1 = obs.z1_hat + dt * (obs.z2_hat + Xi - obs.k1 * math.sqrt(abs(err)) * s)
    z2 = obs.z2_hat - dt * obs.k2 * s
    return replace(obs, z1_hat=z1, z2_hat=z2)


@dataclass
class ObserverBank:
    """Six observers: indices 0-2 velocity channels, 3-5 angular-rate channels."""

    channels: list[FtcObserverState]
    converged: list[bool] = field(default_factory=lambda: [False] * 6)
    converged_at: list[float | None] = field(default_factory=lambda: [None] * 6)
    _streak: list[int] = field(default_factory=lambda: [0] * 6)

    @classmethod
    def from_gains(cls, k1: np.ndarray, k2: np.ndarray, z1_init: np.ndarray | None = None) -> "ObserverBank":
        z1 = np.zeros(6) if z1_init is None else np.asarray(z1_init, dtype=float)
        return cls(channels=[
            FtcObserverState(z1_hat=float(z1[i]), k1=float(k1[i]), k2=float(k2[i]))
            for i in range(6)
        ])

    def step(self, measured: np.ndarray, Xi: np.ndarray, dt: float, t: float) -> None:
        for i in range(6):
            self.channels[i] = observer_step(self.channels[i], float(measured[i]), float(Xi[i]), dt)
            if abs(self.channels[i].z1_hat - float(measured[i])) < CONVERGENCE_BAND:
                self._streak[i] += 1
                if self._streak[i] >= CONVERGENCE_STREAK and not self.converged[i]:
                    self.converged[i] = True
                    self.converged_at[i] = t
            else:
                self._streak[i] = 0

    def z2(self) -> np.ndarray:
        return np.array([c.z2_hat for c in self.channels])

    def z1(self) -> np.ndarray:
        return np.array([c.z1_hat for c in self.channels])


def known_dynamics(
    state: State,
    command: ActuatorCommand,
    params: AircraftParams,
    prev_alpha: float = 0.0,
) -> np.ndarray:
    """Model-known part of the measured-state dynamics (the observer's Xi).

    Velocity channels use the nominal coax thrust map (the truth-vs-nominal
    residual is part of the lumped disturbance by design).  Rate channels
    use the commanded actuator torques; in forward mode the wing torque is
    left out, moving it into the lumped disturbance alongside tau_d.
    """
    q = state.q / math.sqrt(float(state.q @ state.q))
    R = quat_to_rotmat(q)
    v_body = R.T @ state.v
    flow = aa.flow_angles(quat_pitch(q), state.v, v_body, prev_alpha=prev_alpha)

    F_c0 = ra.coax_thrust_nominal(command.omega_u, params.coax)
    quad = ra.quad_rotor_wrench(command.omegas, params.quad, command.mode)
    L1, L2, D1, D2 = aa.wing_forces(
        flow.alpha, v_body, -command.delta_12, command.delta_12, params.wing, params.rho
    )
    wing = aa.wing_wrench(L1, L2, D1, D2, flow.alpha, params.wing)
    fuse = aa.fuselage_wrench(flow.alpha, v_body, params.fuselage, params.rho)
    gyro = ra.gyroscopic_torque(state.omega, command.omegas, params.quad.J_r)

    force_body = np.array([F_c0, 0.0, 0.0]) + quad.force + wing.force + fuse.force
    m = params.inertia.m
    xi_v = (R @ force_body) / m - params.inertia.g * GRAVITY_AXIS

    torque_known = quad.torque + gyro
    if command.mode == FORWARD:
        # Ailerons realize the roll command through the wing; that part of
        # the wing torque is control effort, not disturbance.
        q_term = params.rho * (float(v_body[0]) ** 2 + float(v_body[2]) ** 2)
        roll_ail = (params.wing.l_w * params.wing.C_Ldelta * params.wing.S
                    * q_term * command.delta_12 * math.cos(flow.alpha))
        torque_known = torque_known + np.array([roll_ail, 0.0, 0.0])
    else:
        torque_known = torque_known + wing.torque
    J = params.inertia.J
    om = state.omega
    xi_w = (torque_known - np.cross(om, J * om)) / J
    return np.concatenate([xi_v, xi_w])


def estimate_disturbances(
    bank: ObserverBank, R: np.ndarray, m: float, J: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Unwrap the bank's second states into body-frame (F_d_bar, tau_d)."""
    z2 = bank.z2()
    return m * (R.T @ z2[0:3]), J * z2[3:6]


def describing_function_gains(A0: float) -> tuple[float, float]:
    """Equivalent gains of the two observer nonlinearities at error amplitude A0."""
    if A0 <= 0.0:
        raise DomainError("describing-function amplitude must be positive")
    return DELTA1 / math.sqrt(A0), 4.0 / (A0 * math.pi)


def bode_response(A0: float, k1: float, k2: float, omegas) -> dict[str, np.ndarray]:
    """Frequency response of the describing-function linearization.

    G1: measured state to state estimate (unity DC gain, low-pass).
    G2: measured state to disturbance estimate (band-pass, zero at DC).
    The characteristic polynomial s^2 + c1 s + c2 is Hurwitz for any
    positive gains and amplitude.
    """
    if A0 <= 0.0 or k1 <= 0.0 or k2 <= 0.0:
        raise DomainError("A0, k1, k2 must all be positive")
    n1, n2 = describing_function_gains(A0)
    c1 = k1 * n1
    c2 = k2 * n2
    w = np.asarray(omegas, dtype=float)
    s = 1j * w
    den = s * s + c1 * s + c2
    g1 = (c1 * s + c2) / den
    g2 = (c2 * s) / den
    return {
        "omega_rad_s": w,
        "G1_mag_db": 20.0 * np.log10(np.abs(g1)),
        "G1_phase_deg": np.degrees(np.angle(g1)),
        "G2_mag_db": 20.0 * np.log10(np.abs(g2)),
        "G2_phase_deg": np.degrees(np.angle(g2)),
    }


def cutoff_frequency(A0: float, k1: float, k2: float) -> float:
    """-3 dB cutoff of G1, found by bisection on a log-frequency grid."""
    target = 1.0 / math.sqrt(2.0)

    def mag(w):
        n1, n2 = describing_function_gains(A0)
        c1, c2 = k1 * n1, k2 * n2
        s = 1j * w
        return abs((c1 * s + c2) / (s * s + c1 * s + c2))

    lo, hi = 1e-4, 1e7
    # G1 starts at 1 and eventually rolls off; push hi until below target.
    while mag(hi) > target:
        hi *= 10.0
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if mag(mid) > target:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)

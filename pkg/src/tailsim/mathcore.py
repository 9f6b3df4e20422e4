"""Rotation kinematics: Euler angles, quaternions, rotation matrices.

Frame and sign conventions used throughout the package:

- Inertial frame: x forward, y left, z up.  Gravity acts along -z.
- Body frame: x out the nose (thrust axis), y along the left wing,
  z up through the canopy at level attitude.
- Euler angles (roll phi, pitch theta, yaw psi) compose as
  R = Rz(psi) @ Ry(-theta) @ Rx(phi), so positive pitch raises the nose
  above the horizon and theta = +90 deg is the nose-up hover attitude.
- Quaternions are scalar-first Hamilton quaternions [q0, q1, q2, q3]
  with R(q) mapping body vectors into the inertial frame.

Pure functions on value types; no shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GimbalLockError

# Sin(pitch) magnitude above which Euler extraction refuses to answer.
GIMBAL_GUARD = 1.0 - 1e-9


@dataclass(frozen=True)
class EulerAngles:
    """Roll, pitch, yaw in radians."""

    phi: float
    theta: float
    psi: float


def skew(v: np.ndarray) -> np.ndarray:
    """3x3 matrix S(v) with S(v) @ w == cross(v, w); S is antisymmetric."""
    vx, vy, vz = float(v[0]), float(v[1]), float(v[2])
    return np.array([
        [0.0, -vz, vy],
        [vz, 0.0, -vx],
        [-vy, vx, 0.0],
    ])


def euler_to_rotmat(angles: EulerAngles) -> np.ndarray:
    """Body-to-inertial rotation matrix for the given Euler angles."""
    cphi, sphi = math.cos(angles.phi), math.sin(angles.phi)
    cth, sth = math.cos(angles.theta), math.sin(angles.theta)
    cpsi, spsi = math.cos(angles.psi), math.sin(angles.psi)
    return np.array([
        [cpsi * cth, -cpsi * sth * sphi - spsi * cphi, -cpsi * sth * cphi + spsi * sphi],
        [spsi * cth, -spsi * sth * sphi + cpsi * cphi, -spsi * sth * cphi - cpsi * sphi],
        [sth, cth * sphi, cth * cphi],
    ])


def euler_to_quat(angles: EulerAngles) -> np.ndarray:
    """Unit quaternion representing the same rotation as euler_to_rotmat."""
    cphi, sphi = math.cos(0.5 * angles.phi), math.sin(0.5 * angles.phi)
    cth, sth = math.cos(0.5 * angles.theta), math.sin(0.5 * angles.theta)
    cpsi, spsi = math.cos(0.5 * angles.psi), math.sin(0.5 * angles.psi)
    return np.array([
        cpsi * cth * cphi - spsi * sth * sphi,
        cpsi * cth * sphi + spsi * sth * cphi,
        -cpsi * sth * cphi + spsi * cth * sphi,
        cpsi * sth * sphi + spsi * cth * cphi,
    ])


def quat_to_rotmat(q: np.ndarray) -> np.ndarray:
    """Body-to-inertial rotation matrix of a unit quaternion."""
    q0, q1, q2, q3 = q
    return np.array([
        [1.0 - 2.0 * (q2 * q2 + q3 * q3), 2.0 * (q1 * q2 - q0 * q3), 2.0 * (q1 * q3 + q0 * q2)],
        [2.0 * (q1 * q2 + q0 * q3), 1.0 - 2.0 * (q1 * q1 + q3 * q3), 2.0 * (q2 * q3 - q0 * q1)],
        [2.0 * (q1 * q3 - q0 * q2), 2.0 * (q2 * q3 + q0 * q1), 1.0 - 2.0 * (q1 * q1 + q2 * q2)],
    ])


def quat_to_euler(q: np.ndarray) -> EulerAngles:
    """Euler angles of a unit quaternion.

    Raises:
        GimbalLockError: pitch within numerical reach of +/-90 deg, where
            roll and yaw are no longer separable.  Callers flying through
            the vertical must stay in quaternion space.
    """
    q0, q1, q2, q3 = q
    sth = 2.0 * (q1 * q3 - q0 * q2)
    if abs(sth) > GIMBAL_GUARD:
        raise GimbalLockError(f"pitch too close to +/-90 deg (sin(theta) = {sth:.12f})")
    phi = math.atan2(2.0 * (q2 * q3 + q0 * q1), 1.0 - 2.0 * (q1 * q1 + q2 * q2))
    psi = math.atan2(2.0 * (q1 * q2 + q0 * q3), 1.0 - 2.0 * (q2 * q2 + q3 * q3))
    return EulerAngles(phi, math.asin(sth), psi)


def quat_pitch(q: np.ndarray) -> float:
    """Pitch angle only, clamped through the gimbal-lock region.

    Telemetry helper: does not raise near the vertical, unlike quat_to_euler.
    """
    sth = 2.0 * (q[1] * q[3] - q[0] * q[2])
    return math.asin(min(1.0, max(-1.0, sth)))


def quat_normalize(q: np.ndarray) -> np.ndarray:
    return q / math.sqrt(float(q @ q))


def quat_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product a (x) b."""
    a0, av = a[0], a[1:]
    b0, bv = b[0], b[1:]
    return np.concatenate(([a0 * b0 - av @ bv], a0 * bv + b0 * av + np.cross(av, bv)))


def quat_conjugate(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_derivative(q: np.ndarray, omega: np.ndarray) -> tuple[float, np.ndarray]:
    """Quaternion kinematics driven by body angular rate.

    Returns (q0_dot, q_vec_dot) with
        q_vec_dot = 0.5 (S(q_vec) + q0 I) omega,
        q0_dot    = -0.5 q_vec . omega.
    The pair conserves the quaternion norm exactly in continuous time.
    """
    q0, qv = q[0], q[1:]
    qv_dot = 0.5 * (np.cross(qv, omega) + q0 * omega)
    q0_dot = -0.5 * float(qv @ omega)
    return q0_dot, qv_dot


def angular_velocity_from_quat_rates(q: np.ndarray, q_dot: np.ndarray, q0_dot: float) -> np.ndarray:
    """Body angular rate from consistent quaternion rates (inverse of quat_derivative)."""
    q0, qv = q[0], q[1:]
    return 2.0 * (q0 * q_dot - q0_dot * qv - np.cross(qv, q_dot))


def quat_error(q: np.ndarray, q_d: np.ndarray) -> tuple[float, np.ndarray]:
    """Attitude error quaternion (e0, e) taking q_d onto q.

    e0 = q0*q0d + q.qd and e = q0d*q - q0*qd + S(q)qd, then the global sign
    is flipped if needed so e0 >= 0 (shortest-rotation convention; resolves
    the (q, q0) / (-q, -q0) ambiguity).
    """
    q0, qv = q[0], q[1:]
    q0d, qvd = q_d[0], q_d[1:]
    e0 = float(q0 * q0d + qv @ qvd)
    e = q0d * qv - q0 * qvd + np.cross(qv, qvd)
    if e0 < 0.0:
        return -e0, -e
    return e0, e


def euler_rate_matrix(angles: EulerAngles) -> np.ndarray:
    """Matrix Z with Omega_body = Z @ (phi_dot, theta_dot, psi_dot)."""
    cphi, sphi = math.cos(angles.phi), math.sin(angles.phi)
    cth, sth = math.cos(angles.theta), math.sin(angles.theta)
    return np.array([
        [1.0, 0.0, sth],
        [0.0, -cphi, sphi * cth],
        [0.0, sphi, cphi * cth],
    ])


def _check_pitch_domain(theta: float) -> None:
    if abs(theta) >= 0.5 * math.pi - 1e-6:
        raise GimbalLockError(f"|pitch| = {abs(theta):.8f} rad too close to 90 deg")


def euler_to_body_rates(rates: np.ndarray, angles: EulerAngles) -> np.ndarray:
    """Body angular rate from Euler-angle rates (phi_dot, theta_dot, psi_dot)."""
    _check_pitch_domain(angles.theta)
    return euler_rate_matrix(angles) @ np.asarray(rates, dtype=float)


def body_to_euler_rates(omega: np.ndarray, angles: EulerAngles) -> np.ndarray:
    """Euler-angle rates from body angular rate; inverse of euler_to_body_rates."""
    _check_pitch_domain(angles.theta)
    cphi, sphi = math.cos(angles.phi), math.sin(angles.phi)
    tth = math.tan(angles.theta)
    cth = math.cos(angles.theta)
    p, q, r = float(omega[0]), float(omega[1]), float(omega[2])
    psi_dot = (sphi * q + cphi * r) / cth
    return np.array([
        p - tth * (sphi * q + cphi * r),
        -cphi * q + sphi * r,
        psi_dot,
    ])

"""Rotation algebra for camera pointing: LookAt, noise sampling, Rodrigues.

Vectors are length-3 float arrays and rotations are 3x3 float arrays whose
columns are the camera axes expressed in the setup frame, so ``R @ v_cam``
maps a camera-frame vector into the setup frame.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLookAt, NonUnitAxis

UNIT_TOL = 1e-9
DEFAULT_UP = np.array([0.0, -1.0, 0.0])


@dataclass(frozen=True)
class NoiseModel:
    """Isotropic pointing noise; ``ape_deg`` is the std of the error angle."""

    ape_deg: float = 0.0

    def __post_init__(self):
        if not self.ape_deg >= 0.0:
            raise ValueError(f"ape_deg must be >= 0, got {self.ape_deg}")


@dataclass(frozen=True)
class PerturbationSample:
    axis: np.ndarray
    angle_deg: float


def unit(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return v / n


def look_at(camera_position, target=(0.0, 0.0, 0.0), up_hint=DEFAULT_UP):
    """Ideal camera rotation whose optical axis points from the camera to ``target``.

    Columns are ``[up x z, z x (up x z), z]`` (normalized) with ``z`` the unit
    boresight. The default up hint ``[0, -1, 0]`` is the sensor-column
    direction, which for a nadir camera yields ``x = [1,0,0]``,
    ``y = [0,-1,0]``, ``z = [0,0,-1]``.
    """
    pos = np.asarray(camera_position, dtype=float)
    boresight = np.asarray(target, dtype=float) - pos
    dist = np.linalg.norm(boresight)
    if dist <= UNIT_TOL:
        raise DegenerateLookAt("camera position coincides with the target")
    z = boresight / dist
    up = unit(up_hint)
    x = np.cross(up, z)
    nx = np.linalg.norm(x)
    if nx <= UNIT_TOL:
        raise DegenerateLookAt("up hint is parallel to the boresight")
    x /= nx
    y = np.cross(z, x)
    return np.column_stack((x, y, z))


def sample_perturbation(noise, rng):
    """Draw a uniform axis on S^2 and a Gaussian angle (degrees) of std ``noise.ape_deg``."""
    axis = rng.standard_normal(3)
    n = np.linalg.norm(axis)
    while n < 1e-12:  # measure-zero, but keep the axis well defined
        axis = rng.standard_normal(3)
        n = np.linalg.norm(axis)
    axis = axis / n
    g = rng.standard_normal()
    angle = g * noise.ape_deg if noise.ape_deg > 0.0 else 0.0
    return PerturbationSample(axis=axis, angle_deg=float(angle))


def rodrigues(p):
    """Rotation by ``p.angle_deg`` about the unit axis ``p.axis``."""
    w = np.asarray(p.axis, dtype=float)
    if abs(np.linalg.norm(w) - 1.0) > UNIT_TOL:
        raise NonUnitAxis(f"axis norm {np.linalg.norm(w)!r} is not 1")
    th = np.radians(p.angle_deg)
    c, s = np.cos(th), np.sin(th)
    k = 1.0 - c
    wx, wy, wz = w
    return np.array([
        [c + wx * wx * k, wx * wy * k - wz * s, wx * wz * k + wy * s],
        [wx * wy * k + wz * s, c + wy * wy * k, wy * wz * k - wx * s],
        [wx * wz * k - wy * s, wy * wz * k + wx * s, c + wz * wz * k],
    ])


def perturb(ideal, delta):
    """Noisy rotation: the perturbation is applied in the setup frame, ``delta @ ideal``."""
    return np.asarray(delta) @ np.asarray(ideal)


def camera_axes(rotation):
    """Return the (x, y, z) camera axes in the setup frame."""
    r = np.asarray(rotation)
    return r[:, 0], r[:, 1], r[:, 2]


def angle_between_deg(a, b):
    cosang = np.dot(unit(a), unit(b))
    return float(np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0))))


def is_rotation(r, tol=UNIT_TOL):
    r = np.asarray(r)
    return (np.max(np.abs(r.T @ r - np.eye(3))) < tol
            and abs(np.linalg.det(r) - 1.0) < tol)

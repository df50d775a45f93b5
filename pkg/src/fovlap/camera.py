"""Normalized pinhole camera and projection of its frustum onto a flat surface."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import PixelOutOfBounds

PARALLEL_EPS = 1e-12


@dataclass(frozen=True)
class CameraIntrinsics:
    """Angular field of view in degrees (``phi_x`` along sensor rows)."""

    phi_x_deg: float
    phi_y_deg: float

    def __post_init__(self):
        if not 0.0 < self.phi_y_deg <= self.phi_x_deg < 180.0:
            raise ValueError(
                f"need 0 < phi_y <= phi_x < 180 deg, got "
                f"phi_x={self.phi_x_deg}, phi_y={self.phi_y_deg}")

    @classmethod
    def from_footprint(cls, w_x_km, w_y_km, h_orbit_km):
        """Intrinsics whose nadir footprint from ``h_orbit_km`` is ``w_x`` by ``w_y``."""
        if w_y_km > w_x_km:
            raise ValueError("footprint must satisfy W_y <= W_x")
        return cls(math.degrees(2.0 * math.atan(w_x_km / (2.0 * h_orbit_km))),
                   math.degrees(2.0 * math.atan(w_y_km / (2.0 * h_orbit_km))))

    @property
    def f_tilde(self):
        return 1.0 / math.tan(math.radians(self.phi_x_deg) / 2.0)

    @property
    def phi_ratio(self):
        return self.phi_y_deg / self.phi_x_deg

    @property
    def phi_tilde(self):
        # Half-height of the normalized image plane. The tangent ratio puts
        # the frustum's y edges exactly at +-phi_y/2.
        return (math.tan(math.radians(self.phi_y_deg) / 2.0)
                / math.tan(math.radians(self.phi_x_deg) / 2.0))

    @property
    def k_matrix(self):
        f = self.f_tilde
        return np.diag([f, f, 1.0])


@dataclass(frozen=True)
class CameraPose:
    position: np.ndarray
    rotation: np.ndarray
    camera_id: int = 0


@dataclass(frozen=True)
class FootprintPolygon:
    """Convex CCW polygon on the surface plane; ``valid=False`` means no footprint."""

    vertices: tuple = ()
    valid: bool = True

    @classmethod
    def empty(cls):
        return cls((), False)

    def __len__(self):
        return len(self.vertices)

    @property
    def is_empty(self):
        return not self.valid or len(self.vertices) < 3

    def as_array(self):
        return np.array(self.vertices, dtype=float).reshape(-1, 2)


def pixel_ray(intr, pose, u, v):
    """Setup-frame direction through normalized pixel (u, v); not normalized."""
    pt = intr.phi_tilde
    if not (-1.0 <= u <= 1.0) or not (-pt - 1e-12 <= v <= pt + 1e-12):
        raise PixelOutOfBounds(f"(u, v) = ({u}, {v}) outside [-1,1] x [-{pt}, {pt}]")
    f = intr.f_tilde
    return np.asarray(pose.rotation) @ np.array([u / f, v / f, 1.0])


def frustum_rays(intr, pose):
    """Corner rays l1..l4 at (-1, +pt), (1, +pt), (-1, -pt), (1, -pt); shape (4, 3)."""
    pt = intr.phi_tilde
    f = intr.f_tilde
    corners = np.array([[-1.0, pt, 1.0], [1.0, pt, 1.0],
                        [-1.0, -pt, 1.0], [1.0, -pt, 1.0]])
    corners[:, :2] /= f
    return corners @ np.asarray(pose.rotation).T


def _ccw(points):
    area2 = 0.0
    n = len(points)
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        area2 += x0 * y1 - x1 * y0
    return points if area2 >= 0.0 else points[::-1]


def project_footprint(pose, rays, surface_height=0.0):
    """Intersect the four corner rays with the plane ``z = surface_height``.

    Returns an invalid footprint (rather than raising) when any ray runs
    parallel to the plane or hits it behind the camera.
    """
    pos = np.asarray(pose.position, dtype=float)
    dz = surface_height - pos[2]
    hits = []
    # l1, l2, l4, l3 walk the rectangle's boundary
    for i in (0, 1, 3, 2):
        lx, ly, lz = rays[i]
        if abs(lz) < PARALLEL_EPS:
            return FootprintPolygon.empty()
        t = dz / lz
        if t <= 0.0:
            return FootprintPolygon.empty()
        hits.append((float(pos[0] + lx * t), float(pos[1] + ly * t)))
    return FootprintPolygon(tuple(_ccw(hits)), True)


def anchor_footprint_dims(intr, h_orbit):
    """Closed-form nadir footprint (W_x, W_y) in km."""
    if h_orbit <= 0:
        raise ValueError("h_orbit must be positive")
    return (2.0 * h_orbit * math.tan(math.radians(intr.phi_x_deg) / 2.0),
            2.0 * h_orbit * math.tan(math.radians(intr.phi_y_deg) / 2.0))


def footprint(intr, pose, surface_height=0.0):
    return project_footprint(pose, frustum_rays(intr, pose), surface_height)

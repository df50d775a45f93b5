"""String-of-pearls satellite formation: positions, anchor and scenario."""
import math
from dataclasses import dataclass, field

import numpy as np

from .camera import CameraIntrinsics, CameraPose
from .geometry import DEFAULT_UP, look_at


@dataclass(frozen=True)
class FormationConfig:
    h_earth_km: float = 6371.0
    h_orbit_km: float = 500.0
    arc_spacing_km: float = 100.0
    n_cam: int = 10
    intrinsics: CameraIntrinsics = field(
        default_factory=lambda: CameraIntrinsics.from_footprint(100.0, 70.0, 500.0))

    def __post_init__(self):
        for name in ("h_earth_km", "h_orbit_km", "arc_spacing_km"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.n_cam < 2:
            raise ValueError("n_cam must be >= 2")

    @property
    def orbit_radius_km(self):
        return self.h_earth_km + self.h_orbit_km

    @property
    def delta_xi_rad(self):
        return self.arc_spacing_km / self.orbit_radius_km


@dataclass(frozen=True)
class Scenario:
    """Immutable camera setup shared by all Monte Carlo samples."""

    positions: tuple
    ideal_poses: tuple
    intrinsics: CameraIntrinsics
    anchor_index: int
    surface_height: float = 0.0

    @property
    def n_cam(self):
        return len(self.positions)


def xi_grid(cfg):
    """Orbit angle of each camera, c = 1..N; zero at the nadir anchor."""
    n = cfg.n_cam
    center = n / 2 if n % 2 == 0 else (n + 1) / 2
    return [(c - center) * cfg.delta_xi_rad for c in range(1, n + 1)]


def camera_positions(cfg):
    h = cfg.orbit_radius_km
    return [np.array([h * math.sin(xi), 0.0, h * math.cos(xi) - cfg.h_earth_km])
            for xi in xi_grid(cfg)]


def select_anchor(positions):
    """Index of the camera closest to the origin; ties go to the lowest index."""
    if len(positions) == 0:
        raise ValueError("no positions")
    dists = [float(np.linalg.norm(p)) for p in positions]
    return int(np.argmin(dists))


def pairwise_baseline(positions, c, c2):
    return float(np.linalg.norm(np.asarray(positions[c]) - np.asarray(positions[c2])))


def scenario_from_positions(positions, intrinsics, target=(0.0, 0.0, 0.0),
                            up_hint=DEFAULT_UP, anchor_index=None, surface_height=0.0):
    positions = tuple(np.asarray(p, dtype=float) for p in positions)
    poses = tuple(CameraPose(p, look_at(p, target, up_hint), i)
                  for i, p in enumerate(positions))
    if anchor_index is None:
        anchor_index = select_anchor(positions)
    return Scenario(positions, poses, intrinsics, anchor_index, surface_height)


def build_scenario(cfg):
    return scenario_from_positions(camera_positions(cfg), cfg.intrinsics)
